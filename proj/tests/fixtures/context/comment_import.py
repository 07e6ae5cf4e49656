# import torch
import os  # import tensorflow as tf
print(os.getcwd())
