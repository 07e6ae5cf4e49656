import os
import sklearn.linear_model as lm
import json, sys as system
from torch import nn
from torch.utils import data as tud, checkpoint
from . import sibling
from ..pkg.mod import helper as h
from numpy import (
    ones,
    zeros as z,
)
from pandas import *
import a.b.c


def lazy():
    import tensorflow as tf
    if tf:
        from jax import numpy as jnp
    return jnp


try: import xgboost
except ImportError: xgboost = None
x = 1; import scipy
# import keras
s = "import theano"
