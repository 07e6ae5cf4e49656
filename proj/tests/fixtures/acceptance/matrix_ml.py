import numpy as np

P = np.eye(3)
print(P)
