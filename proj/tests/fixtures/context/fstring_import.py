name = "torch"
message = f"import {name}; import numpy as np"
raw = rf'from pandas import DataFrame {name}'
print(message, raw)
