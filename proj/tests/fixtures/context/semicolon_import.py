import sys; import pandas as pd
print(sys, pd)
