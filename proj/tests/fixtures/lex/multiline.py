"""Module docstring.

import tensorflow as tf
"""


def f(a,
      b=2,
      *args, **kw):
    total = a + \
        b
    data = [
        1, 2,  # trailing
        3,
    ]
    doc = '''one
two # three'''
    return total, data, doc
