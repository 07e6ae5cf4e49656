import json


def scale(values, factor):
  result = []
  for value in values:
    result.append(value * factor)
  return result


print(json.dumps(scale([1], 2)))
