import json
blob = 'not json'
try:
    value = json.loads(blob)
except ValueError:
    value = None
print(value)
