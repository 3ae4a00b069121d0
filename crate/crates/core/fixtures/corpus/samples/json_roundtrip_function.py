import json
def roundtrip(obj):
    return json.loads(json.dumps(obj))
print(roundtrip([1, 2, 3]))
