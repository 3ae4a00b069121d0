import json
mapping = {'b': 2, 'a': 1}
encoded = json.dumps(mapping, sort_keys=True)
print(encoded)
