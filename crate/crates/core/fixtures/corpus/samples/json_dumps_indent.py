import json
record = {'id': 1, 'tags': ['x', 'y']}
print(json.dumps(record, indent=2))
