import json
row = {'a': 1, 'b': [2, 3]}
line = json.dumps(row, separators=(',', ':'))
print(line)
