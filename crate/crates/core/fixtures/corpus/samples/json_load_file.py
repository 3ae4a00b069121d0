import json
with open('config.json') as fh:
    config = json.load(fh)
print(config)
