import json
settings = {'theme': 'dark'}
with open('settings.json', 'w') as out:
    json.dump(settings, out)
