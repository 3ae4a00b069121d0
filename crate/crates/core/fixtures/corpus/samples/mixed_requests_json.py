import json
import requests
resp = requests.get('https://api.example.com/config')
with open('config.json', 'w') as fh:
    json.dump(resp.json(), fh)
