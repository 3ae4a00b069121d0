import requests
import pandas as pd
status = requests.get('https://api.example.com/health')
log = pd.read_json('log.json')
print(status.ok, log.shape)
