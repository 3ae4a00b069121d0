import requests
headers = {'Accept': 'application/json'}
r = requests.get('https://api.example.com/status', headers=headers)
print(r.headers)
