import requests
allowed = requests.options('https://api.example.com/items')
print(allowed.headers.get('Allow'))
