import requests
response = requests.get('https://api.example.com/items', timeout=10)
response.raise_for_status()
items = response.json()
print(len(items))
