import requests
results = []
for n in range(1, 4):
    page = requests.get('https://api.example.com/list', params={'page': n})
    results.extend(page.json())
print(len(results))
