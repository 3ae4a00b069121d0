import requests
update = {'done': True}
resp = requests.put('https://api.example.com/tasks/7', json=update, timeout=5)
print(resp.ok)
