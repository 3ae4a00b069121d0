import requests
payload = {'name': 'widget', 'qty': 3}
reply = requests.post('https://api.example.com/orders', json=payload)
print(reply.status_code)
