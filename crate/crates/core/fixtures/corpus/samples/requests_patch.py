import requests
change = {'title': 'Renamed'}
answer = requests.patch('https://api.example.com/docs/3', json=change)
print(answer.reason)
