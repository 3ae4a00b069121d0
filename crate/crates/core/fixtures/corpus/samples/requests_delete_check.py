import requests
gone = requests.delete('https://api.example.com/tasks/7')
if gone.status_code == 204:
    print('deleted')
