import requests
try:
    ping = requests.head('https://example.com', timeout=3)
    print(ping.status_code)
except requests.RequestException as err:
    print('failed', err)
