import requests
def fetch_user(user_id):
    url = 'https://api.example.com/users/' + str(user_id)
    return requests.get(url, timeout=10)
user = fetch_user(42)
print(user.json())
