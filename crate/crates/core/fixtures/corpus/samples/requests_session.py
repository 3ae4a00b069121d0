import requests
session = requests.Session()
page = session.get('https://example.com/page/1')
print(page.text[:80])
session.close()
