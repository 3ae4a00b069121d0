import json
text = '{"ok": true}'
parsed = json.loads(text)
print(parsed['ok'])
