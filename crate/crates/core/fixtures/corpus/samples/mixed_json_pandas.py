import json
import pandas as pd
with open('meta.json') as fh:
    meta = json.load(fh)
table = pd.read_csv(meta['path'])
print(table.head())
