import pandas as pd
raw = pd.read_csv('raw.csv')
cleaned = raw.dropna()
cleaned.to_csv('clean.csv', index=False)
