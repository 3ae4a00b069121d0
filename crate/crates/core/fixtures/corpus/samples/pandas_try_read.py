import pandas as pd
try:
    data = pd.read_csv('maybe_missing.csv')
except FileNotFoundError:
    data = pd.DataFrame()
print(data.empty)
