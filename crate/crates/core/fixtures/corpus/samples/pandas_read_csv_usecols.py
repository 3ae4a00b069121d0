import pandas as pd
subset = pd.read_csv('wide.csv', usecols=['id', 'score'])
print(subset.dtypes)
