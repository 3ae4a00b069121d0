import pandas as pd
orders = pd.read_csv('orders.csv')
totals = orders.groupby('region')['amount'].sum()
print(totals)
