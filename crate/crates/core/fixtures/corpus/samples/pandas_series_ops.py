import pandas as pd
prices = pd.Series([3.5, 4.0, 2.25, 5.75])
print(prices.max() - prices.min())
