import pandas as pd
cells = [1, None, 3]
print(pd.isna(cells))
