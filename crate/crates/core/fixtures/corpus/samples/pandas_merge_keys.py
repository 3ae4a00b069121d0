import pandas as pd
left = pd.DataFrame({'key': [1, 2, 3], 'a': [4, 5, 6]})
right = pd.DataFrame({'key': [1, 2, 3], 'b': [7, 8, 9]})
joined = pd.merge(left, right, on='key')
print(joined)
