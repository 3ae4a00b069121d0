import pandas as pd
days = pd.date_range('2024-01-01', periods=7)
print(days)
