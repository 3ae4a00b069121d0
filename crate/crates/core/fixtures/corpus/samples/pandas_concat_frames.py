import pandas as pd
parts = []
for name in ['jan.csv', 'feb.csv', 'mar.csv']:
    parts.append(pd.read_csv(name))
combined = pd.concat(parts, ignore_index=True)
print(combined.tail())
