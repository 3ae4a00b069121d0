import pandas as pd
def load_table(path):
    table = pd.read_csv(path)
    return table.fillna(0)
result = load_table('inventory.csv')
print(result)
