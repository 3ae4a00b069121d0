import pandas as pd
sheet = pd.read_excel('budget.xls')
sheet.to_json('budget.json')
