import pandas as pd
# quarterly numbers live in a workbook
book = pd.read_excel('report.xlsx', sheet_name='Q1')
print(book.shape)
