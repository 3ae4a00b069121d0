import pandas as pd
frame = pd.read_csv('measurements.csv')
stats = frame.describe()
print(stats)
