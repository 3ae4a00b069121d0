"""Summarise the weekly export."""
import pandas as pd
weekly = pd.read_csv('weekly.csv')
print(weekly.describe())
