import pandas as pd
import matplotlib.pyplot as plt
frame = pd.read_csv('temps.csv')
frame.plot(x='day', y='temp')
plt.savefig('temps.png')
