import pandas as pd
frame = pd.DataFrame({'city': ['Oslo', 'Lima'], 'pop': [0.7, 9.7]})
print(frame.to_string())
