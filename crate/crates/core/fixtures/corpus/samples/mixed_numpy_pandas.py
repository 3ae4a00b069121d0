import numpy as np
import pandas as pd
frame = pd.read_excel('grid.xlsx')
print(np.mean(frame.values))
