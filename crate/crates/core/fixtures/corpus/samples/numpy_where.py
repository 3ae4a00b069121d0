import numpy as np
values = np.array([-2, 5, -1, 7])
positive = np.where(values > 0, values, 0)
print(positive)
