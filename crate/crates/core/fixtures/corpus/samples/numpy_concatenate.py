import numpy as np
first = np.array([1, 2])
second = np.array([3, 4])
print(np.concatenate([first, second]))
