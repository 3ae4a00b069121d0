import numpy as np
vec = np.array([3.0, 4.0])
length = np.sqrt(np.sum(vec ** 2))
print(length)
