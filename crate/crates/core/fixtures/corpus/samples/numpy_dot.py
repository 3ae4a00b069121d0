import numpy as np
a = np.arange(6).reshape(2, 3)
b = np.ones((3, 2))
print(np.dot(a, b))
