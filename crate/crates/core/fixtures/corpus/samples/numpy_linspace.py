import numpy as np
xs = np.linspace(0, 1, 11)
print(xs)
