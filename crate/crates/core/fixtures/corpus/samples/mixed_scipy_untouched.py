import scipy
import numpy as np
points = np.array([1.0, 2.0, 3.0])
print(scipy.stats.describe(points))
