import numpy as np
weights = [0.1, 0.3, 0.6]
total = np.sum(weights)
print(round(total, 3))
