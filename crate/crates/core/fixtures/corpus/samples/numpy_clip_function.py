import numpy as np
def normalise(data, low=0.0, high=1.0):
    return np.clip(data, low, high)
print(normalise([-0.5, 0.5, 1.5]))
