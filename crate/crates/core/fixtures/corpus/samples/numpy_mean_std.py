import numpy as np
readings = np.array([12.1, 11.8, 12.4, 12.0])
print(np.mean(readings), np.std(readings))
