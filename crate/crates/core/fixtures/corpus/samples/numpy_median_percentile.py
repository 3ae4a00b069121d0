import numpy as np
samples = [4, 8, 15, 16, 23, 42]
middle = np.median(samples)
upper = np.percentile(samples, 90)
print(middle, upper)
