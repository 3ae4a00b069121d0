import numpy as np
labels = ['a', 'b', 'a', 'c']
print(np.unique(labels))
