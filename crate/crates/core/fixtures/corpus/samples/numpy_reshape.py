import numpy as np
flat = np.arange(12)
print(flat.reshape(3, 4))
