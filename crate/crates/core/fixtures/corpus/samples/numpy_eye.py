import numpy as np
identity = np.eye(4)
print(identity.shape)
