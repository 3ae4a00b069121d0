import numpy as np
steps = [1, 2, 3, 4]
running = np.cumsum(steps)
print(running[-1])
