import numpy as np
grid = np.zeros((3, 3))
for i in range(3):
    grid[i, i] = 1.0
print(grid)
