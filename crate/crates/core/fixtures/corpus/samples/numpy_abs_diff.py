import numpy as np
expected = [1.0, 2.0]
observed = [1.1, 1.9]
gap = [expected[0] - observed[0], expected[1] - observed[1]]
print(np.abs(gap))
