import numpy as np
scores = [0.2, 0.9, 0.4]
best = np.argmax(scores)
print('best index', best)
