import matplotlib.pyplot as plt
import numpy as np
xs = np.linspace(0, 6, 50)
plt.plot(xs, xs ** 2)
plt.show()
