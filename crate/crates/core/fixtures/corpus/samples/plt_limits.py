import matplotlib.pyplot as plt
plt.xlim(0, 10)
plt.ylim(-1, 1)
plt.axhline(0)
