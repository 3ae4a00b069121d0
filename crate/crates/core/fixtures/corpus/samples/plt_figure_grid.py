import matplotlib.pyplot as plt
plt.figure(figsize=(6, 4))
plt.grid(True)
plt.legend(['series'])
