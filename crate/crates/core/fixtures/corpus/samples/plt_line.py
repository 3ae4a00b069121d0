import matplotlib.pyplot as plt
data = [1, 4, 9, 16]
plt.plot(data, data)
