import matplotlib.pyplot as plt
xs = [1, 2, 3]
ys = [2, 4, 1]
plt.scatter(xs, ys)
plt.xlabel('x')
plt.ylabel('y')
plt.show()
