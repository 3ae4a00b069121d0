import matplotlib.pyplot as plt
names = ['a', 'b', 'c']
counts = [3, 7, 2]
plt.bar(names, counts)
