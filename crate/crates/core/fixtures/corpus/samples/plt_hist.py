import matplotlib.pyplot as plt
heights = [150, 160, 165, 170, 172, 180]
plt.hist(heights, bins=3)
plt.title('Heights')
plt.savefig('heights.png')
