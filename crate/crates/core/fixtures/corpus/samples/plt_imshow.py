import matplotlib.pyplot as plt
pixels = [[0, 1], [1, 0]]
plt.imshow(pixels, cmap='gray')
