import matplotlib.pyplot as plt
shares = [40, 35, 25]
plt.pie(shares, labels=['a', 'b', 'c'])
