import numpy as np
count = 0
while count < 3:
    if count % 2 == 0:
        print(count)
    else:
        pass
    count += 1
print(np.zeros(count))
