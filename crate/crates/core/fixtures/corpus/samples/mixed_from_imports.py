from json import dumps
from pathlib import Path
import numpy as np
target = Path('out.json')
target.write_text(dumps({'n': 1}))
print(np.ones(2))
