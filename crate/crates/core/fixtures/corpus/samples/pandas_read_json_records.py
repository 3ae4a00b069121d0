import pandas as pd
events = pd.read_json('events.json', orient='records')
print(len(events))
