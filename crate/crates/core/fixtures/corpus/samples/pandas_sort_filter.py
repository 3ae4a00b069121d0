import pandas as pd
people = pd.read_csv('people.csv')
adults = people[people['age'] >= 18]
ranked = adults.sort_values('age', ascending=False)
print(ranked.head(10))
