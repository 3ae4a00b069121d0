import pandas as pd
survey = pd.read_csv('survey.csv')
answers = survey['answer'].value_counts()
print(answers.to_dict())
