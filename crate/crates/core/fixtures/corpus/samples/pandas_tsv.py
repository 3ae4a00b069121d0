import pandas as pd
genes = pd.read_csv('genes.tsv', sep='\t')
print(genes.columns)
