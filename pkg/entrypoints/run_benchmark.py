import logging

import pandas as pd
from tqdm import tqdm

from simnet.bench import run_bench

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s",
)

SEED = 0
REPEATS = 3
# (hypotheses, findings); findings above 20 run the local mode only
GRID = [(2, 8), (4, 12), (8, 16), (8, 20), (16, 32)]

if __name__ == "__main__":
    tables = []
    for n_hypotheses, n_findings in tqdm(GRID):
        table = run_bench(
            n_hypotheses=n_hypotheses,
            vars_per_local=n_findings,
            n_findings=n_findings,
            seed=SEED,
            repeats=REPEATS,
        )
        table.insert(0, "findings", n_findings)
        table.insert(0, "hypotheses", n_hypotheses)
        tables.append(table)

    summary = pd.concat(tables, ignore_index=True)
    print(summary.to_string(index=False))
