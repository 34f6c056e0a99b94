"""Reference Kruskal-Wallis and Dunn/Bonferroni values for test_evalsuite.

Regenerate with: python3 tests/oracles/gen_stats_reference.py > tests/data/stats_reference.json
"""
import json

import numpy as np
import scikit_posthocs as sp
from scipy import stats


def case(groups):
    h, p = stats.kruskal(*groups)
    dunn = sp.posthoc_dunn([list(g) for g in groups], p_adjust="bonferroni").to_numpy()
    return {"groups": [list(map(float, g)) for g in groups], "h": float(h), "p": float(p), "dunn": dunn.tolist()}


def main():
    rng = np.random.default_rng(20181015)
    cases = [case([[1, 2, 3], [4, 5, 6], [7, 8, 9]])]
    while len(cases) < 51:
        k = int(rng.integers(2, 6))
        groups = []
        for _ in range(k):
            n = int(rng.integers(3, 25))
            if rng.random() < 0.5:
                groups.append(rng.integers(0, 8, n).astype(float))  # heavy ties
            else:
                groups.append(np.round(rng.normal(rng.normal(0, 1), 1, n), 3))
        if len(set(np.concatenate(groups))) < 2:
            continue
        cases.append(case(groups))
    print(json.dumps({"cases": cases}, indent=1))


if __name__ == "__main__":
    main()
