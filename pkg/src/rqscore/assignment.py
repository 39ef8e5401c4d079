"""Maximum-weight bipartite matching with deterministic tie-breaking.

Weights are assumed non-negative, so a maximum-weight matching can always be
taken to be a full assignment of the smaller side.
"""
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

Pairs = List[Tuple[int, int]]


def best_assignment(weights: Sequence[Sequence[float]]) -> Tuple[float, Pairs]:
    """Maximum total weight over assignments of the smaller side, and one optimal pair list.

    The returned total is the plain sum of the chosen original weights.
    """
    n = len(weights)
    m = len(weights[0]) if n else 0
    if n == 0 or m == 0:
        return 0.0, []
    rows, cols = linear_sum_assignment(np.asarray(weights, dtype=float), maximize=True)
    pairs = [(int(i), int(j)) for i, j in zip(rows, cols)]
    return math.fsum(weights[i][j] for i, j in pairs), pairs


def lexicographic_max_matching(weights: Sequence[Sequence[float]], tol: float = 1e-12) -> Tuple[float, Pairs]:
    """Maximum-weight matching with a deterministic choice among optima.

    Rows are settled in ascending order; each row takes the smallest column that
    still admits an optimal completion, and stays unmatched only when no column
    does. Zero-weight pairs are kept when they cost nothing, which yields the
    lexicographically smallest sorted pair list among maximum-weight matchings.
    """
    n = len(weights)
    m = len(weights[0]) if n else 0
    if n == 0 or m == 0:
        return 0.0, []
    optimum, _ = best_assignment(weights)
    slack = tol * max(1, min(n, m))
    rows = list(range(n))
    cols = list(range(m))
    fixed: Pairs = []
    gained = 0.0
    for i in range(n):
        rest_rows = [r for r in rows if r != i]
        for j in cols:
            rest_cols = [c for c in cols if c != j]
            sub = [[weights[r][c] for c in rest_cols] for r in rest_rows]
            value, _ = best_assignment(sub) if rest_rows and rest_cols else (0.0, [])
            if gained + weights[i][j] + value >= optimum - slack:
                fixed.append((i, j))
                gained += weights[i][j]
                cols = rest_cols
                break
        rows = rest_rows
        if not cols:
            break
    return math.fsum(weights[i][j] for i, j in fixed), fixed
