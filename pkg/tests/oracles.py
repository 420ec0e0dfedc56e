"""Brute-force reference evaluators written straight from the metric definitions.

They work on plain nested lists and share no code with specgen.metrics.
matrix[i][j] is (compiles, passes_tests, distinguishes) for task i, sample j.
"""


def syn_at_k(matrix, k):
    total = 0
    for row in matrix:
        hit = 0
        for j in range(k):
            if row[j][0]:
                hit = 1
        total += hit
    return total / len(matrix)


def sem_at_k(matrix, k):
    total = 0
    for row in matrix:
        hit = 0
        for j in range(k):
            if row[j][1]:
                hit = 1
        total += hit
    return total / len(matrix)


def bug_rate(matrix, bugs):
    """bugs[i] is the bug key of task i; returns (distinguished, total)."""
    keys = []
    for b in bugs:
        if b not in keys:
            keys.append(b)
    good = 0
    for key in keys:
        found = False
        for i, row in enumerate(matrix):
            if bugs[i] != key:
                continue
            for cell in row:
                if cell[2]:
                    found = True
        if found:
            good += 1
    return good, len(keys)


def rank_means(lengths):
    """Per-rank mean of reasoning lengths; ties keep sample order."""
    n = len(lengths[0])
    sums = [0.0] * n
    for row in lengths:
        ranked = sorted(range(n), key=lambda j: (row[j], j))
        for r, j in enumerate(ranked):
            sums[r] += row[j]
    return [s / len(lengths) for s in sums]
