"""Independent oracles used to check the production detectors.

Everything here is deliberately naive: direct token-by-token scans with no
hashing and no shared code with the package, so a bug in the fast paths
cannot hide itself in the oracle.
"""

from __future__ import annotations


def greedy_tiling_oracle(xs, ys, min_match=2):
    """Exhaustive greedy tiling: (coverage, tiles).

    Repeatedly scans every (i, j) start pair for the longest common
    substring over still-unmarked tokens, claims it (ties: lowest i, then
    lowest j), and stops when nothing of at least min_match remains.
    """
    xs = list(xs)
    ys = list(ys)
    marked_x = [False] * len(xs)
    marked_y = [False] * len(ys)
    tiles = []
    coverage = 0
    while True:
        best = None
        for i in range(len(xs)):
            if marked_x[i]:
                continue
            for j in range(len(ys)):
                if marked_y[j] or xs[i] != ys[j]:
                    continue
                k = 0
                while (i + k < len(xs) and j + k < len(ys)
                       and not marked_x[i + k] and not marked_y[j + k]
                       and xs[i + k] == ys[j + k]):
                    k += 1
                if k >= min_match and (best is None or k > best[0]):
                    best = (k, i, j)
        if best is None:
            break
        k, i, j = best
        for t in range(k):
            marked_x[i + t] = True
            marked_y[j + t] = True
        tiles.append((i, j, k))
        coverage += k
    return coverage, tiles
