#!/usr/bin/env python3
"""Compare more than two detectors with single-elimination pairing.

The evaluation mechanisms are defined for two approaches at a time; with
more entrants, a bracket decides the overall winner, using the pairwise
human-oriented effectiveness as the fitness. Here the pairwise comparison
is mocked with a fixed effectiveness score per approach.
"""

from plagbench.analysis import run_tournament

effectiveness = {
    "token-cosine": 0.42,
    "greedy-tiling": 0.81,
    "winnowing": 0.63,
    "ast-kernel": 0.77,
    "line-hash": 0.30,
}


def compare(a, b):
    if effectiveness[a] == effectiveness[b]:
        return None  # tie: the earlier entrant advances
    return a if effectiveness[a] > effectiveness[b] else b


winner, trace = run_tournament(list(effectiveness), compare)

print("bracket trace:")
for entry in trace:
    if entry["outcome"] == "bye":
        print(f"  round {entry['round']}: {entry['a']} gets a bye")
    else:
        print(f"  round {entry['round']}: {entry['a']} vs {entry['b']} "
              f"-> {entry['advanced']}")
print(f"\nwinner: {winner}")
