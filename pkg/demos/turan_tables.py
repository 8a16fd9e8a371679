"""Exact positive-codegree Turan numbers for small forbidden families.

Walks the small-n regime where brute force over all labelled 3-graphs is
feasible, prints the extremal value and normalized ratio for each n, and
shows a verified extremal witness.
"""
from poscodegree import (
    KGraph,
    SearchProblem,
    brute_force,
    ratio_table,
    serialize_graph,
    verify_witness,
)

K4 = KGraph.complete(4, 3)
EDGE = KGraph(3, 3, frozenset({(0, 1, 2)}))

# ---------------------------------------------------------------------------
# Table of extremal values: forbid K4^(3), codegree version (l = 2).
# ---------------------------------------------------------------------------
print("forbidden family {K4}, l = 2, mode = positive")
print(f"{'n':>3} {'value':>6} {'ratio':>8} {'exact':>6}")
for row in ratio_table(3, 2, (K4,), range(4, 7), "positive"):
    print(f"{row.n:>3} {row.value:>6} {str(row.ratio):>8} {str(row.exact):>6}")

# ---------------------------------------------------------------------------
# The n = 4 extremal example in full.  Several non-isomorphic witnesses
# attain the value; the densest one is K4 minus one edge.
# ---------------------------------------------------------------------------
problem = SearchProblem(4, 3, 2, (K4,), "positive")
result = brute_force(problem)
witness = max(result.witnesses, key=lambda g: len(g.edges))
assert verify_witness(problem, witness, result.value)
print()
print(f"extremal value at n = 4: {result.value}")
print("one extremal witness:")
print(serialize_graph(witness))

# ---------------------------------------------------------------------------
# Contrast with the vertex-degree version (l = 1) and the plain minimum
# degree objective.
# ---------------------------------------------------------------------------
for ell, mode in ((1, "positive"), (2, "min")):
    value = brute_force(SearchProblem(5, 3, ell, (K4,), mode)).value
    print(f"n = 5, l = {ell}, mode = {mode}: {value}")

# Forbidding a single edge forces the graph to be empty, so every positive
# degree threshold collapses to zero.
for n in (4, 5, 6):
    value = brute_force(SearchProblem(n, 3, 2, (EDGE,), "positive")).value
    assert value == 0
print("forbidding one edge gives value 0 for n = 4, 5, 6 (checked)")
