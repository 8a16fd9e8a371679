"""W-random samples converge to their generating hypergraphon.

Draws random 3-graphs from a step hypergraphon at growing n, tracks how the
empirical edge density and positive-codegree ratio approach the limit
values, and compares against the closed-form Azuma tail bounds.
"""
from fractions import Fraction

from poscodegree import (
    KGraph,
    StepHypergraphon,
    azuma_bound_degree,
    convergence_experiment,
    density,
    directed_cycle_hypergraphon,
    estimate_containment,
    mc_density,
    min_positive_degree,
    sample,
)

EDGE = KGraph(3, 3, frozenset({(0, 1, 2)}))

# A two-part step hypergraphon whose edge probability depends only on the
# three pair coordinates: an edge appears iff all pairs land in part 0.
PAIRS = tuple(frozenset(p) for p in ((0, 1), (0, 2), (1, 2)))
VALUES = tuple(
    Fraction(1) if idx == 0 else Fraction(0) for idx in range(2 ** 3)
)
W = StepHypergraphon(3, (Fraction(1, 2), Fraction(1, 2)), PAIRS, VALUES)

print("limit edge density          :", density(EDGE, W))
print("limit min positive codegree :", min_positive_degree(W, 2))
print()

# ---------------------------------------------------------------------------
# Growing-n experiment: per-trial ratios plus min/mean/max summaries.
# ---------------------------------------------------------------------------
print(f"{'kind':>9} {'n':>5} {'pos_ratio':>10} {'edge_density':>13}")
for row in convergence_experiment(W, 2, [20, 50, 100], 5, 42, [EDGE]):
    n = "" if row.n is None else row.n
    d = "" if not row.densities else f"{row.densities[0]:.4f}"
    print(f"{row.kind:>9} {n:>5} {row.pos_ratio:>10.4f} {d:>13}")
print()

# ---------------------------------------------------------------------------
# Monte Carlo estimators agree with the exact value 1/8.
# ---------------------------------------------------------------------------
est = estimate_containment(EDGE, W, 50_000, 7)
print(f"containment estimate : {est.value:.5f} +- {est.stderr:.5f}")
mc = mc_density(EDGE, directed_cycle_hypergraphon(), 50_000, 7)
print(f"directed-cycle MC    : {mc.value:.5f} +- {mc.stderr:.5f}")
print()

# ---------------------------------------------------------------------------
# Tail bounds: probability that a degree ratio strays by eps, and that an
# all-zero hypergraphon produces any positive codegree at all.
# ---------------------------------------------------------------------------
for n in (50, 200, 1000):
    b = azuma_bound_degree(0.1, n, 3)
    print(f"n = {n:>4}: P(deviation > 0.1) <= {b:.3e}")
empty = StepHypergraphon.constant(3, 0)
G = sample(500, empty, seed=1)
assert G.min_positive_degree(2) == 0
print("zero hypergraphon sampled an empty graph, as it must")
