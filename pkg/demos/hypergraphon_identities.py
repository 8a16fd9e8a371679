"""Exact identities between finite hypergraphs and their step-function limits.

Every computation here is rational arithmetic: densities, degrees, and the
rooted product/power laws are verified with == rather than a tolerance.
"""
import random
from fractions import Fraction
from math import factorial

from poscodegree import (
    CellPoint,
    KGraph,
    LabelledKGraph,
    StepHypergraphon,
    cells,
    degree,
    density,
    from_graph,
    hom_density,
    labelled_edge,
    min_positive_degree,
    rooted_density,
    rooted_product,
)

# ---------------------------------------------------------------------------
# A graph and its associated step hypergraphon have identical densities.
# ---------------------------------------------------------------------------
G = KGraph(5, 3, frozenset({(0, 1, 2), (0, 1, 3), (2, 3, 4)}))
W = from_graph(G)
F = KGraph(3, 3, frozenset({(0, 1, 2)}))
print("edge density of G      :", hom_density(F, G))
print("edge density of W_G    :", density(F, W))
assert density(F, W) == hom_density(F, G)

# ---------------------------------------------------------------------------
# Codegrees scale by (k - l)! / n^(k - l) when passing to the limit object.
# ---------------------------------------------------------------------------
ell = 2
scale = Fraction(factorial(3 - ell), 5 ** (3 - ell))
print("min positive codegree of G  :", G.min_positive_degree(ell))
print("min positive codegree of W_G:", min_positive_degree(W, ell))
assert min_positive_degree(W, ell) == G.min_positive_degree(ell) * scale
for cell in cells(W, ell):
    parts = cell.assignment[:ell]
    expected = (
        G.degree(sorted(parts)) * scale if len(set(parts)) == ell else Fraction(0)
    )
    assert degree(W, cell) == expected
print("all cell degrees match their graph codegrees (checked)")

# ---------------------------------------------------------------------------
# Rooted product law: the density of a gluing is the product of densities,
# cell by cell.
# ---------------------------------------------------------------------------
edge = labelled_edge(3, ell)
glued = rooted_product(edge, edge)
for cell in cells(W, ell):
    lhs = rooted_density(glued, W, cell)
    rhs = rooted_density(edge, W, cell) ** 2
    assert lhs == rhs
print("rooted product law holds at every cell (checked)")

# ---------------------------------------------------------------------------
# Random spot checks of the density identity on larger hosts.
# ---------------------------------------------------------------------------
rnd = random.Random(0)
for _ in range(5):
    import itertools

    pool = list(itertools.combinations(range(6), 3))
    H = KGraph(6, 3, frozenset(e for e in pool if rnd.random() < 0.4),
               validate=False)
    assert density(F, from_graph(H)) == hom_density(F, H)
print("density identity verified on 5 random hosts")
