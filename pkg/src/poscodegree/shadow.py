"""Real-parameter binomial coefficients and the shadow / edge-count bounds.

Everything here is plain double-precision arithmetic: the inequalities being
checked have generous margins at the graph sizes this toolkit handles.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .hypergraph import InputError, KGraph

#: default absolute tolerance of the bisection inverse
BISECT_TOL = 1e-12


def real_binomial(y: float, k: int) -> float:
    """Generalized binomial coefficient y(y-1)...(y-k+1)/k! for real y >= k."""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if y < k:
        raise InputError(f"real binomial needs y >= k, got y={y}, k={k}")
    prod = 1.0
    for i in range(k):
        prod *= y - i
    return prod / factorial(k)


def invert_real_binomial(e: float, k: int, tol: float = BISECT_TOL) -> float:
    """The unique x >= k with real_binomial(x, k) == e, by bisection.

    The generalized binomial is strictly increasing and continuous on
    [k, infinity), so the root exists and is unique for every e >= 1.
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if e < 1:
        raise InputError(f"need e >= 1, got {e}")
    lo = float(k)
    hi = float(k) + 1.0
    while real_binomial(hi, k) < e:
        hi = k + 2.0 * (hi - k)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if real_binomial(mid, k) < e:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def shadow_lower_bound(e: int, k: int, ell: int) -> float:
    """Lovasz-form Kruskal-Katona: e = C(x,k) edges cover >= C(x,ell) ell-sets."""
    if not 0 <= ell <= k - 1:
        raise InputError(f"need 0 <= l <= k-1, got l={ell}, k={k}")
    if e < 1:
        raise InputError(f"need e >= 1, got {e}")
    if ell == 0:
        return 1.0
    x = invert_real_binomial(e, k)
    return real_binomial(x, ell)


def kk_edge_lower_bound(gamma: float, m: int, k: int, ell: int) -> float:
    """Edge-count lower bound gamma^(k/(k-l)) * m^k / k!."""
    if not 0 <= ell <= k - 1:
        raise InputError(f"need 0 <= l <= k-1, got l={ell}, k={k}")
    if m < k:
        raise InputError(f"need m >= k, got m={m}, k={k}")
    if gamma < 0:
        raise InputError(f"need gamma >= 0, got {gamma}")
    if gamma == 0:
        return 0.0
    return gamma ** (k / (k - ell)) * m ** k / factorial(k)


@dataclass(frozen=True)
class KKReport:
    gamma_max: float
    bound: float
    edges: int
    holds: bool


def check_kk(G: KGraph, ell: int, tol: float = 1e-9) -> KKReport:
    """Check the edge-count bound on G with its tightest admissible gamma.

    gamma_max is the largest gamma with delta^+_l(G) >= gamma*m^(k-l)/(k-l)!,
    i.e. the strongest instance of the bound the graph satisfies.  `holds`
    compares with slack `tol` to absorb double rounding; the underlying
    inequality is always true.
    """
    if not G.edges:
        raise InputError("check_kk needs a non-empty graph")
    k, m = G.k, G.n
    if not 0 <= ell <= k - 1:
        raise InputError(f"need 0 <= l <= k-1, got l={ell}, k={k}")
    delta = G.min_positive_degree(ell)
    gamma_max = delta * factorial(k - ell) / m ** (k - ell)
    bound = kk_edge_lower_bound(gamma_max, m, k, ell)
    e = len(G.edges)
    return KKReport(gamma_max=gamma_max, bound=bound, edges=e, holds=e >= bound - tol)
