"""Penalty function, Bernstein approximation, the Q functional, and
convergence experiments.

The piecewise-linear penalty L rewards degree ratios inside [eps, delta-eps]
and stays small near 0 and above delta-eps/2.  Its Bernstein polynomial
approximation p has exactly rational coefficients when the parameters are
rational, which enables the exact two-path computation of the functional
Q = integral of p(deg_W(x)) dx: once by averaging p over the cells of W, and
once through the expansion a_0 + sum_i a_i * t(i-fold edge power, W).
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import comb, inf

import numpy as np
from scipy.special import gammaln

from .hypergraph import InputError, KGraph, hom_density
from .hypergraphon import (
    StepHypergraphon,
    cell_measure,
    cells,
    degree,
    density,
    edge_power,
    min_degree,
    min_positive_degree,
    unlabel,
    SizeBudgetError,
)
from . import sampling

#: grid resolution used by sup-error and property checks
GRID_POINTS = 10 ** 4


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        # rationalize the printed decimal, not the binary representation
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class PenaltyParams:
    eps: Fraction
    delta: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", _as_fraction(self.eps))
        object.__setattr__(self, "delta", _as_fraction(self.delta))
        object.__setattr__(self, "beta", _as_fraction(self.beta))
        # the boundary beta == eps/2 is admitted: the downstream polynomial
        # properties only need 2*beta < 1, and the standard parameter set
        # (eps, delta, beta) = (1/5, 1/2, 1/10) sits exactly on the boundary
        if not 0 < self.beta <= self.eps / 2:
            raise InputError(f"need 0 < beta <= eps/2, got beta={self.beta}, eps={self.eps}")
        if not self.eps < self.delta / 2:
            raise InputError(f"need eps < delta/2, got eps={self.eps}, delta={self.delta}")
        if self.delta > 1:
            raise InputError(f"need delta <= 1, got {self.delta}")


class PiecewiseLinear:
    """A piecewise-linear function on [0,1] with exact rational breakpoints."""

    def __init__(self, points):
        self.points = [(Fraction(x), Fraction(y)) for x, y in points]
        if [x for x, _ in self.points] != sorted({x for x, _ in self.points}):
            raise InputError("breakpoints must be strictly increasing")
        self._xs = [float(x) for x, _ in self.points]

    def at(self, x) -> Fraction:
        """Exact value at a rational point of [0,1]."""
        x = Fraction(x)
        pts = self.points
        if not pts[0][0] <= x <= pts[-1][0]:
            raise InputError(f"{x} outside [{pts[0][0]}, {pts[-1][0]}]")
        i = bisect.bisect_right([px for px, _ in pts], x) - 1
        if i == len(pts) - 1:
            return pts[-1][1]
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def __call__(self, x: float) -> float:
        return float(self.at(Fraction(str(float(x)))))

    @property
    def max_slope(self) -> Fraction:
        return max(
            abs((y1 - y0) / (x1 - x0))
            for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])
        )


def penalty_function(params: PenaltyParams) -> PiecewiseLinear:
    """The penalty L: breakpoints (0,b), (e,1+b), (d-e,1+b), (d-e/2,b), (1,b)."""
    e, d, b = params.eps, params.delta, params.beta
    points = [(Fraction(0), b), (e, 1 + b), (d - e, 1 + b), (d - e / 2, b)]
    if d - e / 2 < 1:
        points.append((Fraction(1), b))
    return PiecewiseLinear(points)


class Polynomial:
    """A real polynomial held in the Bernstein basis, monomial form on demand.

    Float evaluation uses the Bernstein values directly with log-binomial
    weights, which stays stable at degrees where expanded monomial
    coefficients cancel catastrophically.  Exact evaluation at rational
    points is available when the Bernstein values are rational.
    """

    def __init__(self, bernstein=None, coefficients=None):
        if (bernstein is None) == (coefficients is None):
            raise InputError("give exactly one of bernstein= or coefficients=")
        if bernstein is not None:
            self.bernstein = tuple(bernstein)
            self.degree = len(self.bernstein) - 1
            self._coefficients = None
        else:
            self._coefficients = tuple(coefficients)
            self.degree = len(self._coefficients) - 1
            self.bernstein = None
        if self.degree < 1:
            raise InputError("polynomial degree must be >= 1")

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Monomial coefficients a_0..a_D, exact when built from rationals."""
        if self._coefficients is None:
            D = self.degree
            b = [Fraction(v) for v in self.bernstein]
            coeffs = []
            for j in range(D + 1):
                acc = Fraction(0)
                for i in range(j + 1):
                    acc += b[i] * comb(D, i) * comb(D - i, j - i) * (-1) ** (j - i)
                coeffs.append(acc)
            self._coefficients = tuple(coeffs)
        return self._coefficients

    def at(self, x) -> Fraction:
        """Exact value at a rational point."""
        x = Fraction(x)
        if self.bernstein is not None:
            D = self.degree
            return sum(
                Fraction(b) * comb(D, i) * x ** i * (1 - x) ** (D - i)
                for i, b in enumerate(self.bernstein)
            )
        acc = Fraction(0)
        for a in reversed(self.coefficients):
            acc = acc * x + Fraction(a)
        return acc

    def __call__(self, x):
        """Float evaluation; accepts scalars or numpy arrays."""
        if self.bernstein is not None:
            return self._eval_bernstein(x)
        acc = 0.0
        for a in reversed(self.coefficients):
            acc = acc * np.asarray(x, dtype=float) + float(a)
        return acc if np.ndim(x) else float(acc)

    def _eval_bernstein(self, x):
        D = self.degree
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        i = np.arange(D + 1)
        logc = gammaln(D + 1) - gammaln(i + 1) - gammaln(D - i + 1)
        b = np.array([float(v) for v in self.bernstein])
        out = np.empty_like(xs)
        interior = (xs > 0) & (xs < 1)
        xi = xs[interior]
        if xi.size:
            logterm = (logc[None, :] + i[None, :] * np.log(xi)[:, None]
                       + (D - i)[None, :] * np.log1p(-xi)[:, None])
            out[interior] = np.exp(logterm) @ b
        out[xs <= 0] = b[0]
        out[xs >= 1] = b[D]
        return out if np.ndim(x) else float(out[0])


def bernstein_approx(L: PiecewiseLinear, D: int) -> Polynomial:
    """Degree-D Bernstein polynomial of L: sum L(i/D) C(D,i) x^i (1-x)^(D-i)."""
    if D < 1:
        raise InputError(f"degree must be >= 1, got {D}")
    return Polynomial(bernstein=[L.at(Fraction(i, D)) for i in range(D + 1)])


def grid_sup_error(p: Polynomial, L: PiecewiseLinear, points: int = GRID_POINTS) -> float:
    """Max |p - L| over a uniform grid of [0,1]."""
    xs = np.linspace(0.0, 1.0, points)
    Lv = np.array([float(L.at(Fraction(i, points - 1))) for i in range(points)])
    return float(np.max(np.abs(p(xs) - Lv)))


@dataclass(frozen=True)
class FitResult:
    polynomial: Polynomial
    degree: int
    sup_error: float


def fit_penalty_polynomial(params: PenaltyParams, max_degree: int = 1 << 20) -> FitResult:
    """Smallest Bernstein degree whose certified sup-error is <= beta, by
    doubling search followed by bisection.

    The certificate is grid error plus a Lipschitz slack: both L and its
    Bernstein polynomials are (2/eps)-Lipschitz (Bernstein operators preserve
    Lipschitz constants), so the true sup-norm exceeds the grid maximum by at
    most (2/eps) * grid spacing.  A passing fit therefore satisfies
    |p - L| <= beta everywhere, not just on the grid.
    """
    L = penalty_function(params)
    beta = float(params.beta)
    slack = float(L.max_slope) / (GRID_POINTS - 1)

    def err(D: int) -> float:
        return grid_sup_error(bernstein_approx(L, D), L) + slack

    lo, hi = 1, 1
    while err(hi) > beta:
        lo, hi = hi, hi * 2
        if hi > max_degree:
            raise InputError(f"no degree <= {max_degree} reaches sup-error <= beta")
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if err(mid) <= beta:
            hi = mid
        else:
            lo = mid
    D = hi if err(hi) <= beta else lo
    p = bernstein_approx(L, D)
    return FitResult(p, D, err(D))


@dataclass(frozen=True)
class PropertyReport:
    nonneg_ok: bool
    nonneg_margin: float
    small_ok: bool
    small_margin: float
    large_ok: bool
    large_margin: float

    @property
    def ok(self) -> bool:
        return self.nonneg_ok and self.small_ok and self.large_ok


def check_penalty_properties(p: Polynomial, params: PenaltyParams,
                             points: int = GRID_POINTS) -> PropertyReport:
    """Grid check of: p >= 0 on [0,1]; p <= 2*beta on {0} and [delta-eps/2, 1];
    p >= 1 on [eps, delta-eps].  Margins are the worst slack (negative = fail)."""
    e, d, b = (float(params.eps), float(params.delta), float(params.beta))
    xs = np.linspace(0.0, 1.0, points)
    vals = p(xs)
    nonneg_margin = float(vals.min())
    small_xs = np.concatenate(([0.0], np.linspace(d - e / 2, 1.0, points)))
    small_margin = float(2 * b - p(small_xs).max())
    large_xs = np.linspace(e, d - e, points)
    large_margin = float(p(large_xs).min() - 1.0)
    return PropertyReport(
        nonneg_ok=nonneg_margin >= 0, nonneg_margin=nonneg_margin,
        small_ok=small_margin >= 0, small_margin=small_margin,
        large_ok=large_margin >= 0, large_margin=large_margin,
    )


@dataclass(frozen=True)
class QResult:
    value: Fraction
    via_cells: Fraction
    via_densities: Fraction | None


def q_functional(W: StepHypergraphon, p: Polynomial, ell: int,
                 budget: int = 10 ** 8) -> QResult:
    """The functional Q = integral of p(deg_W(x)) dx, computed twice.

    Path A averages p over the degree of every root cell; path B expands p
    into monomials and uses the identity deg^i = rooted density of the i-fold
    edge power, so Q = a_0 + sum_i a_i * density(i-fold edge power, W).  The
    two exact rationals must agree; disagreement is an implementation bug and
    raises.  Path B can exceed the term budget for large degrees, in which
    case only path A is reported.
    """
    if not 0 <= ell <= W.k - 1:
        raise InputError(f"need 0 <= l <= k-1, got l={ell}, k={W.k}")
    via_cells = sum(
        (cell_measure(W, c) * p.at(degree(W, c)) for c in cells(W, ell)),
        start=Fraction(0),
    )
    coeffs = p.coefficients
    via_densities: Fraction | None
    try:
        via_densities = coeffs[0] + sum(
            (coeffs[i] * density(unlabel(edge_power(W.k, ell, i)), W, budget=budget)
             for i in range(1, len(coeffs))),
            start=Fraction(0),
        )
    except SizeBudgetError:
        via_densities = None
    if via_densities is not None and via_densities != via_cells:
        raise AssertionError(
            f"Q paths disagree: cells {via_cells} vs densities {via_densities}"
        )
    return QResult(via_cells, via_cells, via_densities)


# -- convergence experiments ---------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    kind: str  # "reference" | "trial" | "summary"
    n: int | None
    trial: int | None
    pos_ratio: float
    min_ratio: float
    densities: tuple[float, ...]
    pos_min: float | None = None
    pos_max: float | None = None


def convergence_experiment(W: StepHypergraphon, ell: int, n_list, trials: int,
                           seed: int, F_list=()) -> list[ConvergenceRow]:
    """Sampled degree ratios and subgraph densities against their limits.

    For each n and trial, samples a W-random graph and records the positive
    and plain minimum degree ratios (normalized by C(n-l, k-l)) plus the
    homomorphism densities of each graph in F_list; adds one reference row
    with W's exact values and one min/mean/max summary row per n.
    """
    if list(n_list) != sorted(set(n_list)):
        raise InputError("n_list must be strictly ascending")
    F_list = list(F_list)
    rows = [ConvergenceRow(
        "reference", None, None,
        float(min_positive_degree(W, ell)), float(min_degree(W, ell)),
        tuple(float(density(F, W)) for F in F_list),
    )]
    for n in n_list:
        pos_ratios = []
        min_ratios = []
        for t in range(trials):
            G = sampling.sample(n, W, sampling.derive_seed(seed, n * 1_000_003 + t))
            denom = comb(n - ell, W.k - ell)
            pos = G.min_positive_degree(ell) / denom
            mn = G.min_degree(ell) / denom
            pos_ratios.append(pos)
            min_ratios.append(mn)
            rows.append(ConvergenceRow(
                "trial", n, t, pos, mn,
                tuple(float(hom_density(F, G)) for F in F_list),
            ))
        rows.append(ConvergenceRow(
            "summary", n, None,
            float(np.mean(pos_ratios)), float(np.mean(min_ratios)), (),
            pos_min=min(pos_ratios), pos_max=max(pos_ratios),
        ))
    return rows
