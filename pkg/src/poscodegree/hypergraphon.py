"""Step k-hypergraphons with exact rational densities and degrees.

A step hypergraphon is a symmetric function W on [0,1]^C, where C is the set
of nonempty proper subsets of {0,...,k-1}, constant on the cells of one shared
rational partition of [0,1].  All densities, degrees and rooted densities of
step hypergraphons are finite rational sums and are computed exactly with
`fractions.Fraction`; no floating point enters the exact path.

Analytic (non-step) hypergraphons are supported through an evaluation
callback and Monte Carlo estimation only.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod, sqrt

import numpy as np

from .hypergraph import InputError, KGraph, LabelledKGraph

#: default cap on the number of enumerated terms in one exact integral
DENSITY_BUDGET = 10 ** 8


class SizeBudgetError(RuntimeError):
    """An exact integral would enumerate more terms than the budget allows."""


def _coord_key(A: frozenset) -> tuple:
    return (len(A), tuple(sorted(A)))


@lru_cache(maxsize=None)
def proper_subsets(k: int) -> tuple[frozenset, ...]:
    """Nonempty proper subsets of {0..k-1}, ordered by size then lexicographic."""
    subs = []
    for size in range(1, k):
        for combo in itertools.combinations(range(k), size):
            subs.append(frozenset(combo))
    return tuple(subs)


@lru_cache(maxsize=None)
def root_subsets(ell: int) -> tuple[frozenset, ...]:
    """All nonempty subsets of the root set {0..ell-1}, canonically ordered."""
    subs = []
    for size in range(1, ell + 1):
        for combo in itertools.combinations(range(ell), size):
            subs.append(frozenset(combo))
    return tuple(subs)


@dataclass(frozen=True)
class CellPoint:
    """A cell of [0,1]^{r[ell]}: one part index per nonempty subset of roots."""

    ell: int
    assignment: tuple[int, ...] = ()

    def __post_init__(self):
        if self.ell < 0:
            raise InputError(f"negative root count {self.ell}")
        if len(self.assignment) != len(root_subsets(self.ell)):
            raise InputError(
                f"cell for l={self.ell} needs {len(root_subsets(self.ell))} "
                f"part indices, got {len(self.assignment)}"
            )


@dataclass(frozen=True)
class StepHypergraphon:
    """A step k-hypergraphon.

    `positions` lists the coordinates the value table actually depends on (a
    subfamily of proper_subsets(k), closed under the symmetric-group action);
    `values` is the flat table over part assignments to those coordinates in
    mixed-radix order, first position most significant.
    """

    k: int
    lengths: tuple[Fraction, ...]
    positions: tuple[frozenset, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"uniformity must be >= 1, got {self.k}")
        allpos = set(proper_subsets(self.k))
        if list(self.positions) != sorted(self.positions, key=_coord_key):
            raise InputError("positions must be in canonical (size, lex) order")
        if not set(self.positions) <= allpos:
            raise InputError("positions must be nonempty proper subsets of range(k)")
        if len(self.values) != len(self.lengths) ** len(self.positions):
            raise InputError("value table size does not match m^#positions")

    @property
    def m(self) -> int:
        return len(self.lengths)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def _index(self, parts) -> int:
        idx = 0
        for p in parts:
            idx = idx * self.m + p
        return idx

    def value_at(self, parts) -> Fraction:
        """Table value for part indices aligned with `positions`."""
        return self.values[self._index(parts)]

    def value_for(self, assign) -> Fraction:
        """Table value for a mapping {coordinate subset: part index}."""
        return self.values[self._index(assign[P] for P in self.positions)]

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, k: int, p) -> "StepHypergraphon":
        p = Fraction(p)
        if not 0 <= p <= 1:
            raise InputError(f"constant value must lie in [0,1], got {p}")
        return cls(k, (Fraction(1),), (), (p,))

    @classmethod
    def from_full_table(cls, k, lengths, value_fn) -> "StepHypergraphon":
        """Build from a callback assign-dict -> value over the full coordinate set."""
        lengths = tuple(Fraction(x) for x in lengths)
        positions = proper_subsets(k)
        m = len(lengths)
        values = []
        for parts in itertools.product(range(m), repeat=len(positions)):
            values.append(Fraction(value_fn(dict(zip(positions, parts)))))
        return cls(k, lengths, positions, tuple(values))


def from_graph(G: KGraph) -> StepHypergraphon:
    """The step hypergraphon of a graph: n equal parts, indicator of the edges.

    Depends on the singleton coordinates only; value 1 exactly when the k
    singleton parts name k distinct vertices forming an edge.
    """
    if G.n < G.k:
        raise InputError("from_graph needs n >= k")
    n, k = G.n, G.k
    positions = tuple(frozenset({i}) for i in range(k))
    lengths = tuple(Fraction(1, n) for _ in range(n))
    values = []
    for parts in itertools.product(range(n), repeat=k):
        key = tuple(sorted(parts))
        ok = len(set(parts)) == k and key in G.edges
        values.append(Fraction(1 if ok else 0))
    return StepHypergraphon(k, lengths, positions, tuple(values))


# -- symmetry ---------------------------------------------------------------


def _position_permutations(W: StepHypergraphon):
    """For each non-identity sigma in S_k, the induced index permutation of
    W.positions, or None if the position set is not closed under sigma."""
    index = {P: i for i, P in enumerate(W.positions)}
    out = []
    for sigma in itertools.permutations(range(W.k)):
        if sigma == tuple(range(W.k)):
            continue
        mapped = []
        ok = True
        for P in W.positions:
            Q = frozenset(sigma[v] for v in P)
            if Q not in index:
                ok = False
                break
            mapped.append(index[Q])
        out.append((sigma, mapped if ok else None))
    return out


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str
    assignment: dict | None = None
    sigma: tuple | None = None


def validate(W: StepHypergraphon) -> ValidationReport:
    """Check partition, value-range and symmetry invariants of W."""
    if any(x <= 0 for x in W.lengths):
        return ValidationReport(False, "every part length must be positive")
    if sum(W.lengths) != 1:
        return ValidationReport(False, f"part lengths sum to {sum(W.lengths)}, not 1")
    for v in W.values:
        if not 0 <= v <= 1:
            return ValidationReport(False, f"table value {v} outside [0,1]")
    nprod = len(W.values)
    for sigma, mapped in _position_permutations(W):
        if mapped is None:
            return ValidationReport(
                False, "dependence set not closed under vertex permutations",
                sigma=sigma,
            )
        for flat in range(nprod):
            parts = _unflatten(flat, W.m, len(W.positions))
            permuted = [0] * len(parts)
            for j, target in enumerate(mapped):
                permuted[target] = parts[j]
            if W.values[flat] != W.value_at(permuted):
                return ValidationReport(
                    False, "value table is not symmetric",
                    assignment=dict(zip(W.positions, parts)), sigma=sigma,
                )
    return ValidationReport(True, "ok")


def _unflatten(flat: int, m: int, width: int) -> tuple[int, ...]:
    parts = [0] * width
    for j in range(width - 1, -1, -1):
        flat, parts[j] = divmod(flat, m)
    return tuple(parts)


def symmetrize(W: StepHypergraphon) -> StepHypergraphon:
    """Average the value table over the symmetric-group orbits.

    Idempotent; leaves symmetric tables unchanged.  The position set must be
    closed under the group action (true for every table built by this module).
    """
    perms = _position_permutations(W)
    if any(mapped is None for _, mapped in perms):
        raise InputError("cannot symmetrize: dependence set not closed under S_k")
    width = len(W.positions)
    order = len(perms) + 1
    new = []
    for flat in range(len(W.values)):
        parts = _unflatten(flat, W.m, width)
        acc = W.values[flat]
        for _sigma, mapped in perms:
            permuted = [0] * width
            for j, target in enumerate(mapped):
                permuted[target] = parts[j]
            acc += W.value_at(permuted)
        new.append(acc / order)
    return StepHypergraphon(W.k, W.lengths, W.positions, tuple(new))


def reduce_dependence(W: StepHypergraphon) -> StepHypergraphon:
    """Drop coordinates the table provably does not depend on."""
    width = len(W.positions)
    m = W.m
    dependent = []
    for j in range(width):
        stride = m ** (width - 1 - j)
        block = m ** (width - j)
        varies = False
        for base in range(0, len(W.values), block):
            for off in range(stride):
                ref = W.values[base + off]
                if any(W.values[base + off + p * stride] != ref for p in range(1, m)):
                    varies = True
                    break
            if varies:
                break
        if varies:
            dependent.append(j)
    if len(dependent) == width:
        return W
    keep = [W.positions[j] for j in dependent]
    # close under the group action so downstream symmetry checks stay valid
    closed = set()
    for P in keep:
        for sigma in itertools.permutations(range(W.k)):
            closed.add(frozenset(sigma[v] for v in P))
    positions = tuple(sorted(closed & set(W.positions) | closed, key=_coord_key))
    positions = tuple(P for P in positions if P in set(proper_subsets(W.k)))
    old_index = {P: i for i, P in enumerate(W.positions)}
    values = []
    for parts in itertools.product(range(m), repeat=len(positions)):
        assign = [0] * width
        for P, p in zip(positions, parts):
            assign[old_index[P]] = p
        values.append(W.value_at(assign))
    return StepHypergraphon(W.k, W.lengths, positions, tuple(values))


# -- exact integration -------------------------------------------------------


def _integral(W: StepHypergraphon, factors, fixed, budget: int) -> Fraction:
    """Sum over part assignments of prod(factor values) * prod(part lengths).

    `factors` lists, per edge, its coordinate subsets aligned with
    W.positions.  Coordinates in `fixed` are pinned and carry no weight.
    Coordinates appearing in several factors are enumerated in an outer loop;
    each factor's remaining private coordinates are summed out once per
    distinct restriction of the shared assignment (memoized).
    """
    m = W.m
    occurrences = Counter(c for coords in factors for c in coords if c not in fixed)
    shared = sorted((c for c, cnt in occurrences.items() if cnt >= 2), key=_coord_key)
    shared_set = set(shared)
    plans = []
    inner_cost = 0
    for coords in factors:
        sh = tuple(c for c in coords if c in shared_set)
        pr = tuple(c for c in coords if c not in shared_set and c not in fixed)
        plans.append((coords, sh, pr))
        inner_cost += m ** len(pr)
    outer = m ** len(shared)
    if max(outer, inner_cost, outer * max(len(factors), 1)) > budget:
        raise SizeBudgetError(
            f"exact integral needs about {outer * max(len(factors), 1) + inner_cost} "
            f"terms, over the budget of {budget}"
        )
    lengths = W.lengths
    zero = Fraction(0)
    memo: list[dict] = [{} for _ in plans]
    total = zero
    assign = dict(fixed)
    for shared_parts in itertools.product(range(m), repeat=len(shared)):
        weight = prod((lengths[p] for p in shared_parts), start=Fraction(1))
        assign.update(zip(shared, shared_parts))
        value = weight
        for fi, (coords, sh, pr) in enumerate(plans):
            key = tuple(assign[c] for c in sh)
            inner = memo[fi].get(key)
            if inner is None:
                inner = zero
                for private_parts in itertools.product(range(m), repeat=len(pr)):
                    assign.update(zip(pr, private_parts))
                    term = W.value_at(tuple(assign[c] for c in coords))
                    if term:
                        for p in private_parts:
                            term *= lengths[p]
                        inner += term
                memo[fi][key] = inner
            value *= inner
            if not value:
                break
        total += value
    return total


def _edge_factors(W: StepHypergraphon, edges):
    return [tuple(frozenset(e[i] for i in P) for P in W.positions) for e in edges]


def density(F: KGraph, W: StepHypergraphon, budget: int = DENSITY_BUDGET) -> Fraction:
    """Exact homomorphism density of the k-graph F in the step hypergraphon W."""
    if F.k != W.k:
        raise InputError(f"uniformity mismatch: {F.k} != {W.k}")
    if not F.edges:
        return Fraction(1)
    return _integral(W, _edge_factors(W, sorted(F.edges)), {}, budget)


def rooted_density(
    F: LabelledKGraph, W: StepHypergraphon, cell: CellPoint,
    budget: int = DENSITY_BUDGET,
) -> Fraction:
    """Exact rooted density of the labelled graph F at the given root cell."""
    if F.graph.k != W.k:
        raise InputError(f"uniformity mismatch: {F.graph.k} != {W.k}")
    if cell.ell != F.roots:
        raise InputError(f"cell has {cell.ell} roots, graph has {F.roots}")
    if any(not 0 <= p < W.m for p in cell.assignment):
        raise InputError("cell part index out of range")
    fixed = dict(zip(root_subsets(cell.ell), cell.assignment))
    if not F.graph.edges:
        return Fraction(1)
    return _integral(W, _edge_factors(W, sorted(F.graph.edges)), fixed, budget)


def degree(W: StepHypergraphon, cell: CellPoint) -> Fraction:
    """Average of W over all extensions of the cell's root coordinates."""
    if cell.ell > W.k - 1:
        raise InputError(f"cell root count {cell.ell} must be <= k-1")
    return rooted_density(edge_power(W.k, cell.ell, 1), W, cell)


def cells(W: StepHypergraphon, ell: int):
    """All cells of [0,1]^{r[ell]} under W's partition."""
    width = len(root_subsets(ell))
    for parts in itertools.product(range(W.m), repeat=width):
        yield CellPoint(ell, parts)


def cell_measure(W: StepHypergraphon, cell: CellPoint) -> Fraction:
    return prod((W.lengths[p] for p in cell.assignment), start=Fraction(1))


def min_positive_degree(W: StepHypergraphon, ell: int) -> Fraction:
    """Essential infimum of the positive cell degrees; 0 for the zero table."""
    if not 0 <= ell <= W.k - 1:
        raise InputError(f"need 0 <= l <= k-1, got l={ell}, k={W.k}")
    if W.is_zero():
        return Fraction(0)
    positive = [d for c in cells(W, ell) if (d := degree(W, c)) > 0]
    return min(positive) if positive else Fraction(0)


def min_degree(W: StepHypergraphon, ell: int) -> Fraction:
    """Essential infimum of the cell degrees over every cell."""
    if not 0 <= ell <= W.k - 1:
        raise InputError(f"need 0 <= l <= k-1, got l={ell}, k={W.k}")
    return min(degree(W, c) for c in cells(W, ell))


# -- labelled graphs ----------------------------------------------------------


def rooted_product(F: LabelledKGraph, F2: LabelledKGraph) -> LabelledKGraph:
    """Glue two labelled graphs along their shared roots."""
    if F.roots != F2.roots:
        raise InputError(f"root mismatch: {F.roots} != {F2.roots}")
    if F.graph.k != F2.graph.k:
        raise InputError("uniformity mismatch in rooted product")
    ell = F.roots
    shift = F.graph.n - ell
    edges2 = frozenset(
        tuple(sorted(v if v < ell else v + shift for v in e)) for e in F2.graph.edges
    )
    merged = KGraph(
        F.graph.n + F2.graph.n - ell,
        F.graph.k,
        F.graph.edges | edges2,
        validate=False,
    )
    return LabelledKGraph(merged, ell)


def labelled_edge(k: int, ell: int) -> LabelledKGraph:
    """The single k-edge on {0..k-1} with the first ell vertices as roots."""
    return LabelledKGraph(KGraph(k, k, frozenset({tuple(range(k))}), validate=False), ell)


def edge_power(k: int, ell: int, i: int) -> LabelledKGraph:
    """The i-fold rooted product of the single ell-labelled k-edge."""
    if i < 0:
        raise InputError(f"power must be >= 0, got {i}")
    out = LabelledKGraph(KGraph.empty(ell, k), ell)
    E = labelled_edge(k, ell)
    for _ in range(i):
        out = rooted_product(out, E)
    return out


def unlabel(F: LabelledKGraph) -> KGraph:
    return F.graph


# -- analytic hypergraphons ----------------------------------------------------


@dataclass(frozen=True)
class AnalyticHypergraphon:
    """A k-hypergraphon given by an evaluation callback.

    The callback receives the coordinate values as a tuple aligned with
    proper_subsets(k) and must return a value in [0,1].  Only Monte Carlo
    estimation is available for analytic hypergraphons.
    """

    k: int
    fn: object

    def __call__(self, x) -> float:
        return self.fn(tuple(x))

    def check_symmetry(self, trials: int = 200, seed: int = 0) -> bool:
        """Statistical symmetry check: random points, random permutations."""
        rng = np.random.default_rng(seed)
        subs = proper_subsets(self.k)
        index = {P: i for i, P in enumerate(subs)}
        perms = list(itertools.permutations(range(self.k)))
        for _ in range(trials):
            x = rng.random(len(subs))
            sigma = perms[rng.integers(len(perms))]
            permuted = [x[index[frozenset(sigma[v] for v in P)]] for P in subs]
            if self(x) != self(permuted):
                return False
        return True


def directed_cycle_hypergraphon() -> AnalyticHypergraphon:
    """The 3-hypergraphon of the directed-cycle construction.

    Value 1 on the orbit of {x1 < x2 < x3, x12 <= 1/2, x23 <= 1/2, x13 > 1/2}
    under the symmetric group on the three vertex labels; ties between the
    singleton coordinates evaluate to 0 (a measure-zero event).
    """
    subs = proper_subsets(3)
    pair_index = {P: i for i, P in enumerate(subs) if len(P) == 2}

    def fn(x) -> float:
        for sigma in itertools.permutations(range(3)):
            a, b, c = sigma
            if not (x[a] < x[b] < x[c]):
                continue
            ab = x[pair_index[frozenset({a, b})]]
            bc = x[pair_index[frozenset({b, c})]]
            ac = x[pair_index[frozenset({a, c})]]
            if ab <= 0.5 and bc <= 0.5 and ac > 0.5:
                return 1.0
        return 0.0

    return AnalyticHypergraphon(3, fn)


def as_analytic(W: StepHypergraphon) -> AnalyticHypergraphon:
    """Wrap a step hypergraphon as a callback (half-open parts [a, b))."""
    bounds = np.cumsum([float(x) for x in W.lengths])
    subs = proper_subsets(W.k)
    index = {P: i for i, P in enumerate(subs)}
    pos_idx = [index[P] for P in W.positions]
    floats = [float(v) for v in W.values]
    m = W.m

    def fn(x) -> float:
        flat = 0
        for i in pos_idx:
            part = int(np.searchsorted(bounds, x[i], side="right"))
            flat = flat * m + min(part, m - 1)
        return floats[flat]

    return AnalyticHypergraphon(W.k, fn)


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    trials: int


def mc_density(F: KGraph, H: AnalyticHypergraphon, trials: int, seed: int) -> MCEstimate:
    """Unbiased Monte Carlo estimate of the density of F in H."""
    if F.k != H.k:
        raise InputError(f"uniformity mismatch: {F.k} != {H.k}")
    if trials < 1:
        raise InputError("trials must be >= 1")
    edges = sorted(F.edges)
    if not edges:
        return MCEstimate(1.0, 0.0, trials)
    subs = proper_subsets(H.k)
    coords = sorted({frozenset(e[i] for i in P) for e in edges for P in subs},
                    key=_coord_key)
    cindex = {c: i for i, c in enumerate(coords)}
    edge_slots = [
        [cindex[frozenset(e[i] for i in P)] for P in subs] for e in edges
    ]
    rng = np.random.default_rng(seed)
    xs = rng.random((trials, len(coords)))
    acc = 0.0
    acc2 = 0.0
    for t in range(trials):
        row = xs[t]
        val = 1.0
        for slots in edge_slots:
            val *= H.fn(tuple(row[s] for s in slots))
            if val == 0.0:
                break
        acc += val
        acc2 += val * val
    mean = acc / trials
    if trials > 1:
        var = max(acc2 - trials * mean * mean, 0.0) / (trials - 1)
        stderr = sqrt(var / trials)
    else:
        stderr = 0.0
    return MCEstimate(mean, stderr, trials)


# -- JSON spec files -----------------------------------------------------------
#
# { "k": 3, "lengths": ["1/2", "1/2"],
#   "table": [ {"assign": {"1": 0, "2": 0, "3": 0, "12": 1, "13": 1, "23": 1},
#               "value": "1/3"}, ... ] }
# Subset keys are concatenated 1-based element digits; assignments absent from
# the table have value 0.


def _subset_from_key(key: str, k: int) -> frozenset:
    if not key or not key.isdigit():
        raise InputError(f"bad subset key {key!r}")
    elems = frozenset(int(ch) - 1 for ch in key)
    if len(elems) != len(key) or not all(0 <= v < k for v in elems):
        raise InputError(f"bad subset key {key!r} for k={k}")
    return elems


def _subset_to_key(P: frozenset) -> str:
    return "".join(str(v + 1) for v in sorted(P))


def load_hypergraphon(source, strict: bool = True) -> StepHypergraphon:
    """Load a step hypergraphon from a JSON string, dict, or file path."""
    if isinstance(source, dict):
        data = source
    else:
        text = source
        if "\n" not in str(source) and "{" not in str(source):
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    k = int(data["k"])
    if k > 9:
        raise InputError("JSON subset keys support k <= 9 only")
    lengths = tuple(Fraction(s) for s in data["lengths"])
    m = len(lengths)
    positions = proper_subsets(k)
    index = {P: i for i, P in enumerate(positions)}
    values = [Fraction(0)] * (m ** len(positions))
    for entry in data.get("table", []):
        assign = entry["assign"]
        parts = [None] * len(positions)
        for key, part in assign.items():
            P = _subset_from_key(key, k)
            part = int(part)
            if not 0 <= part < m:
                raise InputError(f"part index {part} out of range for m={m}")
            parts[index[P]] = part
        if any(p is None for p in parts):
            raise InputError("table entry must assign every coordinate subset")
        flat = 0
        for p in parts:
            flat = flat * m + p
        values[flat] = Fraction(str(entry["value"]))
    W = StepHypergraphon(k, lengths, positions, tuple(values))
    report = validate(W)
    if not report.ok:
        if strict:
            raise InputError(f"invalid hypergraphon: {report.message}")
        W = symmetrize(W)
    return reduce_dependence(W)


def dump_hypergraphon(W: StepHypergraphon, entry_cap: int = 10 ** 6) -> dict:
    """Full-table JSON dict for W (nonzero entries only)."""
    positions = proper_subsets(W.k)
    free = [P for P in positions if P not in set(W.positions)]
    n_entries = W.m ** len(positions)
    if n_entries > entry_cap:
        raise SizeBudgetError(f"dump would expand to {n_entries} table entries")
    table = []
    for parts in itertools.product(range(W.m), repeat=len(positions)):
        assign = dict(zip(positions, parts))
        v = W.value_for(assign)
        if v:
            table.append(
                {
                    "assign": {_subset_to_key(P): assign[P] for P in positions},
                    "value": str(v),
                }
            )
    return {
        "k": W.k,
        "lengths": [str(x) for x in W.lengths],
        "table": table,
    }
