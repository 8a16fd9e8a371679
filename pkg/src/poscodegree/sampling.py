"""W-random hypergraph sampling and the closed-form Azuma tail bounds.

Randomness is derived by hashing (seed, stream, object id) with the
splitmix64 finalizer, so every coordinate and every edge has its own
deterministic stream: sampling is order-independent, reproducible across
platforms, and trivially parallelizable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, exp, sqrt

import numpy as np

from .hypergraph import InputError, KGraph
from .hypergraphon import (
    AnalyticHypergraphon,
    StepHypergraphon,
    proper_subsets,
)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / (1 << 53)

# stream tags keep coordinate draws and edge coin flips independent
STREAM_COORD = 0x636F6F7264  # "coord"
STREAM_EDGE = 0x65646765  # "edge"
STREAM_TRIAL = 0x747269616C  # "trial"


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z + _GOLDEN).astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def _base_state(seed: int, stream: int) -> np.ndarray:
    z = np.array([seed & (2 ** 64 - 1)], dtype=np.uint64)
    return _mix64(_mix64(z + np.uint64(stream)))


def hash_uniforms(seed: int, stream: int, ids: np.ndarray) -> np.ndarray:
    """Deterministic uniforms in [0,1) for the given object ids."""
    z = _mix64(_base_state(seed, stream) ^ ids.astype(np.uint64))
    return (z >> np.uint64(11)).astype(np.float64) * _U53


def derive_seed(seed: int, trial: int) -> int:
    """Per-trial sub-seed; independent streams for repeated experiments."""
    return int(_mix64(_base_state(seed, STREAM_TRIAL) + np.uint64(trial))[0])


@dataclass(frozen=True)
class SampleConfig:
    n: int
    seed: int
    trials: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise InputError("trials must be >= 1")


@lru_cache(maxsize=64)
def _combos(n: int, size: int) -> np.ndarray:
    """All size-subsets of range(n) in lexicographic row order, one row each."""
    return np.array(list(itertools.combinations(range(n), size)), dtype=np.int64)


@lru_cache(maxsize=64)
def _coord_offset(n: int, size: int) -> int:
    """Id offset of size-subsets in the global coordinate numbering."""
    return sum(comb(n, s) for s in range(1, size))


@lru_cache(maxsize=1024)
def _subset_rank_strides(n: int, size: int) -> np.ndarray:
    # lex rank of a sorted subset (a_0 < ... < a_{size-1}) of range(n):
    # rank = C(n,size) - sum_i C(n - a_i - 1, size - i); precompute per-slot
    # tables so ranks vectorize as table lookups.
    table = np.zeros((size, n), dtype=np.int64)
    for i in range(size):
        for a in range(n):
            table[i, a] = comb(n - a - 1, size - i)
    return table


def subset_ranks(n: int, size: int, rows: np.ndarray) -> np.ndarray:
    """Vectorized lex ranks of sorted subsets given as rows of vertex ids."""
    table = _subset_rank_strides(n, size)
    total = comb(n, size)
    acc = np.zeros(len(rows), dtype=np.int64)
    for i in range(size):
        acc += table[i][rows[:, i]]
    return total - 1 - acc


def coordinate_id(n: int, subset) -> int:
    """Global id of the coordinate subset within R([n], k-1)."""
    row = np.array([sorted(subset)], dtype=np.int64)
    return _coord_offset(n, len(subset)) + int(subset_ranks(n, len(subset), row)[0])


def _draw_parts(n: int, size: int, seed: int, cum: np.ndarray) -> np.ndarray:
    """Part indices for every size-subset of range(n), in lex order."""
    count = comb(n, size)
    ids = _coord_offset(n, size) + np.arange(count, dtype=np.uint64)
    u = hash_uniforms(seed, STREAM_COORD, ids)
    return np.searchsorted(cum, u, side="right").astype(np.int64)


def _sample_step(n: int, W: StepHypergraphon, seed: int) -> KGraph:
    k = W.k
    cum = np.cumsum([float(x) for x in W.lengths])[:-1]
    sizes = sorted({len(P) for P in W.positions})
    parts_by_size = {s: _draw_parts(n, s, seed, cum) for s in sizes}
    edges_rows = _combos(n, k)
    n_edges = len(edges_rows)
    flat = np.zeros(n_edges, dtype=np.int64)
    m = W.m
    for P in W.positions:
        cols = sorted(P)
        sub = np.sort(edges_rows[:, cols], axis=1)
        ranks = subset_ranks(n, len(P), sub)
        flat = flat * m + parts_by_size[len(P)][ranks]
    values = np.array([float(v) for v in W.values])
    probs = values[flat]
    edge_ids = np.arange(n_edges, dtype=np.uint64)
    coins = hash_uniforms(seed, STREAM_EDGE, edge_ids)
    chosen = np.nonzero(coins < probs)[0]
    edges = frozenset(map(tuple, edges_rows[chosen].tolist()))
    return KGraph(n, k, edges, validate=False)


def _sample_analytic(n: int, H: AnalyticHypergraphon, seed: int) -> KGraph:
    k = H.k
    subs = proper_subsets(k)
    coords: dict[int, dict[tuple, float]] = {}
    for size in sorted({len(P) for P in subs}):
        rows = _combos(n, size)
        ids = _coord_offset(n, size) + np.arange(len(rows), dtype=np.uint64)
        u = hash_uniforms(seed, STREAM_COORD, ids)
        coords[size] = {tuple(row): u[i] for i, row in enumerate(rows.tolist())}
    edges = set()
    edge_rows = _combos(n, k)
    coins = hash_uniforms(seed, STREAM_EDGE, np.arange(len(edge_rows), dtype=np.uint64))
    for i, row in enumerate(edge_rows.tolist()):
        x = tuple(coords[len(P)][tuple(sorted(row[v] for v in P))] for P in subs)
        if coins[i] < H.fn(x):
            edges.add(tuple(row))
    return KGraph(n, k, frozenset(edges), validate=False)


def sample(n: int, W, seed: int) -> KGraph:
    """One draw of the W-random k-graph on n vertices.

    Two-step procedure: independent coordinate draws for every subset of
    fewer than k vertices, then each k-set included independently with the
    probability W takes at its coordinates.  Deterministic given (n, W, seed).
    """
    if n < W.k:
        raise InputError(f"need n >= k, got n={n}, k={W.k}")
    if isinstance(W, StepHypergraphon):
        return _sample_step(n, W, seed)
    if isinstance(W, AnalyticHypergraphon):
        return _sample_analytic(n, W, seed)
    raise InputError(f"cannot sample from {type(W).__name__}")


def sample_induced(G: KGraph, n: int, seed: int) -> KGraph:
    """The subgraph induced by a uniformly random n-set, relabelled to [n]."""
    if n > G.n:
        raise InputError(f"need n <= |V(G)|, got n={n}, |V|={G.n}")
    rng = np.random.default_rng(seed)
    chosen = sorted(int(v) for v in rng.choice(G.n, size=n, replace=False))
    return G.induced(chosen)


@dataclass(frozen=True)
class ContainmentEstimate:
    value: float
    stderr: float
    trials: int


def estimate_containment(F: KGraph, W, trials: int, seed: int) -> ContainmentEstimate:
    """Fraction of trials in which every edge of F appears in a W-random draw
    on the same vertex set; an unbiased estimator of the density of F in W."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    edges = sorted(F.edges)
    if not edges:
        return ContainmentEstimate(1.0, 0.0, trials)
    n, k = F.n, F.k
    if n < k:
        raise InputError("containment estimation needs F.n >= k")
    subs = proper_subsets(k)
    step = isinstance(W, StepHypergraphon)
    if step:
        cum = np.cumsum([float(x) for x in W.lengths])[:-1]
        values = [float(v) for v in W.values]
        m = W.m
        positions = W.positions
    else:
        positions = subs
    coord_sets = sorted(
        {frozenset(e[i] for i in P) for e in edges for P in positions},
        key=lambda A: (len(A), tuple(sorted(A))),
    )
    coord_ids = np.array([coordinate_id(n, A) for A in coord_sets], dtype=np.uint64)
    cindex = {A: i for i, A in enumerate(coord_sets)}
    edge_slots = [[cindex[frozenset(e[i] for i in P)] for P in positions] for e in edges]
    edge_ids = subset_ranks(n, k, np.array(edges, dtype=np.int64)).astype(np.uint64)
    hits = 0
    for t in range(trials):
        s = derive_seed(seed, t)
        u = hash_uniforms(s, STREAM_COORD, coord_ids)
        coins = hash_uniforms(s, STREAM_EDGE, edge_ids)
        if step:
            parts = np.searchsorted(cum, u, side="right")
            ok = True
            for ei, slots in enumerate(edge_slots):
                flat = 0
                for sl in slots:
                    flat = flat * m + int(parts[sl])
                if coins[ei] >= values[flat]:
                    ok = False
                    break
        else:
            ok = True
            for ei, slots in enumerate(edge_slots):
                if coins[ei] >= W.fn(tuple(u[sl] for sl in slots)):
                    ok = False
                    break
        hits += ok
    p = hits / trials
    stderr = sqrt(p * (1 - p) / trials) if trials > 1 else 0.0
    return ContainmentEstimate(p, stderr, trials)


def azuma_bound_degree(eps: float, n: int, k: int, ell: int = 0) -> float:
    """Tail bound exp(-eps^2 n / (9 k^2)) for degree-ratio deviations."""
    if not 0 < eps <= 1:
        raise InputError(f"need eps in (0,1], got {eps}")
    if n < 0:
        raise InputError(f"need n >= 0, got {n}")
    return exp(-eps * eps * n / (9 * k * k))


def azuma_bound_empty(beta: float, n: int, k: int) -> float:
    """Tail bound exp(-beta^2 n / (3 k^2)) for spurious positive degrees."""
    if not 0 < beta <= 1:
        raise InputError(f"need beta in (0,1], got {beta}")
    if n < 0:
        raise InputError(f"need n >= 0, got {n}")
    return exp(-beta * beta * n / (3 * k * k))
