"""Exact extremal values of the positive-degree and min-degree Turan problems.

Two engines compute the maximum of the chosen degree objective over all
F-free k-graphs on n vertices: a brute-force oracle enumerating every edge
subset as a bitmask (feasible up to C(n,k) <= 25), and an isomorph-reduced
breadth-first generation of all F-free isomorphism classes for moderate n.
Both return extremal witnesses and search statistics.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .hypergraph import InputError, KGraph, is_family_free

#: brute force enumerates 2^C(n,k) masks; refuse above this edge-slot count
BRUTE_FORCE_MAX_SLOTS = 25


@dataclass(frozen=True)
class SearchBudget:
    nodes: int | None = None
    seconds: float | None = None


@dataclass(frozen=True)
class SearchProblem:
    n: int
    k: int
    ell: int
    family: tuple[KGraph, ...] = ()
    mode: str = "positive"
    budget: SearchBudget = SearchBudget()
    witness_cap: int = 100

    def __post_init__(self):
        if not 0 <= self.ell <= self.k - 1:
            raise InputError(f"need 0 <= l <= k-1, got l={self.ell}, k={self.k}")
        if self.n < self.k:
            raise InputError(f"need n >= k, got n={self.n}, k={self.k}")
        if self.mode not in ("positive", "min"):
            raise InputError(f"mode must be 'positive' or 'min', got {self.mode!r}")
        for F in self.family:
            if F.k != self.k:
                raise InputError("every forbidden graph must have the same uniformity")
        object.__setattr__(self, "family", tuple(self.family))


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    prunes: int
    seconds: float


@dataclass(frozen=True)
class SearchResult:
    value: int
    witnesses: tuple[KGraph, ...]
    stats: SearchStats
    exact: bool


@lru_cache(maxsize=32)
def _edge_slots(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All k-sets of range(n) in lexicographic order; bit i is slot i."""
    return tuple(itertools.combinations(range(n), k))


@lru_cache(maxsize=32)
def _slot_index(n: int, k: int) -> dict:
    return {e: i for i, e in enumerate(_edge_slots(n, k))}


@lru_cache(maxsize=64)
def _lset_masks(n: int, k: int, ell: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Per ell-set: (the set, bitmask of edge slots containing it).

    For ell = 0 there is a single empty set whose mask covers every slot.
    """
    slots = _edge_slots(n, k)
    if ell == 0:
        return (((), (1 << len(slots)) - 1),)
    out = []
    for L in itertools.combinations(range(n), ell):
        Lset = set(L)
        mask = 0
        for i, e in enumerate(slots):
            if Lset <= set(e):
                mask |= 1 << i
        out.append((L, mask))
    return tuple(out)


def _forbidden_masks(problem: SearchProblem) -> list[int]:
    """Bitmasks of every embedded copy of every forbidden graph, deduplicated."""
    index = _slot_index(problem.n, problem.k)
    masks = set()
    for F in problem.family:
        if F.n > problem.n:
            continue
        if not F.edges:
            # an edgeless forbidden graph on <= n vertices forbids everything
            raise InputError("edgeless forbidden graph makes every graph forbidden")
        for phi in itertools.permutations(range(problem.n), F.n):
            mask = 0
            for e in F.edges:
                mask |= 1 << index[tuple(sorted(phi[v] for v in e))]
            masks.add(mask)
    return sorted(masks)


def _objective_from_degrees(mode: str, edge_count, degs):
    """Vectorized objective: degs has one row per ell-set, one column per graph."""
    if mode == "min":
        return degs.min(axis=0)
    big = np.iinfo(degs.dtype).max
    pos_min = np.where(degs > 0, degs, big).min(axis=0)
    return np.where(edge_count > 0, np.where(pos_min == big, 0, pos_min), 0)


def brute_force(problem: SearchProblem) -> SearchResult:
    """Exact optimum by full enumeration of all 2^C(n,k) edge subsets."""
    start = time.monotonic()
    n, k = problem.n, problem.k
    n_slots = comb(n, k)
    if n_slots > BRUTE_FORCE_MAX_SLOTS:
        raise InputError(
            f"brute force needs C(n,k) <= {BRUTE_FORCE_MAX_SLOTS}, got {n_slots}"
        )
    dtype = np.uint32 if n_slots <= 31 else np.uint64
    graphs = np.arange(1 << n_slots, dtype=dtype)
    free = np.ones(len(graphs), dtype=bool)
    for mask in _forbidden_masks(problem):
        m = dtype(mask)
        free &= (graphs & m) != m
    survivors = graphs[free]
    edge_count = np.bitwise_count(survivors).astype(np.int64)
    lmasks = _lset_masks(n, k, problem.ell)
    degs = np.stack(
        [np.bitwise_count(survivors & dtype(mask)).astype(np.int64)
         for _L, mask in lmasks]
    )
    values = _objective_from_degrees(problem.mode, edge_count, degs)
    best = int(values.max())
    slots = _edge_slots(n, k)
    witnesses = []
    seen = set()
    attaining = survivors[values == best]
    for g in attaining[:5000].tolist():
        edges = frozenset(slots[i] for i in range(n_slots) if g >> i & 1)
        G = KGraph(n, k, edges, validate=False)
        key = G.canonical_form()
        if key not in seen:
            seen.add(key)
            witnesses.append(G)
            if len(witnesses) >= problem.witness_cap:
                break
    stats = SearchStats(nodes=len(survivors), prunes=len(graphs) - len(survivors),
                        seconds=time.monotonic() - start)
    return SearchResult(best, tuple(witnesses), stats, exact=True)


def _objective_int(G: KGraph, ell: int, mode: str) -> int:
    return G.min_degree(ell) if mode == "min" else G.min_positive_degree(ell)


@lru_cache(maxsize=16)
def _enumerate_free_classes(n: int, k: int, forbidden: tuple[int, ...]):
    """All isomorphism classes of F-free k-graphs on n vertices.

    Breadth-first by edge count: every class with e+1 edges contains a class
    with e edges (delete any edge), so extending each level's representatives
    by every absent edge and deduplicating by canonical form is exhaustive.
    Returns (representatives, nodes, prunes).
    """
    slots = _edge_slots(n, k)
    # per edge slot, the forbidden masks that contain it (incremental check)
    by_slot: list[list[int]] = [[] for _ in slots]
    for mask in forbidden:
        for i in range(len(slots)):
            if mask >> i & 1:
                by_slot[i].append(mask)
    reps: list[tuple[int, KGraph]] = []
    nodes = 0
    prunes = 0
    level = {KGraph.empty(n, k).canonical_form(): 0}
    reps.append((0, KGraph.empty(n, k)))
    while level:
        nxt: dict[bytes, int] = {}
        for g in level.values():
            for i in range(len(slots)):
                if g >> i & 1:
                    continue
                child = g | (1 << i)
                if any((child & m) == m for m in by_slot[i]):
                    prunes += 1
                    continue
                nodes += 1
                edges = frozenset(slots[j] for j in range(len(slots)) if child >> j & 1)
                G = KGraph(n, k, edges, validate=False)
                key = G.canonical_form()
                if key not in nxt:
                    nxt[key] = child
                    reps.append((child, G))
        level = nxt
    return tuple(G for _g, G in reps), nodes, prunes


def search(problem: SearchProblem) -> SearchResult:
    """Exact optimum via isomorph-reduced generation of all F-free classes.

    Matches brute_force wherever both run; budget exhaustion returns the best
    value found so far with exact=False.
    """
    start = time.monotonic()
    forbidden = tuple(_forbidden_masks(problem))
    budget = problem.budget
    best = -1
    witnesses: list[KGraph] = []
    nodes = 0
    prunes = 0
    exact = True
    try:
        reps, nodes, prunes = _enumerate_free_classes(problem.n, problem.k, forbidden)
    except MemoryError:
        reps = ()
        exact = False
    for i, G in enumerate(reps):
        if budget.nodes is not None and i >= budget.nodes:
            exact = False
            break
        if budget.seconds is not None and time.monotonic() - start > budget.seconds:
            exact = False
            break
        value = _objective_int(G, problem.ell, problem.mode)
        if value > best:
            best = value
            witnesses = [G]
        elif value == best and len(witnesses) < problem.witness_cap:
            witnesses.append(G)
    if best < 0:
        best = 0
        witnesses = [KGraph.empty(problem.n, problem.k)]
        exact = False
    stats = SearchStats(nodes=nodes, prunes=prunes, seconds=time.monotonic() - start)
    return SearchResult(best, tuple(witnesses), stats, exact=exact)


@dataclass(frozen=True)
class RatioRow:
    n: int
    value: int
    ratio: Fraction
    exact: bool


def ratio_table(k: int, ell: int, family, n_range, mode: str = "positive",
                budget: SearchBudget = SearchBudget()) -> list[RatioRow]:
    """Normalized extremal values value/C(n-l, k-l) across a range of n."""
    rows = []
    for n in n_range:
        problem = SearchProblem(n, k, ell, tuple(family), mode, budget)
        if comb(n, k) <= BRUTE_FORCE_MAX_SLOTS:
            result = brute_force(problem)
        else:
            result = search(problem)
        denom = comb(n - ell, k - ell)
        rows.append(RatioRow(n, result.value, Fraction(result.value, denom),
                             result.exact))
    return rows


def verify_witness(problem: SearchProblem, G: KGraph, value: int) -> bool:
    """Independent re-check that a witness is family-free and attains value."""
    return (G.n == problem.n and G.k == problem.k
            and is_family_free(G, problem.family)
            and _objective_int(G, problem.ell, problem.mode) == value)
