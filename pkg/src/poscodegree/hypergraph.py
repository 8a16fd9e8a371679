"""Finite k-uniform hypergraphs: degrees, densities, containment, isomorphism.

Vertices are 0-based contiguous integers 0..n-1.  Edges are sorted k-tuples
of distinct vertices.  All objects are immutable after construction and safe
to share across workers.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, InitVar
from fractions import Fraction
from math import comb, factorial

import numpy as np


class InputError(ValueError):
    """Invalid argument: bad vertex id, mismatched uniformity, range error."""


class ParseError(InputError):
    """Malformed hypergraph text; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# threshold above which degree tallies switch from a Counter to numpy bincount
_BINCOUNT_EDGE_MIN = 64
_BINCOUNT_CODE_MAX = 50_000_000


@dataclass(frozen=True)
class KGraph:
    """A k-uniform hypergraph on vertex set {0, ..., n-1}."""

    n: int
    k: int
    edges: frozenset = frozenset()
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        if not isinstance(self.edges, frozenset):
            object.__setattr__(
                self, "edges", frozenset(tuple(sorted(e)) for e in self.edges)
            )
        if not validate:
            return
        if self.k < 1:
            raise InputError(f"uniformity k must be >= 1, got {self.k}")
        if self.n < 0:
            raise InputError(f"vertex count must be >= 0, got {self.n}")
        for e in self.edges:
            if len(e) != self.k or len(set(e)) != self.k:
                raise InputError(f"edge {e} does not have {self.k} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n:
                raise InputError(f"edge {e} has a vertex outside 0..{self.n - 1}")
            if tuple(sorted(e)) != e:
                raise InputError(f"edge {e} is not sorted")

    # -- constructors ------------------------------------------------------

    @classmethod
    def complete(cls, n: int, k: int) -> "KGraph":
        return cls(n, k, frozenset(itertools.combinations(range(n), k)), validate=False)

    @classmethod
    def empty(cls, n: int, k: int) -> "KGraph":
        return cls(n, k, frozenset(), validate=False)

    # -- basic queries -----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, vertices) -> int:
        """Number of edges containing every vertex of `vertices`."""
        L = tuple(sorted(vertices))
        if len(set(L)) != len(L):
            raise InputError(f"vertex set {L} has repeats")
        if L and (L[0] < 0 or L[-1] >= self.n):
            raise InputError(f"vertex set {L} outside 0..{self.n - 1}")
        S = set(L)
        return sum(1 for e in self.edges if S.issubset(e))

    def _check_ell(self, ell: int) -> None:
        if not 0 <= ell <= self.k - 1:
            raise InputError(f"l must satisfy 0 <= l <= k-1 = {self.k - 1}, got {ell}")

    def _degree_tally(self, ell: int):
        """Return (positive degree counts, number of covered l-sets)."""
        if ell == 0:
            return [len(self.edges)], 1
        if len(self.edges) >= _BINCOUNT_EDGE_MIN and self.n ** ell <= _BINCOUNT_CODE_MAX:
            E = np.array(list(self.edges), dtype=np.int64)
            codes = []
            for pos in itertools.combinations(range(self.k), ell):
                code = np.zeros(len(E), dtype=np.int64)
                for c in pos:
                    code = code * self.n + E[:, c]
                codes.append(code)
            counts = np.bincount(np.concatenate(codes))
            pos_counts = counts[counts > 0]
            return pos_counts, int(len(pos_counts))
        tally = Counter()
        for e in self.edges:
            for L in itertools.combinations(e, ell):
                tally[L] += 1
        return list(tally.values()), len(tally)

    def min_positive_degree(self, ell: int) -> int:
        """delta^+_l: 0 for an edgeless graph, else the least positive l-degree."""
        self._check_ell(ell)
        if not self.edges:
            return 0
        pos, _covered = self._degree_tally(ell)
        return int(min(pos))

    def min_degree(self, ell: int) -> int:
        """delta_l: minimum l-degree over all l-sets, zero-degree sets included."""
        self._check_ell(ell)
        if not self.edges:
            return 0
        pos, covered = self._degree_tally(ell)
        if covered < comb(self.n, ell):
            return 0
        return int(min(pos))

    def induced(self, vertices) -> "KGraph":
        """Subgraph induced by `vertices`, relabelled 0..|S|-1 preserving order."""
        S = tuple(sorted(vertices))
        if len(set(S)) != len(S) or (S and (S[0] < 0 or S[-1] >= self.n)):
            raise InputError(f"invalid vertex subset {S}")
        relabel = {v: i for i, v in enumerate(S)}
        keep = set(S)
        edges = frozenset(
            tuple(relabel[v] for v in e) for e in self.edges if keep.issuperset(e)
        )
        return KGraph(len(S), self.k, edges, validate=False)

    def relabel(self, perm) -> "KGraph":
        """Apply a vertex permutation (perm[v] is the new label of v)."""
        edges = frozenset(tuple(sorted(perm[v] for v in e)) for e in self.edges)
        return KGraph(self.n, self.k, edges, validate=False)

    # -- isomorphism -------------------------------------------------------

    def _refined_cells(self) -> list[list[int]]:
        """Ordered vertex partition from iterated degree-sequence refinement."""
        edges = sorted(self.edges)
        incident = [[] for _ in range(self.n)]
        for e in edges:
            for v in e:
                incident[v].append(e)
        colors = [0] * self.n
        ncolors = 1
        while True:
            keys = []
            for v in range(self.n):
                sig = sorted(tuple(sorted(colors[u] for u in e)) for e in incident[v])
                keys.append((colors[v], tuple(sig)))
            rank = {key: i for i, key in enumerate(sorted(set(keys)))}
            new = [rank[key] for key in keys]
            nnew = len(rank)
            if nnew == ncolors:
                colors = new
                break
            colors, ncolors = new, nnew
        cells: dict[int, list[int]] = {}
        for v in range(self.n):
            cells.setdefault(colors[v], []).append(v)
        return [cells[c] for c in sorted(cells)]

    def canonical_form(self) -> bytes:
        """Canonical byte string; equal iff two graphs are isomorphic.

        Iterative degree refinement narrows the candidate labellings, then all
        labellings respecting the refined cells are tried exhaustively.  Meant
        for small graphs (n <= 10).
        """
        header = f"{self.k} {self.n}|"
        edges = sorted(self.edges)
        if not edges or len(edges) == comb(self.n, self.k):
            canon = edges
        else:
            cells = self._refined_cells()
            offsets = []
            off = 0
            for cell in cells:
                offsets.append(off)
                off += len(cell)
            best = None
            for orderings in itertools.product(
                *(itertools.permutations(cell) for cell in cells)
            ):
                perm = [0] * self.n
                for cell_order, off in zip(orderings, offsets):
                    for i, v in enumerate(cell_order):
                        perm[v] = off + i
                rel = sorted(tuple(sorted(perm[v] for v in e)) for e in edges)
                if best is None or rel < best:
                    best = rel
            canon = best
        body = ";".join(",".join(map(str, e)) for e in canon)
        return (header + body).encode()


@dataclass(frozen=True)
class LabelledKGraph:
    """A k-graph whose first `roots` vertices are distinguished."""

    graph: KGraph
    roots: int

    def __post_init__(self):
        if not 0 <= self.roots <= self.graph.k - 1:
            raise InputError(
                f"root count must satisfy 0 <= l <= k-1, got {self.roots}"
            )
        if self.roots > self.graph.n:
            raise InputError("more roots than vertices")


# -- densities and containment ---------------------------------------------


def hom_density(F: KGraph, G: KGraph) -> Fraction:
    """Probability that a uniform random map V(F) -> V(G) preserves all edges.

    Non-injective maps are counted; a map collapsing an edge never preserves
    it.  Exact rational.
    """
    if F.k != G.k:
        raise InputError(f"uniformity mismatch: {F.k} != {G.k}")
    if G.n < 1:
        raise InputError("target graph must have at least one vertex")
    if not F.edges:
        return Fraction(1)
    if F.n == F.k and len(F.edges) == 1:
        # single edge spanning all of V(F): only the k! injective orderings work
        return Fraction(factorial(F.k) * len(G.edges), G.n ** F.n)
    edges = sorted(F.edges)
    complete_at = [[] for _ in range(F.n)]
    for e in edges:
        complete_at[e[-1]].append(e)
    gedges = G.edges
    image = [0] * F.n

    def count(v: int) -> int:
        if v == F.n:
            return 1
        total = 0
        for g in range(G.n):
            image[v] = g
            ok = True
            for e in complete_at[v]:
                im = tuple(sorted(image[u] for u in e))
                if len(set(im)) != F.k or im not in gedges:
                    ok = False
                    break
            if ok:
                total += count(v + 1)
        return total

    return Fraction(count(0), G.n ** F.n)


def contains_subgraph(F: KGraph, G: KGraph) -> bool:
    """True iff some injective map V(F) -> V(G) sends edges of F into E(G)."""
    if F.k != G.k:
        raise InputError(f"uniformity mismatch: {F.k} != {G.k}")
    if F.n > G.n:
        return False
    if len(F.edges) > len(G.edges):
        return False
    edges = sorted(F.edges)
    complete_at = [[] for _ in range(F.n)]
    for e in edges:
        complete_at[e[-1]].append(e)
    gedges = G.edges
    image = [0] * F.n
    used = [False] * G.n

    def extend(v: int) -> bool:
        if v == F.n:
            return True
        for g in range(G.n):
            if used[g]:
                continue
            image[v] = g
            ok = True
            for e in complete_at[v]:
                if tuple(sorted(image[u] for u in e)) not in gedges:
                    ok = False
                    break
            if ok:
                used[g] = True
                if extend(v + 1):
                    used[g] = False
                    return True
                used[g] = False
        return False

    return extend(0)


def is_family_free(G: KGraph, family) -> bool:
    """True iff G contains no member of the family as a subgraph."""
    return not any(contains_subgraph(F, G) for F in family)


# -- text format -------------------------------------------------------------
#
# First line "k n"; each following non-empty line is one edge as k
# space-separated vertex ids; lines starting with '#' are comments.


def parse_graph(text: str) -> KGraph:
    k = n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if k is None:
            if len(fields) != 2:
                raise ParseError("header must be 'k n'", lineno)
            try:
                k, n = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError("header must hold two integers", lineno) from None
            if k < 1 or n < 0:
                raise ParseError(f"bad header values k={k} n={n}", lineno)
            continue
        if len(fields) != k:
            raise ParseError(f"expected {k} vertex ids, got {len(fields)}", lineno)
        try:
            verts = tuple(sorted(int(f) for f in fields))
        except ValueError:
            raise ParseError("vertex ids must be integers", lineno) from None
        if len(set(verts)) != k:
            raise ParseError(f"repeated vertex in edge {verts}", lineno)
        if verts[0] < 0 or verts[-1] >= n:
            raise ParseError(f"vertex out of range in edge {verts}", lineno)
        if verts in seen:
            raise ParseError(f"duplicate edge {verts}", lineno)
        seen.add(verts)
        edges.append(verts)
    if k is None:
        raise ParseError("missing 'k n' header")
    return KGraph(n, k, frozenset(edges), validate=False)


def serialize_graph(G: KGraph) -> str:
    lines = [f"{G.k} {G.n}"]
    lines.extend(" ".join(map(str, e)) for e in sorted(G.edges))
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> list[KGraph]:
    """Parse several graphs from one file; blocks are separated by '---' lines."""
    blocks = []
    current: list[str] = []
    for raw in text.splitlines():
        if raw.strip() == "---":
            blocks.append("\n".join(current))
            current = []
        else:
            current.append(raw)
    blocks.append("\n".join(current))
    return [parse_graph(b) for b in blocks if b.strip()]
