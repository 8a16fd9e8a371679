import itertools
import json
import random
from fractions import Fraction

import pytest

from poscodegree import (
    CellPoint,
    InputError,
    KGraph,
    LabelledKGraph,
    SizeBudgetError,
    StepHypergraphon,
    as_analytic,
    cell_measure,
    cells,
    degree,
    density,
    directed_cycle_hypergraphon,
    dump_hypergraphon,
    edge_power,
    from_graph,
    hom_density,
    load_hypergraphon,
    mc_density,
    min_degree,
    min_positive_degree,
    rooted_density,
    rooted_product,
    symmetrize,
    unlabel,
    validate,
)
from poscodegree.hypergraphon import proper_subsets, reduce_dependence, root_subsets

HALF = Fraction(1, 2)
EDGE3 = KGraph(3, 3, frozenset({(0, 1, 2)}))


def random_symmetric_w(seed: int, m: int = 2) -> StepHypergraphon:
    rnd = random.Random(seed)
    positions = proper_subsets(3)
    values = tuple(
        Fraction(rnd.randrange(0, 5), 4)
        for _ in range(m ** len(positions))
    )
    lengths = tuple(Fraction(1, m) for _ in range(m))
    W = StepHypergraphon(3, lengths, positions, values)
    return reduce_dependence(symmetrize(W))


class TestValidate:
    def test_constant_ok(self):
        assert validate(StepHypergraphon.constant(3, HALF)).ok

    def test_asymmetric_table_reported(self):
        # value depends on the first singleton only: swapping vertices 0 and 1
        # changes it
        W = StepHypergraphon.from_full_table(
            2, [HALF, HALF], lambda a: 1 if a[frozenset({0})] == 0 else 0
        )
        report = validate(W)
        assert not report.ok
        assert report.sigma is not None

    def test_symmetrize_always_validates(self):
        for seed in range(5):
            rnd = random.Random(seed)
            W = StepHypergraphon.from_full_table(
                3, [HALF, HALF], lambda a: Fraction(rnd.randrange(0, 3), 2)
            )
            assert validate(symmetrize(W)).ok

    def test_bad_lengths(self):
        W = StepHypergraphon(3, (HALF, Fraction(1, 3)), (), (Fraction(1),))
        assert not validate(W).ok

    def test_value_out_of_range(self):
        W = StepHypergraphon(3, (Fraction(1),), (), (Fraction(2),))
        assert not validate(W).ok


class TestSymmetrize:
    def test_idempotent_and_preserving(self, pair_w):
        assert symmetrize(pair_w) == pair_w
        W = random_symmetric_w(1)
        assert symmetrize(W) == W

    def test_orbit_average(self):
        W = StepHypergraphon.from_full_table(
            2, [HALF, HALF], lambda a: 1 if a[frozenset({0})] == 0 else 0
        )
        S = symmetrize(W)
        # the orbit {(0,1),(1,0)} had values {0,1}; both average to 1/2
        idx = {P: i for i, P in enumerate(S.positions)}
        for parts in ((0, 1), (1, 0)):
            assign = {P: parts[idx[P]] for P in S.positions}
            assert S.value_for(assign) == HALF


class TestFromGraph:
    def test_complete_graph_indicator(self):
        G = KGraph.complete(4, 3)
        W = from_graph(G)
        for parts in itertools.product(range(4), repeat=3):
            expected = Fraction(1 if len(set(parts)) == 3 else 0)
            assert W.value_at(parts) == expected

    def test_empty_graph_zero(self):
        W = from_graph(KGraph.empty(4, 3))
        assert W.is_zero()

    def test_edge_density_formula(self):
        G = KGraph(5, 3, frozenset({(0, 1, 2), (0, 3, 4), (1, 2, 4)}))
        assert density(EDGE3, from_graph(G)) == Fraction(6 * 3, 125)

    def test_needs_enough_vertices(self):
        with pytest.raises(InputError):
            from_graph(KGraph(2, 3))


class TestDensity:
    def test_constant_power(self):
        W = StepHypergraphon.constant(3, Fraction(2, 5))
        F = KGraph(4, 3, frozenset({(0, 1, 2), (0, 1, 3)}))
        assert density(F, W) == Fraction(4, 25)

    def test_pair_coordinate_values(self, pair_w, book):
        assert density(EDGE3, pair_w) == Fraction(1, 8)
        assert density(book, pair_w) == Fraction(1, 32)

    def test_matches_hom_density(self):
        rnd = random.Random(2)
        for _ in range(40):
            nG = rnd.randrange(3, 7)
            pool = list(itertools.combinations(range(nG), 3))
            G = KGraph(nG, 3,
                       frozenset(e for e in pool if rnd.random() < 0.4),
                       validate=False)
            nF = rnd.randrange(3, 5)
            poolF = list(itertools.combinations(range(nF), 3))
            F = KGraph(nF, 3,
                       frozenset(e for e in poolF if rnd.random() < 0.6),
                       validate=False)
            assert density(F, from_graph(G)) == hom_density(F, G)

    def test_uniformity_mismatch(self, pair_w):
        with pytest.raises(InputError):
            density(KGraph(2, 2, frozenset({(0, 1)})), pair_w)

    def test_budget_guard(self):
        W = from_graph(KGraph.complete(6, 3))
        F = KGraph.complete(5, 3)
        with pytest.raises(SizeBudgetError):
            density(F, W, budget=10)

    def test_unit_interval(self):
        for seed in range(6):
            W = random_symmetric_w(seed)
            F = KGraph(4, 3, frozenset({(0, 1, 2), (1, 2, 3)}))
            assert 0 <= density(F, W) <= 1


class TestDegreesOnCells:
    def test_constant(self):
        W = StepHypergraphon.constant(3, Fraction(3, 7))
        for c in cells(W, 2):
            assert degree(W, c) == Fraction(3, 7)

    def test_pair_coordinate_cells(self, pair_w):
        # r[2] coordinates are [{0},{1},{0,1}]; only the pair coordinate matters
        assert degree(pair_w, CellPoint(2, (0, 0, 0))) == Fraction(1, 4)
        assert degree(pair_w, CellPoint(2, (0, 0, 1))) == Fraction(0)

    def test_from_graph_degree_scaling(self):
        G = KGraph.complete(4, 3)
        W = from_graph(G)
        c = CellPoint(2, (0, 1, 0))  # distinct singleton parts 0 and 1
        assert degree(W, c) == Fraction(G.degree((0, 1)), 4)

    def test_repeated_singleton_parts_zero(self):
        W = from_graph(KGraph.complete(5, 3))
        assert degree(W, CellPoint(2, (2, 2, 0))) == 0

    def test_min_degrees(self, pair_w):
        assert min_positive_degree(pair_w, 2) == Fraction(1, 4)
        assert min_degree(pair_w, 2) == 0
        assert min_positive_degree(StepHypergraphon.constant(3, 0), 2) == 0
        p = Fraction(2, 3)
        assert min_positive_degree(StepHypergraphon.constant(3, p), 1) == p
        assert min_degree(StepHypergraphon.constant(3, p), 1) == p

    def test_min_degree_le_positive(self):
        for seed in range(6):
            W = random_symmetric_w(seed)
            for ell in (1, 2):
                mp = min_positive_degree(W, ell)
                if mp > 0:
                    assert min_degree(W, ell) <= mp

    def test_graph_scaling_law(self):
        rnd = random.Random(9)
        for _ in range(20):
            n = rnd.randrange(3, 7)
            pool = list(itertools.combinations(range(n), 3))
            G = KGraph(n, 3,
                       frozenset(e for e in pool if rnd.random() < 0.4),
                       validate=False)
            W = from_graph(G)
            for ell in (1, 2):
                from math import factorial
                assert min_positive_degree(W, ell) == Fraction(
                    G.min_positive_degree(ell) * factorial(3 - ell), n ** (3 - ell)
                )


class TestRootedDensities:
    def test_single_edge_is_degree(self, pair_w):
        E = edge_power(3, 2, 1)
        for c in cells(pair_w, 2):
            assert rooted_density(E, pair_w, c) == degree(pair_w, c)

    def test_constant_power(self):
        W = StepHypergraphon.constant(3, Fraction(1, 3))
        F = edge_power(3, 1, 2)
        c = CellPoint(1, (0,))
        assert rooted_density(F, W, c) == Fraction(1, 9)

    def test_product_law(self):
        rnd = random.Random(4)
        for seed in range(4):
            W = random_symmetric_w(seed)
            for ell in (1, 2):
                F1 = edge_power(3, ell, rnd.randrange(1, 3))
                F2 = edge_power(3, ell, rnd.randrange(1, 3))
                FF = rooted_product(F1, F2)
                for c in cells(W, ell):
                    assert rooted_density(FF, W, c) == (
                        rooted_density(F1, W, c) * rooted_density(F2, W, c)
                    )

    def test_power_law(self):
        for seed in range(4):
            W = random_symmetric_w(seed)
            for ell in (1, 2):
                for i in (0, 1, 2, 3):
                    F = edge_power(3, ell, i)
                    for c in cells(W, ell):
                        assert rooted_density(F, W, c) == degree(W, c) ** i

    def test_averaging_law(self):
        for seed in range(4):
            W = random_symmetric_w(seed)
            for ell in (1, 2):
                F = edge_power(3, ell, 2)
                total = sum(
                    cell_measure(W, c) * rooted_density(F, W, c)
                    for c in cells(W, ell)
                )
                assert total == density(unlabel(F), W)

    def test_root_mismatch(self, pair_w):
        with pytest.raises(InputError):
            rooted_density(edge_power(3, 1, 1), pair_w, CellPoint(2, (0, 0, 0)))


class TestRootedProduct:
    def test_book(self):
        E = edge_power(3, 2, 1)
        book = rooted_product(E, E)
        assert book.graph.n == 4 and book.graph.edges == frozenset(
            {(0, 1, 2), (0, 1, 3)}
        )

    def test_with_edgeless(self):
        E = edge_power(3, 2, 1)
        idle = LabelledKGraph(KGraph(4, 3), 2)
        P = rooted_product(E, idle)
        assert P.graph.edge_count == 1 and P.graph.n == 3 + 2

    def test_edge_power_shape(self):
        for ell in (0, 1, 2):
            for i in (0, 1, 2, 4):
                F = edge_power(3, ell, i)
                assert F.graph.n == ell + i * (3 - ell)
                assert F.graph.edge_count == i

    def test_unlabel(self):
        assert unlabel(edge_power(3, 2, 2)) == KGraph(
            4, 3, frozenset({(0, 1, 2), (0, 1, 3)})
        )

    def test_root_count_mismatch(self):
        with pytest.raises(InputError):
            rooted_product(edge_power(3, 1, 1), edge_power(3, 2, 1))


class TestDirectedCycle:
    def test_defining_point(self):
        H = directed_cycle_hypergraphon()
        assert H((0.1, 0.5, 0.9, 0.2, 0.8, 0.3)) == 1.0

    def test_violating_point(self):
        H = directed_cycle_hypergraphon()
        # coordinate order: x1, x2, x3, x12, x13, x23
        assert H((0.1, 0.5, 0.9, 0.2, 0.2, 0.3)) == 0.0

    def test_orbit_closure(self):
        H = directed_cycle_hypergraphon()
        # relabel the defining point by the transposition (1 2): vertex coords
        # swap and pair coords follow
        assert H((0.5, 0.1, 0.9, 0.2, 0.3, 0.8)) == 1.0

    def test_ties_are_zero(self):
        H = directed_cycle_hypergraphon()
        assert H((0.5, 0.5, 0.9, 0.2, 0.8, 0.3)) == 0.0

    def test_statistical_symmetry(self):
        assert directed_cycle_hypergraphon().check_symmetry(trials=300, seed=1)

    def test_edge_density_monte_carlo(self):
        H = directed_cycle_hypergraphon()
        est = mc_density(EDGE3, H, trials=40_000, seed=5)
        assert abs(est.value - 0.125) <= 3 * est.stderr


class TestMonteCarlo:
    def test_constant_one(self):
        W = as_analytic(StepHypergraphon.constant(3, 1))
        est = mc_density(EDGE3, W, trials=50, seed=0)
        assert est.value == 1.0 and est.stderr == 0.0

    def test_step_wrapper_matches_exact(self, pair_w, book):
        H = as_analytic(pair_w)
        est = mc_density(book, H, trials=40_000, seed=9)
        exact = float(density(book, pair_w))
        assert abs(est.value - exact) <= 3 * est.stderr

    def test_trials_validation(self):
        with pytest.raises(InputError):
            mc_density(EDGE3, directed_cycle_hypergraphon(), trials=0, seed=0)


class TestJsonFormat:
    def test_round_trip(self, pair_w):
        data = dump_hypergraphon(pair_w)
        assert load_hypergraphon(data) == pair_w
        assert load_hypergraphon(json.dumps(data)) == pair_w

    def test_default_zero(self):
        data = {"k": 3, "lengths": ["1/2", "1/2"], "table": []}
        W = load_hypergraphon(data)
        assert W.is_zero()

    def test_strict_rejects_asymmetric(self):
        entry = {
            "assign": {"1": 0, "2": 0, "3": 0, "12": 0, "13": 0, "23": 0},
            "value": "1",
        }
        base = {"k": 2, "lengths": ["1/2", "1/2"],
                "table": [{"assign": {"1": 0, "2": 1}, "value": "1"}]}
        with pytest.raises(InputError):
            load_hypergraphon(base, strict=True)
        W = load_hypergraphon(base, strict=False)
        assert validate(W).ok

    def test_partial_assignment_rejected(self):
        data = {"k": 3, "lengths": ["1"], "table": [
            {"assign": {"1": 0}, "value": "1"}
        ]}
        with pytest.raises(InputError):
            load_hypergraphon(data)

    def test_bad_part_index(self):
        data = {"k": 2, "lengths": ["1"], "table": [
            {"assign": {"1": 1, "2": 1}, "value": "1"}
        ]}
        with pytest.raises(InputError):
            load_hypergraphon(data)


class TestCoordinateFamilies:
    def test_proper_subsets_order(self):
        subs = proper_subsets(3)
        assert [tuple(sorted(P)) for P in subs] == [
            (0,), (1,), (2,), (0, 1), (0, 2), (1, 2)
        ]

    def test_root_subsets(self):
        assert [tuple(sorted(P)) for P in root_subsets(2)] == [(0,), (1,), (0, 1)]
        assert root_subsets(0) == ()

    def test_cell_validation(self):
        with pytest.raises(InputError):
            CellPoint(2, (0,))
