import random
from fractions import Fraction

import numpy as np
import pytest

from poscodegree import (
    InputError,
    KGraph,
    PenaltyParams,
    PiecewiseLinear,
    Polynomial,
    StepHypergraphon,
    bernstein_approx,
    check_penalty_properties,
    convergence_experiment,
    density,
    fit_penalty_polynomial,
    grid_sup_error,
    penalty_function,
    q_functional,
)
from poscodegree.hypergraphon import proper_subsets, reduce_dependence, symmetrize

EDGE3 = KGraph(3, 3, frozenset({(0, 1, 2)}))


def random_symmetric_w(seed: int) -> StepHypergraphon:
    rnd = random.Random(seed)
    positions = proper_subsets(3)
    values = tuple(
        Fraction(rnd.randrange(0, 5), 4) for _ in range(2 ** len(positions))
    )
    W = StepHypergraphon(3, (Fraction(1, 2), Fraction(1, 2)), positions, values)
    return reduce_dependence(symmetrize(W))


class TestPenaltyParams:
    def test_valid(self):
        PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 20))

    def test_boundary_beta_admitted(self):
        PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 10))

    def test_beta_too_large(self):
        with pytest.raises(InputError):
            PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 8))

    def test_eps_too_large(self):
        with pytest.raises(InputError):
            PenaltyParams(Fraction(3, 10), Fraction(1, 2), Fraction(1, 20))

    def test_delta_above_one(self):
        with pytest.raises(InputError):
            PenaltyParams(Fraction(1, 5), Fraction(3, 2), Fraction(1, 20))

    def test_float_inputs_rationalized_exactly(self):
        p = PenaltyParams(0.2, 0.5, 0.05)
        assert (p.eps, p.delta, p.beta) == (
            Fraction(1, 5), Fraction(1, 2), Fraction(1, 20)
        )


class TestPenaltyFunction:
    def test_endpoints(self):
        params = PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 20))
        L = penalty_function(params)
        assert L.at(0) == Fraction(1, 20)
        assert L.at(1) == Fraction(1, 20)

    def test_plateau(self):
        params = PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 20))
        L = penalty_function(params)
        for x in (Fraction(1, 5), Fraction(1, 4), Fraction(3, 10)):
            assert L.at(x) == Fraction(21, 20)

    def test_first_segment_interpolation(self):
        params = PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 20))
        L = penalty_function(params)
        assert L.at(Fraction(1, 10)) == Fraction(11, 20)  # 0.55

    def test_max_slope(self):
        params = PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 20))
        assert penalty_function(params).max_slope == 10


class TestBernstein:
    def test_reproduces_constants(self):
        L = PiecewiseLinear([(0, Fraction(1, 3)), (1, Fraction(1, 3))])
        for D in (1, 4, 9):
            p = bernstein_approx(L, D)
            assert p.at(Fraction(2, 7)) == Fraction(1, 3)

    def test_reproduces_linear(self):
        L = PiecewiseLinear([(0, 0), (1, 1)])
        for D in (1, 3, 6):
            p = bernstein_approx(L, D)
            for x in (Fraction(1, 4), Fraction(5, 7)):
                assert p.at(x) == x

    def test_monotone_grid_error(self):
        params = PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 10))
        L = penalty_function(params)
        e_small = grid_sup_error(bernstein_approx(L, 64), L)
        e_large = grid_sup_error(bernstein_approx(L, 128), L)
        assert e_large <= e_small

    def test_float_eval_matches_exact(self):
        params = PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 10))
        p = bernstein_approx(penalty_function(params), 50)
        for x in (0.0, 0.31, 0.8, 1.0):
            assert abs(p(x) - float(p.at(Fraction(str(x))))) < 1e-10

    def test_monomial_expansion(self):
        # B_2 of f(x)=x^2 is x^2 + x(1-x)/2; expansion must be exact
        L = PiecewiseLinear([(0, 0), (Fraction(1, 2), Fraction(1, 4)), (1, 1)])
        p = Polynomial(bernstein=[Fraction(0), Fraction(1, 4), Fraction(1)])
        assert p.coefficients == (Fraction(0), Fraction(1, 2), Fraction(1, 2))

    def test_degree_validation(self):
        with pytest.raises(InputError):
            bernstein_approx(PiecewiseLinear([(0, 0), (1, 1)]), 0)


class TestFitAndProperties:
    PARAMS = PenaltyParams(Fraction(1, 5), Fraction(1, 2), Fraction(1, 10))

    def test_fit_terminates_within_beta(self):
        fit = fit_penalty_polynomial(self.PARAMS)
        assert fit.sup_error <= float(self.PARAMS.beta)
        assert fit.degree >= 1

    def test_fit_degree_regression(self):
        # frozen after first computation; smallest certified degree
        assert fit_penalty_polynomial(self.PARAMS).degree == 389

    def test_properties_pass_after_fit(self):
        fit = fit_penalty_polynomial(self.PARAMS)
        report = check_penalty_properties(fit.polynomial, self.PARAMS)
        assert report.ok

    def test_zero_polynomial_fails_large(self):
        p = Polynomial(coefficients=[Fraction(0), Fraction(0)])
        report = check_penalty_properties(p, self.PARAMS)
        assert not report.large_ok

    def test_constant_high_fails_small(self):
        p = Polynomial(coefficients=[Fraction(6, 5), Fraction(0)])
        report = check_penalty_properties(p, self.PARAMS)
        assert not report.small_ok


class TestQFunctional:
    def test_constant_hypergraphon(self):
        W = StepHypergraphon.constant(3, Fraction(1, 3))
        p = Polynomial(coefficients=[Fraction(1, 2), Fraction(2), Fraction(3)])
        q = q_functional(W, p, 1)
        assert q.value == p.at(Fraction(1, 3))
        assert q.via_densities == q.via_cells

    def test_pair_coordinate_square(self, pair_w):
        p = Polynomial(coefficients=[Fraction(0), Fraction(0), Fraction(1)])
        q = q_functional(pair_w, p, 2)
        assert q.value == Fraction(1, 32)
        assert q.via_densities == Fraction(1, 32)

    def test_identity_gives_edge_density(self, pair_w):
        p = Polynomial(coefficients=[Fraction(0), Fraction(1)])
        assert q_functional(pair_w, p, 2).value == density(EDGE3, pair_w)

    def test_two_paths_agree_random_suite(self):
        rnd = random.Random(17)
        for seed in range(8):
            W = random_symmetric_w(seed)
            coeffs = [Fraction(rnd.randrange(-3, 4), 3)
                      for _ in range(rnd.randrange(2, 6))]
            p = Polynomial(coefficients=coeffs)
            for ell in (1, 2):
                q = q_functional(W, p, ell)
                assert q.via_densities == q.via_cells


class TestConvergence:
    def test_complete_limit(self):
        W = StepHypergraphon.constant(3, 1)
        rows = convergence_experiment(W, 2, [8, 12], 3, 42)
        assert rows[0].kind == "reference"
        assert rows[0].pos_ratio == 1.0
        for row in rows:
            if row.kind == "trial":
                assert row.pos_ratio == 1.0 and row.min_ratio == 1.0

    def test_row_structure(self, pair_w):
        rows = convergence_experiment(pair_w, 2, [20], 2, 3, [EDGE3])
        kinds = [r.kind for r in rows]
        assert kinds == ["reference", "trial", "trial", "summary"]
        ref = rows[0]
        assert ref.pos_ratio == 0.25 and ref.min_ratio == 0.0
        assert ref.densities == (0.125,)
        summary = rows[-1]
        assert summary.pos_min is not None and summary.pos_max is not None
        assert summary.pos_min <= summary.pos_ratio <= summary.pos_max

    def test_edge_density_convergence(self, pair_w):
        rows = convergence_experiment(pair_w, 2, [100], 5, 11, [EDGE3])
        trial_densities = [r.densities[0] for r in rows if r.kind == "trial"]
        mean = float(np.mean(trial_densities))
        stderr = float(np.std(trial_densities, ddof=1) / np.sqrt(len(trial_densities)))
        assert abs(mean - 0.125) <= 4 * stderr + 0.01

    def test_n_list_must_ascend(self, pair_w):
        with pytest.raises(InputError):
            convergence_experiment(pair_w, 2, [20, 10], 1, 0)

    def test_spread_shrinks_with_n(self):
        W = StepHypergraphon.constant(3, Fraction(1, 2))
        rows = convergence_experiment(W, 2, [50, 200], 50, 2024)
        spreads = {
            r.n: r.pos_max - r.pos_min for r in rows if r.kind == "summary"
        }
        assert spreads[200] <= spreads[50]
