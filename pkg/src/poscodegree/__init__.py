"""Exact computation and simulation toolkit for positive l-degree Turan
problems on k-uniform hypergraphs.

The package computes minimum positive l-degrees, exact homomorphism
densities (in graphs and in step hypergraphons), Kruskal-Katona-style shadow
and edge-count bounds, exact extremal values with witnesses for forbidden
families, W-random samples with concentration-bound helpers, and the
penalty-polynomial / Q-functional machinery that links finite samples to
their hypergraphon limits.
"""

__version__ = "0.1.0"

from .hypergraph import (
    InputError,
    KGraph,
    LabelledKGraph,
    ParseError,
    contains_subgraph,
    hom_density,
    is_family_free,
    parse_family,
    parse_graph,
    serialize_graph,
)
from .shadow import (
    KKReport,
    check_kk,
    invert_real_binomial,
    kk_edge_lower_bound,
    real_binomial,
    shadow_lower_bound,
)
from .hypergraphon import (
    AnalyticHypergraphon,
    CellPoint,
    MCEstimate,
    SizeBudgetError,
    StepHypergraphon,
    ValidationReport,
    as_analytic,
    cell_measure,
    cells,
    degree,
    density,
    directed_cycle_hypergraphon,
    dump_hypergraphon,
    edge_power,
    labelled_edge,
    from_graph,
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
from .sampling import (
    ContainmentEstimate,
    SampleConfig,
    azuma_bound_degree,
    azuma_bound_empty,
    derive_seed,
    estimate_containment,
    sample,
    sample_induced,
)
from .search import (
    RatioRow,
    SearchBudget,
    SearchProblem,
    SearchResult,
    brute_force,
    ratio_table,
    search,
    verify_witness,
)
from .limits import (
    FitResult,
    PenaltyParams,
    PiecewiseLinear,
    Polynomial,
    PropertyReport,
    QResult,
    bernstein_approx,
    check_penalty_properties,
    convergence_experiment,
    fit_penalty_polynomial,
    grid_sup_error,
    penalty_function,
    q_functional,
)
