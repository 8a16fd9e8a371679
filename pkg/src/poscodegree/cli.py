"""Command-line interface: every operation as a subcommand with stable
text/CSV/JSON output and pinned-seed reproducibility.

Every output starts with a run manifest (subcommand, parameters, seed,
version, input digests): as a "manifest" key in JSON outputs, as one
'#'-prefixed JSON line in text and CSV outputs.  Identical manifests produce
byte-identical outputs regardless of the --jobs level.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .hypergraph import (
    InputError,
    KGraph,
    hom_density,
    parse_family,
    parse_graph,
    serialize_graph,
)
from .hypergraphon import (
    SizeBudgetError,
    StepHypergraphon,
    density,
    directed_cycle_hypergraphon,
    load_hypergraphon,
    min_degree,
    min_positive_degree,
    validate,
)
from .search import (
    SearchBudget,
    SearchProblem,
    brute_force,
    ratio_table,
    search,
    BRUTE_FORCE_MAX_SLOTS,
)
from .shadow import check_kk
from .limits import (
    PenaltyParams,
    bernstein_approx,
    check_penalty_properties,
    convergence_experiment,
    fit_penalty_polynomial,
    grid_sup_error,
    penalty_function,
)
from . import sampling

CACHE_ENV = "POSCODEGREE_CACHE_DIR"


def _fmt_float(x: float) -> str:
    return format(float(x), ".12g")


def _fmt_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _manifest(args, input_paths: dict[str, str | None]) -> dict:
    params = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("func", "jobs") and v is not None
    }
    seed = params.pop("seed", None)
    return {
        "subcommand": args.subcommand,
        "params": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in params.items()},
        "seed": seed,
        "version": __version__,
        "inputs": {
            name: _sha256(path) for name, path in input_paths.items() if path
        },
    }


def _emit_manifest_comment(manifest: dict) -> None:
    print("# " + json.dumps(manifest, sort_keys=True))


def _read_graph(path: str) -> KGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _read_family(path: str) -> list[KGraph]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_family(fh.read())


def _load_w(spec: str, strict: bool = True):
    """--hypergraphon argument: a JSON file path, builtin:directed-cycle,
    or const:p with p a rational in [0,1] (k inferred as 3 unless const:k:p)."""
    if spec == "builtin:directed-cycle":
        return directed_cycle_hypergraphon(), None
    if spec.startswith("const:"):
        rest = spec.split(":")[1:]
        if len(rest) == 1:
            k, p = 3, rest[0]
        elif len(rest) == 2:
            k, p = int(rest[0]), rest[1]
        else:
            raise InputError(f"bad constant hypergraphon spec {spec!r}")
        return StepHypergraphon.constant(k, Fraction(p)), None
    with open(spec, "r", encoding="utf-8") as fh:
        return load_hypergraphon(fh.read(), strict=strict), spec


# -- subcommands ----------------------------------------------------------------


def cmd_delta(args) -> int:
    G = _read_graph(args.graph)
    _emit_manifest_comment(_manifest(args, {"graph": args.graph}))
    value = (G.min_positive_degree(args.l) if args.mode == "positive"
             else G.min_degree(args.l))
    print(value)
    return 0


def cmd_density(args) -> int:
    if (args.g is None) == (args.hypergraphon is None):
        raise InputError("give exactly one of --g or --hypergraphon")
    F = _read_graph(args.f)
    if args.g is not None:
        manifest = _manifest(args, {"f": args.f, "g": args.g})
        value = hom_density(F, _read_graph(args.g))
    else:
        W, path = _load_w(args.hypergraphon)
        if not isinstance(W, StepHypergraphon):
            raise InputError("exact density needs a step hypergraphon")
        manifest = _manifest(args, {"f": args.f, "hypergraphon": path})
        value = density(F, W, budget=args.budget)
    _emit_manifest_comment(manifest)
    print(f"{_fmt_rational(value)} {_fmt_float(value)}")
    return 0


def cmd_solve(args) -> int:
    family = _read_family(args.family) if args.family else []
    problem = SearchProblem(
        args.n, args.k, args.l, tuple(family), args.mode,
        SearchBudget(args.budget_nodes, args.budget_seconds),
    )
    from math import comb
    if args.engine == "brute" or (
        args.engine == "auto" and comb(args.n, args.k) <= BRUTE_FORCE_MAX_SLOTS
    ):
        result = brute_force(problem)
    else:
        result = search(problem)
    if args.witnesses:
        outdir = Path(args.witnesses)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, w in enumerate(result.witnesses):
            (outdir / f"witness_{i:03d}.txt").write_text(serialize_graph(w))
    payload = {
        "manifest": _manifest(args, {"family": args.family}),
        "value": result.value,
        "exact": result.exact,
        "witnesses": len(result.witnesses),
        # wall-clock time is omitted so repeated runs are byte-identical
        "stats": {
            "nodes": result.stats.nodes,
            "prunes": result.stats.prunes,
        },
    }
    print(json.dumps(payload, sort_keys=True))
    return 0 if result.exact else 2


def cmd_ratios(args) -> int:
    family = _read_family(args.family) if args.family else []
    budget = SearchBudget(args.budget_nodes, args.budget_seconds)
    rows = ratio_table(args.k, args.l, family, range(args.n_from, args.n_to + 1),
                       args.mode, budget)
    _emit_manifest_comment(_manifest(args, {"family": args.family}))
    print("n,value,ratio,ratio_decimal,exact")
    all_exact = True
    for row in rows:
        all_exact &= row.exact
        print(f"{row.n},{row.value},{_fmt_rational(row.ratio)},"
              f"{_fmt_float(row.ratio)},{str(row.exact).lower()}")
    return 0 if all_exact else 2


def cmd_sample(args) -> int:
    W, path = _load_w(args.hypergraphon)
    manifest = _manifest(args, {"hypergraphon": path})
    if args.trials == 1:
        G = sampling.sample(args.n, W, args.seed)
        _emit_manifest_comment(manifest)
        sys.stdout.write(serialize_graph(G))
        return 0
    _emit_manifest_comment(manifest)
    header = "trial,edges"
    if args.l is not None:
        header += ",delta_pos,delta_min"
    print(header)
    for t in range(args.trials):
        G = sampling.sample(args.n, W, sampling.derive_seed(args.seed, t))
        line = f"{t},{G.edge_count}"
        if args.l is not None:
            line += f",{G.min_positive_degree(args.l)},{G.min_degree(args.l)}"
        print(line)
    return 0


def cmd_converge(args) -> int:
    W, path = _load_w(args.hypergraphon)
    if not isinstance(W, StepHypergraphon):
        raise InputError("convergence experiments need a step hypergraphon")
    F_list = _read_family(args.f) if args.f else []
    n_list = [int(s) for s in args.n.split(",")]
    rows = convergence_experiment(W, args.l, n_list, args.trials, args.seed, F_list)
    _emit_manifest_comment(_manifest(args, {"hypergraphon": path, "f": args.f}))
    dens_cols = "".join(f",density_{i}" for i in range(len(F_list)))
    print(f"kind,n,trial,pos_ratio,min_ratio,pos_min,pos_max{dens_cols}")
    for row in rows:
        n = "" if row.n is None else row.n
        t = "" if row.trial is None else row.trial
        lo = "" if row.pos_min is None else _fmt_float(row.pos_min)
        hi = "" if row.pos_max is None else _fmt_float(row.pos_max)
        dens = "".join("," + _fmt_float(d) for d in row.densities)
        dens += "," * (len(F_list) - len(row.densities))
        print(f"{row.kind},{n},{t},{_fmt_float(row.pos_ratio)},"
              f"{_fmt_float(row.min_ratio)},{lo},{hi}{dens}")
    return 0


def cmd_kk_check(args) -> int:
    graphs = _read_family(args.graphs)
    manifest = _manifest(args, {"graphs": args.graphs})
    for i, G in enumerate(graphs):
        report = check_kk(G, args.l)
        payload = {
            "graph": i,
            "n": G.n,
            "edges": report.edges,
            "gamma_max": _fmt_float(report.gamma_max),
            "bound": _fmt_float(report.bound),
            "holds": report.holds,
        }
        if i == 0:
            payload = {"manifest": manifest, **payload}
        print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_penalty(args) -> int:
    params = PenaltyParams(Fraction(args.eps), Fraction(args.delta), Fraction(args.beta))
    L = penalty_function(params)
    if args.degree is not None:
        p = bernstein_approx(L, args.degree)
        deg = args.degree
        sup = grid_sup_error(p, L) + float(L.max_slope) / (10 ** 4 - 1)
    else:
        fit = fit_penalty_polynomial(params)
        p, deg, sup = fit.polynomial, fit.degree, fit.sup_error
    report = check_penalty_properties(p, params)
    payload = {
        "manifest": _manifest(args, {}),
        "degree": deg,
        "sup_error": _fmt_float(sup),
        "sup_error_ok": sup <= float(params.beta),
        "properties": {
            "nonneg": {"ok": report.nonneg_ok, "margin": _fmt_float(report.nonneg_margin)},
            "small": {"ok": report.small_ok, "margin": _fmt_float(report.small_margin)},
            "large": {"ok": report.large_ok, "margin": _fmt_float(report.large_margin)},
        },
        "ok": report.ok,
    }
    print(json.dumps(payload, sort_keys=True))
    return 0 if report.ok else 1


def cmd_hypergraphon_validate(args) -> int:
    with open(args.hypergraphon, "r", encoding="utf-8") as fh:
        text = fh.read()
    manifest = _manifest(args, {"hypergraphon": args.hypergraphon})
    try:
        W = load_hypergraphon(text, strict=args.strict)
    except InputError as exc:
        print(json.dumps({"manifest": manifest, "ok": False, "message": str(exc)},
                         sort_keys=True))
        return 1
    report = validate(W)
    payload = {
        "manifest": manifest,
        "ok": report.ok,
        "message": report.message,
        "k": W.k,
        "parts": W.m,
    }
    if args.l is not None:
        payload["delta_pos"] = _fmt_rational(min_positive_degree(W, args.l))
        payload["delta_min"] = _fmt_rational(min_degree(W, args.l))
    print(json.dumps(payload, sort_keys=True))
    return 0 if report.ok else 1


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poscodegree",
        description="Exact computation and simulation toolkit for positive "
                    "l-degree Turan problems on k-uniform hypergraphs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=fn)
        p.add_argument("--jobs", type=int, default=1,
                       help="worker cap; outputs are identical at any level")
        return p

    p = add("delta", cmd_delta, help="minimum (positive) l-degree of a graph")
    p.add_argument("--graph", required=True, help="hypergraph text file")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--mode", choices=["positive", "min"], required=True)

    p = add("density", cmd_density, help="exact homomorphism density")
    p.add_argument("--f", required=True, help="pattern graph file")
    p.add_argument("--g", help="host graph file")
    p.add_argument("--hypergraphon", help="host hypergraphon (JSON file or const:p)")
    p.add_argument("--budget", type=int, default=10 ** 8,
                   help="term budget for exact integration")

    p = add("solve", cmd_solve, help="extremal degree value with witnesses")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--family", help="forbidden family file ('---' separated)")
    p.add_argument("--mode", choices=["positive", "min"], required=True)
    p.add_argument("--engine", choices=["auto", "brute", "search"], default="auto")
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--witnesses", help="directory for witness files")

    p = add("ratios", cmd_ratios, help="normalized extremal ratios across n")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--family", help="forbidden family file ('---' separated)")
    p.add_argument("--mode", choices=["positive", "min"], required=True)
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--budget-seconds", type=float)

    p = add("sample", cmd_sample, help="W-random hypergraph samples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--hypergraphon", required=True,
                   help="JSON file, builtin:directed-cycle, or const:[k:]p")
    p.add_argument("--l", type=int, help="add degree columns to multi-trial CSV")

    p = add("converge", cmd_converge, help="degree-ratio convergence experiment")
    p.add_argument("--hypergraphon", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--n", required=True, help="comma-separated ascending sizes")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--f", help="family file of density probes")

    p = add("kk-check", cmd_kk_check, help="edge-count lower bound reports")
    p.add_argument("--graphs", required=True, help="graph file ('---' separated)")
    p.add_argument("--l", type=int, required=True)

    p = add("penalty", cmd_penalty, help="penalty polynomial fit and checks")
    p.add_argument("--eps", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--degree", type=int, help="skip the fit; use this degree")

    p = add("hypergraphon-validate", cmd_hypergraphon_validate,
            help="validate a hypergraphon spec file")
    p.add_argument("--hypergraphon", required=True)
    p.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--l", type=int, help="also report minimum (positive) degrees")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract reserves 2 for
        # budget exhaustion, so usage problems map to 1
        return 1 if exc.code not in (0, None) else 0
    cache_dir = os.environ.get(CACHE_ENV)
    if cache_dir:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
    try:
        return args.func(args)
    except SizeBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
