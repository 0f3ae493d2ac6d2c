"""Command line front end: every experiment behind one binary.

Outputs are machine-readable (JSON to stdout or --out; CSV where noted) and
byte-identical for a fixed seed regardless of --threads.  Exit codes: 0 on
success, 2 on validation errors, 3 on resource limits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import contraction, dynamics, effdim, ensembles, geometry as geo, ising
from .errors import InvalidArgumentError, ResourceLimitError, UnsupportedError


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _load_geometry(path: str) -> geo.Geometry:
    try:
        with open(path) as fh:
            return geo.Geometry.from_json(fh.read())
    except FileNotFoundError as exc:
        raise InvalidArgumentError(f"geometry file not found: {path}") from exc


def _seed(args) -> int:
    env = os.environ.get("RTN_SEED")
    if env is not None:
        return int(env)
    return args.seed


# -- subcommand implementations -------------------------------------------------


def _cmd_geometry(args) -> int:
    kind = args.kind
    if kind == "rtt":
        g = geo.build_rtt(args.n, args.closed, args.a, args.b, args.d)
    elif kind == "single":
        g = geo.build_single_tensor(args.n, args.a, args.d)
    elif kind == "square-disc":
        g, _ = geo.build_square_disc(args.n, args.a, args.b, args.d)
    elif kind == "square-patch":
        g = geo.build_square_patch(args.n // 4 + 1, args.a, args.b, args.d)
    elif kind == "hyperbolic":
        g = geo.build_hyperbolic_patch(geo.TilingSpec(args.p, args.q, args.layers), args.a, args.b, args.d)
    elif kind == "bh-center":
        g = geo.build_black_hole_center(geo.TilingSpec(args.p, args.q, args.layers), args.a, args.b, args.d)
    else:
        raise InvalidArgumentError(f"unknown geometry kind {kind!r}")
    text = json.dumps(g.to_dict(), sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_partition(args) -> int:
    g = _load_geometry(args.geometry)
    value = ising.partition_exact(g, cap=args.cap)
    payload = {
        "exact_num": value.exact.numerator,
        "exact_den": value.exact.denominator,
        "log_value": value.log_value,
    }
    if args.bounds:
        order = ising.elimination_order(g, args.order)
        pair = ising.bound_recursive(g, order)
        payload["lower"] = float(pair.lower)
        payload["upper"] = float(pair.upper)
    _emit(payload, args.out)
    return 0


def _cmd_effdim(args) -> int:
    g = _load_geometry(args.geometry)
    if args.closed_form:
        report = effdim.inverse_effdim_closed_form(g)
    else:
        report = effdim.inverse_effdim_bound(g)
    payload = {
        "inv_deff_num": report.inv_deff.numerator,
        "inv_deff_den": report.inv_deff.denominator,
        "inv_deff_float": float(report.inv_deff),
        "method": report.method,
        "geometry_summary": report.geometry_summary,
    }
    _emit(payload, args.out)
    return 0


def _cmd_hierarchy(args) -> int:
    lo, hi = args.b_range.split(":")
    rows = effdim.hierarchy_table(args.n, (int(lo), int(hi)))
    lines = ["geometry,b,a,n,inv_deff_num,inv_deff_den,scaled_float"]
    for r in rows:
        lines.append(
            f"{r.geometry_name},{r.b},{r.a},{r.n},"
            f"{r.inv_deff.numerator},{r.inv_deff.denominator},{r.scaled_float!r}"
        )
    text = "\n".join(lines) + "\n"
    out = args.out or "hierarchy.csv"
    with open(out, "w") as fh:
        fh.write(text)
    sys.stdout.write(f"wrote {out} ({len(rows)} rows)\n")
    return 0


def _cmd_mc(args) -> int:
    g = _load_geometry(args.geometry)
    seed = _seed(args)
    if args.what == "norm":
        stats = contraction.mc_norm_stats(
            g, samples=args.samples, seed=seed, ensemble=args.ensemble, threads=args.threads
        )
    elif args.what == "overlap4":
        stats = contraction.mc_overlap4(
            g, samples=args.samples, seed=seed, ensemble=args.ensemble, threads=args.threads
        )
    else:
        raise InvalidArgumentError(f"unknown mc target {args.what!r}")
    payload = stats.to_dict()
    payload["what"] = args.what
    payload["expected_norm"] = float(contraction.expected_norm(g))
    _emit(payload, args.out)
    return 0


def _cmd_moments(args) -> int:
    report = ensembles.verify_moments(
        args.ensemble, args.dim, args.samples, _seed(args), threads=args.threads
    )
    _emit(report.to_dict(), args.out)
    return 0


def _cmd_dynamics(args) -> int:
    g = _load_geometry(args.geometry)
    a_dims = {leg.a for leg in g.external_legs}
    if a_dims != {2}:
        raise InvalidArgumentError("spin-chain dynamics needs physical dimension 2 on every leg")
    n_sites = g.n_legs
    seed = _seed(args)
    model = {"ising-closed": "ising_closed", "ising-open": "ising_open", "random": "dense_random_hermitian"}.get(
        args.hamiltonian
    )
    if model is None:
        raise InvalidArgumentError(f"unknown hamiltonian {args.hamiltonian!r}")
    spec = dynamics.HamiltonianSpec(
        n_sites, model, coupling=args.coupling, field=args.field, disorder_eps=args.disorder, seed=seed
    )
    hmat = dynamics.build_hamiltonian(spec)
    try:
        op, site = args.observable.split(":")
        site_idx = int(site) - 1  # 1-based in the CLI: X:1 is the first site
    except ValueError as exc:
        raise InvalidArgumentError("observable must look like X:1") from exc
    obs = dynamics.pauli_on(op, site_idx, n_sites)
    state = contraction.sample_rtn_state(g, seed=seed).state
    state = state / np.linalg.norm(state)
    result = dynamics.analyze(state, hmat, obs, t_max=args.t_max, n_points=args.points)

    lines = ["t,expval"] + [
        f"{float(t)!r},{float(v)!r}" for t, v in zip(result.time_grid, result.expvals)
    ]
    with open(args.out or "series.csv", "w") as fh:
        fh.write("\n".join(lines) + "\n")

    bound = effdim.inverse_effdim_bound(g).inv_deff
    summary = {
        "time_avg": result.time_avg,
        "time_std": result.time_std,
        "fluct_exact": result.fluct_exact,
        "inv_deff_state": result.inv_deff_state,
        "sqrt_inv_deff_bound": math.sqrt(float(bound)),
        "a_infinity": result.a_infinity,
        "degenerate_gaps": result.degenerate_gaps,
        "seed": seed,
    }
    _emit(summary, args.summary)
    return 0


def _cmd_mincut(args) -> int:
    g = _load_geometry(args.geometry)
    region = [int(x) for x in args.region.split(",") if x != ""]
    result = geo.min_cut(g, region)
    _emit({"cut_weight": result.cut_weight, "cut_edges": list(result.cut_edges)}, args.out)
    return 0


# -- parser ----------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtneq",
        description="Equilibration diagnostics for random tensor network states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (env RTN_SEED overrides)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("geometry", parents=[common], help="build a geometry and write its JSON")
    p.add_argument("--kind", required=True,
                   choices=["rtt", "single", "square-disc", "square-patch", "hyperbolic", "bh-center"])
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--closed", action="store_true")
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--q", type=int, default=4)
    p.add_argument("--layers", type=int, default=1)
    p.set_defaults(func=_cmd_geometry)

    p = sub.add_parser("partition", parents=[common], help="exact Ising partition value")
    p.add_argument("--geometry", required=True)
    p.add_argument("--bounds", action="store_true")
    p.add_argument("--order", default="natural", choices=["natural", "min-degree"])
    p.add_argument("--cap", type=int, default=ising.ENUMERATION_CAP)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("effdim", parents=[common], help="inverse effective dimension report")
    p.add_argument("--geometry", required=True)
    p.add_argument("--closed-form", action="store_true")
    p.set_defaults(func=_cmd_effdim)

    p = sub.add_parser("hierarchy", parents=[common], help="geometry hierarchy sweep CSV")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--b-range", default="2:10")
    p.set_defaults(func=_cmd_hierarchy)

    p = sub.add_parser("mc", parents=[common], help="Monte-Carlo norm/overlap statistics")
    p.add_argument("--geometry", required=True)
    p.add_argument("--what", required=True, choices=["norm", "overlap4"])
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--ensemble", default="cue", choices=["cue", "coe", "cse", "orthogonal"])
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("moments", parents=[common], help="verify circular-ensemble moments")
    p.add_argument("--ensemble", required=True, choices=["cue", "coe", "cse"])
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--samples", type=int, default=100000)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("dynamics", parents=[common], help="time evolution of a sampled state")
    p.add_argument("--geometry", required=True)
    p.add_argument("--hamiltonian", default="ising-closed",
                   choices=["ising-closed", "ising-open", "random"])
    p.add_argument("--observable", default="X:1")
    p.add_argument("--t-max", type=float, default=1000.0)
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--field", type=float, default=1.0)
    p.add_argument("--disorder", type=float, default=0.0)
    p.add_argument("--summary", default=None, help="write the summary JSON here as well")
    p.set_defaults(func=_cmd_dynamics)

    p = sub.add_parser("mincut", parents=[common], help="minimal cut for a boundary region")
    p.add_argument("--geometry", required=True)
    p.add_argument("--region", required=True, help="comma-separated leg indices")
    p.set_defaults(func=_cmd_mincut)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidArgumentError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
