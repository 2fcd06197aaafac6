"""Command-line front end.

Subcommands:
  compare   -- compute scheme curves for a problem file, emit CSVs + gnuplot script
  validate  -- run a named property suite, nonzero exit on failure
  point     -- evaluate a single scheme at explicit parameters, print JSON

Exit codes: 0 success, 1 validation failure, 2 usage error.
CSV files carry "# key=value" comment headers and "D1,D2" data rows; output is
byte-identical across runs for identical manifests and seeds.  The environment
variable WZBC_THREADS caps worker threads for Monte Carlo batches.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import binary as bn
from . import gaussian as gs
from .core import (
    BinaryProblem,
    GaussianProblem,
    InvalidProblem,
    TradeoffCurve,
    load_problem,
    parse_kappa,
    validate_problem,
)
from .dmc import binary_superposition_inputs, lds_rate_triple, scheme1_rate_triple
from .infotheory import binary_convolution, wz_rate_kernel
from .mcsim import SimConfig, simulate_uncoded_binary, simulate_uncoded_gaussian
from .optimize import lower_envelope_indices

GAUSSIAN_SCHEMES = ("converse", "uncoded", "cds", "lds", "separate", "scheme3")
BINARY_SCHEMES = ("converse", "uncoded", "cds", "lds", "separate")
VALIDATE_SUITES = (
    "gaussian-oracle",
    "gaussian-ordering",
    "binary-oracle",
    "dmc-consistency",
    "mc-uncoded",
)


class UsageError(Exception):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("WZBC_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path, scheme, params, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# scheme={scheme}, params={params}\n")
        fh.write("# columns=D1,D2\n")
        for d1, d2 in rows:
            fh.write(f"{_fmt(d1)},{_fmt(d2)}\n")


def _curve_rows(curve: TradeoffCurve):
    return [(p.D[0], p.D[1]) for p in curve.points]


def _gaussian_curve(problem, scheme, resolution, extend_flat):
    """Rows of (D1, D2) for one scheme; raises UsageError on capability gaps."""
    P = problem.power
    if scheme == "converse":
        return [gaussian_trivial_point(problem)]
    if scheme == "uncoded":
        return [tuple(gs.gaussian_uncoded(problem).D)]
    if scheme == "cds":
        return [tuple(gs.gaussian_cds(problem).D)]
    assign = gs.choose_refinement_receiver(problem)
    if scheme == "lds":
        if problem.kappa == 1:
            dmin, dmax = gs.gaussian_lds_dc_range(problem, assign)
            top = problem.sideinfo_vars[assign.c] if extend_flat else dmax
            rows = []
            for d_c in np.linspace(dmin, top, resolution):
                d_r = gs.gaussian_lds_closed_form(problem, assign, d_c, extend_flat)
                rows.append(_to_receiver_order(assign, d_c, d_r))
            return sorted(rows)
        cloud = gs.lds_parametric_cloud(problem, assign, resolution, resolution)
        x, y = _cloud_receiver_xy(assign, cloud)
        keep = lower_envelope_indices(x, y)
        return [(x[i], y[i]) for i in keep]
    if scheme == "scheme3":
        if problem.kappa == 1:
            lo = problem.sideinfo_vars[assign.c] * problem.noise_vars[assign.c] / (
                P + problem.noise_vars[assign.c]
            )
            hi = problem.sideinfo_vars[assign.c]
            rows = [
                _to_receiver_order(
                    assign, d_c, gs.gaussian_scheme3_closed_form(problem, assign, d_c)
                )
                for d_c in np.linspace(lo, hi, resolution)
            ]
            return sorted(rows)
        rows = []
        for nu in np.linspace(0.0, 1.0, resolution):
            rates = gs.gaussian_scheme3_rates(problem, assign, nu)
            pt = gs.gaussian_lds_distortions(problem, assign, rates)
            rows.append((pt.D[0], pt.D[1]))
        return sorted(rows)
    if scheme == "separate":
        sweep = gs.gaussian_separate_sweep(problem, resolution)
        b, g = gs.separate_coding_labels(problem)
        rows = [
            (db, dg) if b == 0 else (dg, db) for db, dg in zip(sweep["d_b"], sweep["d_g"])
        ]
        return sorted(rows)
    raise UsageError(f"unknown scheme {scheme!r}")


def gaussian_trivial_point(problem):
    return tuple(gs.gaussian_trivial_converse(problem))


def _to_receiver_order(assign, d_c, d_r):
    return (d_c, d_r) if assign.c == 0 else (d_r, d_c)


def _cloud_receiver_xy(assign, cloud):
    if assign.c == 0:
        return cloud["d_c"], cloud["d_r"]
    return cloud["d_r"], cloud["d_c"]


def _binary_curve(problem, scheme, resolution):
    if scheme == "converse":
        return [bn.binary_trivial_converse(problem)]
    if scheme == "uncoded":
        return [tuple(bn.binary_uncoded(problem).D)]
    if scheme == "cds":
        return _curve_rows(bn.binary_cds_region(problem, resolution))
    if scheme == "lds":
        return _curve_rows(bn.binary_lds_region(problem, resolution))
    if scheme == "separate":
        return _curve_rows(bn.binary_separate_region(problem, resolution))
    if scheme in GAUSSIAN_SCHEMES:
        raise UsageError(f"gaussian-only scheme: {scheme!r}")
    raise UsageError(f"unknown scheme {scheme!r}")


def _emit_plot_script(out_dir, csvs):
    lines = [
        "set datafile separator ','",
        "set xlabel 'D1'",
        "set ylabel 'D2'",
        "set key top right",
        "set term pngcairo size 900,700",
        "set output 'tradeoff.png'",
    ]
    parts = []
    for scheme, fname in csvs:
        style = "points pt 7 ps 1.5" if scheme in ("converse", "uncoded", "cds") else "linespoints"
        parts.append(f"'{fname}' using 1:2 with {style} title '{scheme}'")
    lines.append("plot \\\n  " + ", \\\n  ".join(parts))
    path = os.path.join(out_dir, "plot.gp")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def cmd_compare(args) -> int:
    problem = load_problem(args.problem)
    if problem.receivers != 2:
        raise UsageError(
            f"compare requires exactly 2 receivers, problem has {problem.receivers}"
        )
    if args.kappa_override is not None:
        kappa = parse_kappa(args.kappa_override)
        if isinstance(problem, GaussianProblem):
            problem = GaussianProblem(problem.power, problem.noise_vars,
                                      problem.sideinfo_vars, kappa)
        else:
            problem = BinaryProblem(problem.crossovers, problem.sideinfo_crossovers, kappa)
        validate_problem(problem)
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    if not schemes:
        raise UsageError("empty scheme list")
    known = GAUSSIAN_SCHEMES if isinstance(problem, GaussianProblem) else BINARY_SCHEMES
    for s in schemes:
        if s not in known:
            if isinstance(problem, BinaryProblem) and s.split("-")[0] in GAUSSIAN_SCHEMES:
                raise UsageError(f"gaussian-only scheme: {s!r}")
            raise UsageError(f"unknown scheme {s!r}; known: {', '.join(known)}")
    if "converse" not in schemes:
        schemes.insert(0, "converse")  # converse bounds are always emitted
    os.makedirs(args.out, exist_ok=True)
    manifest = f"problem={os.path.basename(args.problem)};kappa={problem.kappa};" \
               f"resolution={args.resolution};seed={args.seed}"
    csvs = []
    failures = []
    for scheme in schemes:
        try:
            if isinstance(problem, GaussianProblem):
                rows = _gaussian_curve(problem, scheme, args.resolution, args.extend_flat)
            else:
                rows = _binary_curve(problem, scheme, args.resolution)
        except (ValueError, UsageError) as exc:
            failures.append((scheme, str(exc)))
            print(f"scheme {scheme} skipped: {exc}", file=sys.stderr)
            continue
        fname = f"{scheme}.csv"
        _write_csv(os.path.join(args.out, fname), scheme, manifest, rows)
        csvs.append((scheme, fname))
    if not csvs:
        raise UsageError("no scheme produced output")
    script = _emit_plot_script(args.out, csvs)
    print(f"wrote {len(csvs)} CSV file(s) and {script} to {args.out}")
    return 0


def _report(name, ok, detail) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def _suite_gaussian_oracle(tol, seed):
    """Parametric sweep envelope vs the bandwidth-matched closed form."""
    rng = np.random.default_rng(seed)
    instances = [
        (1.0, (1.0, 0.5), (0.8, 0.4)),
        (1.0, (2.0, 0.5), (0.3, 0.9)),
        (
            float(rng.uniform(0.5, 4)),
            tuple(rng.uniform(0.25, 4, 2)),
            tuple(rng.uniform(0.1, 1, 2)),
        ),
    ]
    worst = 0.0
    for P, W, N in instances:
        problem = GaussianProblem(P, W, N, Fraction(1))
        assign = gs.choose_refinement_receiver(problem)
        cloud = gs.lds_parametric_cloud(problem, assign, 400, 400)
        keep = lower_envelope_indices(cloud["d_c"], cloud["d_r"])
        dmin, dmax = gs.gaussian_lds_dc_range(problem, assign)
        samples = np.linspace(dmin, dmax, 50)
        env = np.interp(samples, cloud["d_c"][keep], cloud["d_r"][keep])
        closed = np.array(
            [gs.gaussian_lds_closed_form(problem, assign, d) for d in samples]
        )
        worst = max(worst, float(np.max(np.abs(env - closed))))
    return _report("gaussian-oracle", worst < tol, f"max deviation {worst:.3e} (tol {tol:g})")


def _suite_gaussian_ordering(tol, seed):
    """Layered <= separate and layered <= reversed-decoding closed forms."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(8):
        P = float(rng.uniform(0.5, 4))
        W = tuple(rng.uniform(0.25, 4, 2))
        N = tuple(rng.uniform(0.1, 1, 2))
        problem = GaussianProblem(P, W, N, Fraction(1))
        assign = gs.choose_refinement_receiver(problem)
        dmin, dmax = gs.gaussian_lds_dc_range(problem, assign)
        for d_c in np.linspace(dmin, dmax, 64):
            lds = gs.gaussian_lds_closed_form(problem, assign, d_c)
            worst = max(worst, lds - gs.gaussian_scheme3_closed_form(problem, assign, d_c))
            b, _ = gs.separate_coding_labels(problem)
            if b == assign.c:
                worst = max(worst, lds - gs.gaussian_separate_closed_form(problem, d_c))
    return _report("gaussian-ordering", worst <= tol, f"max violation {worst:.3e} (tol {tol:g})")


def _suite_binary_oracle(tol, seed):
    """Point-to-point value vs 2-D brute force and the pinned sub-grid equality."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        beta = float(rng.uniform(0.05, 0.5))
        rate = float(rng.uniform(0.0, 1.0))
        qs = np.linspace(0.0, 1.0, 800)
        alphas = np.linspace(0.0, beta, 800)
        r = wz_rate_kernel(alphas, beta)
        feas = np.outer(qs, r) <= rate
        d = qs[:, None] * alphas[None, :] + (1.0 - qs[:, None]) * beta
        brute = float(d[feas].min())
        val = bn.binary_wz_distortion(beta, rate, 800)
        worst = max(worst, abs(brute - val))
    problem = BinaryProblem((0.05, 0.1), (0.2, 0.1), Fraction(1))
    a = bn.binary_cds_points(problem, 21)
    b = bn.binary_lds_cds_pinned_points(problem, 21)
    same = sorted(zip(*(v.tolist() for v in a))) == sorted(zip(*(v.tolist() for v in b)))
    ok = worst < tol and same
    return _report(
        "binary-oracle", ok, f"max deviation {worst:.3e} (tol {tol:g}); sub-grid equality {same}"
    )


def _suite_dmc_consistency(tol, seed):
    """Generic engine vs the binary closed forms on random parameters."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        p_c, p_r, g_c, g_r = rng.uniform(0.01, 0.49, 4)
        eng = lds_rate_triple(binary_superposition_inputs(p_c, p_r, 0.5, g_r, "uc"))
        closed = bn.binary_lds_channel_rates(
            p_c, p_r, bn.BinaryChannelParams(0.5, g_r, bn.TChoice.T_EQUALS_UC), 1
        )
        worst = max(
            worst, *(abs(x - y) for x, y in zip(eng.as_tuple(), closed.as_tuple()))
        )
        eng2 = lds_rate_triple(binary_superposition_inputs(p_c, p_r, g_c, g_r, "xor"))
        shared = wz_rate_kernel(g_c, g_r)
        g = min(binary_convolution(g_c, g_r), 0.5)
        raw = (
            wz_rate_kernel(p_c, g) - shared,
            wz_rate_kernel(p_r, g) - shared,
            shared,
        )
        worst = max(worst, *(abs(x - y) for x, y in zip(eng2.as_tuple(), raw)))
        inputs = binary_superposition_inputs(p_c, p_r, g_c, g_r, "uc")
        s1 = scheme1_rate_triple(inputs)
        l1 = lds_rate_triple(inputs)
        worst = max(worst, *(abs(x - y) for x, y in zip(s1.as_tuple(), l1.as_tuple())))
    return _report("dmc-consistency", worst < tol, f"max deviation {worst:.3e} (tol {tol:g})")


def _suite_mc_uncoded(n_stderr, seed):
    """Monte Carlo empirical distortions vs the uncoded closed forms."""
    threads = _threads()
    cfg = SimConfig(samples=10**6, seed=seed)
    pg = GaussianProblem(1.0, (1.0, 0.5), (0.8, 0.4), Fraction(1))
    target = tuple(gs.gaussian_uncoded(pg).D)
    est = simulate_uncoded_gaussian(pg, cfg, threads)
    ok_g = est.within(target, n_stderr)
    pb = BinaryProblem((0.05, 0.1), (0.2, 0.1), Fraction(1))
    estb = simulate_uncoded_binary(pb, cfg, threads)
    ok_b = estb.within(tuple(bn.binary_uncoded(pb).D), n_stderr)
    detail = (
        f"gaussian {tuple(round(m, 5) for m in est.mean)} vs {tuple(round(t, 5) for t in target)}, "
        f"binary {tuple(round(m, 5) for m in estb.mean)} (threshold {n_stderr:g} stderr)"
    )
    return _report("mc-uncoded", ok_g and ok_b, detail)


def cmd_validate(args) -> int:
    tolerances = {}
    for item in args.tolerance or []:
        if "=" not in item:
            raise UsageError(f"tolerance override must be NAME=VALUE, got {item!r}")
        key, _, val = item.partition("=")
        tolerances[key] = float(val)
    suite = args.suite
    if suite not in VALIDATE_SUITES:
        raise UsageError(f"unknown suite {suite!r}; known: {', '.join(VALIDATE_SUITES)}")
    if suite == "gaussian-oracle":
        ok = _suite_gaussian_oracle(tolerances.get("max-dev", 1e-4), args.seed)
    elif suite == "gaussian-ordering":
        ok = _suite_gaussian_ordering(tolerances.get("max-dev", 1e-10), args.seed)
    elif suite == "binary-oracle":
        ok = _suite_binary_oracle(tolerances.get("max-dev", 1e-3), args.seed)
    elif suite == "dmc-consistency":
        ok = _suite_dmc_consistency(tolerances.get("max-dev", 1e-9), args.seed)
    else:
        ok = _suite_mc_uncoded(tolerances.get("n-stderr", 4.0), args.seed)
    return 0 if ok else 1


def _parse_params(items):
    params = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameter must be NAME=VALUE, got {item!r}")
        key, _, val = item.partition("=")
        if key == "t":
            params[key] = val
        else:
            params[key] = float(val)
    return params


def cmd_point(args) -> int:
    problem = load_problem(args.problem)
    params = _parse_params(args.param)
    scheme = args.scheme
    flags = []
    if isinstance(problem, GaussianProblem):
        if scheme == "uncoded":
            point = gs.gaussian_uncoded(problem)
        elif scheme == "cds":
            point = gs.gaussian_cds(problem)
        elif scheme == "lds":
            if "nu" not in params:
                raise UsageError("lds point requires nu=<value> (and optional gamma=<value>)")
            assign = gs.choose_refinement_receiver(problem)
            lds_params = gs.GaussianLdsParams(params["nu"], params.get("gamma", 0.0))
            rates = gs.gaussian_lds_channel_rates(problem, assign, lds_params)
            if rates.clamped:
                flags.append("rate-clamped")
            point = gs.gaussian_lds_distortions(problem, assign, rates)
        else:
            raise UsageError(f"unknown gaussian point scheme {scheme!r}")
    else:
        if scheme == "uncoded":
            point = bn.binary_uncoded(problem)
        elif scheme == "lds":
            needed = ("q_c", "q_r", "alpha_c", "alpha_r", "gamma_r")
            if not all(k in params for k in needed):
                raise UsageError(f"binary lds point requires {', '.join(needed)} (and t=uc|xor)")
            t_choice = (
                bn.TChoice.T_EQUALS_UC if params.get("t", "uc") == "uc"
                else bn.TChoice.T_EQUALS_UC_XOR_UR
            )
            src = bn.BinarySourceParams(
                params["q_c"], params["q_r"], params["alpha_c"], params["alpha_r"]
            )
            ch = bn.BinaryChannelParams(params.get("gamma_c", 0.5), params["gamma_r"], t_choice)
            beta_c, beta_r = problem.sideinfo_crossovers
            p_c, p_r = problem.crossovers
            source = bn.binary_lds_source_rates(src, beta_c, beta_r)
            channel = bn.binary_lds_channel_rates(p_c, p_r, ch, problem.kappa)
            if channel.clamped:
                flags.append("rate-clamped")
            feasible = all(
                s <= c + 1e-12 for s, c in zip(source.as_tuple(), channel.as_tuple())
            )
            if not feasible:
                raise UsageError(
                    f"source rates {source.as_tuple()} exceed channel rates {channel.as_tuple()}"
                )
            d1 = bn.layer_distortion(src.q_c, src.alpha_c, beta_c)
            d2 = bn.layer_distortion(src.q_r, src.alpha_r, beta_r)
            point = bn.DistortionPoint(D=(d1, d2), scheme="lds", params=params)
        else:
            raise UsageError(f"unknown binary point scheme {scheme!r}")
    print(
        json.dumps(
            {
                "scheme": point.scheme,
                "D1": point.D[0],
                "D2": point.D[1],
                "params": params,
                "flags": flags,
            },
            sort_keys=True,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wzbc",
        description="Distortion tradeoff regions for lossy broadcast with receiver "
        "side information",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compare = sub.add_parser("compare", help="compute scheme curves, emit CSVs + plot script")
    p_compare.add_argument("--problem", required=True, help="problem JSON file")
    p_compare.add_argument("--schemes", required=True,
                           help="comma-separated scheme list")
    p_compare.add_argument("--resolution", type=int, default=41,
                           help="grid points per axis (default 41)")
    p_compare.add_argument("--out", required=True, help="output directory")
    p_compare.add_argument("--seed", type=int, default=0)
    p_compare.add_argument("--kappa-override", default=None,
                           help='replace the problem kappa (e.g. "1/2")')
    p_compare.add_argument("--extend-flat", action="store_true",
                           help="continue the layered closed-form curve flat beyond its "
                                "natural right endpoint")
    p_compare.set_defaults(func=cmd_compare)

    p_val = sub.add_parser("validate", help="run a named property suite")
    p_val.add_argument("--suite", required=True, help=", ".join(VALIDATE_SUITES))
    p_val.add_argument("--seed", type=int, default=42)
    p_val.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                       help="override a named tolerance (repeatable)")
    p_val.set_defaults(func=cmd_validate)

    p_point = sub.add_parser("point", help="evaluate one scheme at explicit parameters")
    p_point.add_argument("--problem", required=True)
    p_point.add_argument("--scheme", required=True)
    p_point.add_argument("--param", action="append", metavar="NAME=VALUE",
                         help="scheme parameter (repeatable)")
    p_point.set_defaults(func=cmd_point)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidProblem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
