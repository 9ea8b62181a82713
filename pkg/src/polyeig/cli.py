"""Command-line front end.

    polyeig sample --n 2 --deg 2 --samples 5 --seed 7
    polyeig density --n 3 --deg 2.5
    polyeig montecarlo --n 3 --deg 2 --samples 1000 --threads 4
    polyeig figures --out figs/
    polyeig validate --out report.json
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import density as dn
from .density import DistributionParams
from .figures import format_float, write_figures
from .oracle import solve_eigenpairs
from .polyalg import system_from_json, system_to_json
from .randgen import SeededGenerator, sample_eigenvalue, sample_eigenvalue_modulus_sq, sample_weyl_system
from .stats import CampaignAborted, mc_det_identity, mc_eigen_samples, moment_check
from .validation import DEFAULT_SEED, run_validation

log = logging.getLogger("polyeig")

# tail mass left out of the automatic density grid
DENSITY_TAIL = 1e-10


@contextmanager
def _output(path):
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _write_rows(fh, header, rows):
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(format_float(x) for x in row) + "\n")


def _params(args) -> DistributionParams:
    if args.n < 1:
        raise ValueError("--n must be at least 1")
    if args.deg < 1:
        raise ValueError("--deg must be at least 1")
    return DistributionParams(args.n, args.deg)


def _integer_degree(args) -> int:
    if args.deg != int(args.deg):
        raise ValueError(f"{args.command} needs an integer --deg, got {args.deg:g}")
    return int(args.deg)


def _auto_grid_max(params: DistributionParams) -> float:
    r = 2.0 * params.n + 10.0
    while 1.0 - dn.mixture_cdf(params, r) > DENSITY_TAIL:
        r *= 1.5
    return r


def cmd_sample(args) -> int:
    params = _params(args)
    gen = SeededGenerator(args.seed)
    with _output(args.out) as fh:
        if args.modulus_only:
            x = sample_eigenvalue_modulus_sq(params.n, params.d, gen, size=args.samples)
            _write_rows(fh, ["modsq"], ([v] for v in x))
        else:
            z = sample_eigenvalue(params.n, params.d, gen, size=args.samples)
            _write_rows(fh, ["re", "im"], ([v.real, v.imag] for v in z))
    return 0


def cmd_density(args) -> int:
    params = _params(args)
    r_max = args.grid_max
    if args.normalized:
        if r_max is None:
            r_max = float(dn.tau_from_R(params, _auto_grid_max(params)))
        step = args.grid_step or 0.002
        tau = step * np.arange(int(np.ceil(r_max / step)) + 1)
        rows = zip(tau, dn.density_normalized(params, tau))
        header = ["tau", "rho_norm"]
    else:
        if r_max is None:
            r_max = _auto_grid_max(params)
        step = args.grid_step or 0.01
        R = step * np.arange(int(np.ceil(r_max / step)) + 1)
        rows = zip(R, dn.density_radial(params, R))
        header = ["R", "rho"]
    with _output(args.out) as fh:
        _write_rows(fh, header, rows)
    return 0


def cmd_expectation(args) -> int:
    params = _params(args)
    with _output(args.out) as fh:
        _write_rows(
            fh,
            ["n", "d", "classes", "E_modsq"],
            [[params.n, params.d, dn.count_classes(params), dn.expectation_modulus_sq(params)]],
        )
    return 0


def cmd_montecarlo(args) -> int:
    params = _params(args)
    d = _integer_degree(args)
    pick, pooled = mc_eigen_samples(params.n, d, args.samples, SeededGenerator(args.seed), args.threads)
    sample = pooled if args.pooled else pick
    with _output(args.out) as fh:
        _write_rows(fh, ["Rsq"], ([v] for v in sample.values))
    report = moment_check(pick, params, label=f"uniform_pick n={params.n} d={d}")
    if len(pooled) >= 2:
        pooled_report = moment_check(pooled, params, label=f"pooled n={params.n} d={d}")
        report.extra["pooled"] = pooled_report.to_json()
        report.passed = report.passed and pooled_report.passed
    _emit_report(report.to_json(), args.report)
    return 0 if report.passed else 1


def cmd_detcheck(args) -> int:
    t = complex(args.t_re, args.t_im)
    report = mc_det_identity(args.n, t, args.samples, SeededGenerator(args.seed))
    _emit_report(report.to_json(), args.report)
    return 0 if report.passed else 1


def cmd_figures(args) -> int:
    out = args.out or "figures"
    for path in write_figures(out, args.grid_max, args.grid_step):
        print(path)
    return 0


def cmd_validate(args) -> int:
    def progress(res):
        print(res.line(), file=sys.stderr)

    try:
        report = run_validation(args.seed, args.threads, args.checks, fault=args.inject_fault, progress=progress)
    except CampaignAborted as exc:
        print(f"campaign aborted: {exc}", file=sys.stderr)
        return 1
    with _output(args.out) as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return 0 if report["passed"] else 1


def cmd_draw(args) -> int:
    f = sample_weyl_system(args.n, _integer_degree(args), SeededGenerator(args.seed))
    with _output(args.out) as fh:
        json.dump(system_to_json(f, args.basis), fh)
        fh.write("\n")
    return 0


def cmd_solve(args) -> int:
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text(encoding="utf-8")
    f = system_from_json(text)
    classes = solve_eigenpairs(f, rng=SeededGenerator(args.seed).rng)
    with _output(args.out) as fh:
        json.dump(classes.to_json(), fh)
        fh.write("\n")
    return 0 if classes.valid else 1


def _emit_report(obj, path):
    text = json.dumps(obj, indent=2, default=float)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyeig", description="Eigenvalue distribution of random homogeneous polynomial systems.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--n", type=int, required=True)
    model.add_argument("--deg", type=float, required=True)

    p = sub.add_parser("sample", parents=[common, model], help="draw eigenvalues from the theoretical law")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--modulus-only", action="store_true", help="emit |lambda|^2 only")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("density", parents=[common, model], help="tabulate the density of R = 2|lambda|^2")
    p.add_argument("--grid-max", type=float)
    p.add_argument("--grid-step", type=float)
    p.add_argument("--normalized", action="store_true", help="emit tau,rho_norm instead of R,rho")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("expectation", parents=[common, model], help="E|lambda|^2 and the class count")
    p.set_defaults(func=cmd_expectation)

    p = sub.add_parser("montecarlo", parents=[common, model], help="solve random systems and compare with theory")
    p.add_argument("--samples", type=int, default=1000, help="number of random systems")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--pooled", action="store_true", help="emit every class instead of one per system")
    p.add_argument("--report", help="write the JSON report here (default: stderr)")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("detcheck", parents=[common], help="Monte Carlo check of E|det(A + tI)|^2")
    p.add_argument("--n", type=int, required=True, help="matrix size m")
    p.add_argument("--t-re", type=float, default=0.0)
    p.add_argument("--t-im", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--report")
    p.set_defaults(func=cmd_detcheck)

    p = sub.add_parser("figures", parents=[common], help="write the figure tables as CSV")
    p.add_argument("--grid-max", type=float, help="largest tau in the normalized-density tables")
    p.add_argument("--grid-step", type=float)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("validate", parents=[common], help="run the fixed-seed validation suite")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--checks", nargs="+", help="subset of checks to run")
    p.add_argument("--inject-fault", choices=["weight"], help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("draw", parents=[common, model], help="draw one Weyl-distributed system as JSON")
    p.add_argument("--basis", choices=["monomial", "weyl"], default="monomial")
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("solve", parents=[common], help="all eigenpair classes of a system read from JSON")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "samples", 1) is not None and getattr(args, "samples", 1) < 1:
        parser.error("--samples must be positive")
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
