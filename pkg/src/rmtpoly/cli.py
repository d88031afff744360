"""Command-line front end.

Every subcommand writes a table (CSV with '#' metadata lines, or JSON) to
stdout or --output. Exit codes: 0 success, 1 validation or numeric failure,
2 usage error. A JSON file given with --config supplies flag values; flags on
the command line override it. RMT_SEED sets the default seed.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

FORMATS = ("csv", "json")


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.12g}"


def _json_value(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer, str)) and not isinstance(v, bool):
        return v if isinstance(v, str) else int(v)
    return float(f"{float(v):.12g}")


def render(meta: dict, columns: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        doc = {"meta": meta, "columns": columns, "rows": [[_json_value(v) for v in r] for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    out = io.StringIO()
    for key, value in meta.items():
        out.write(f"# {key}: {value}\n")
    out.write(",".join(columns) + "\n")
    for r in rows:
        out.write(",".join(_fmt(v) for v in r) + "\n")
    return out.getvalue()


def _emit(args, meta, columns, rows):
    text = render(meta, columns, rows, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_profile(args):
    from .source import SourceProfile

    if getattr(args, "source", None):
        with open(args.source, encoding="utf-8") as fh:
            return SourceProfile.from_json(fh.read())
    if getattr(args, "a", None) is not None:
        return SourceProfile.two_atom(args.a)
    return None


# ----------------------------------------------------------- subcommands


def cmd_density(args):
    from .ensembles import EnsembleSpec, empirical_density, sample_spectra
    from .source import SourceProfile, pastur_density, pastur_weight_scale

    profile = _load_profile(args)
    if profile is None:
        spec = EnsembleSpec(args.beta, args.n, args.weight_scale)
        radius = spec.semicircle_radius()
        half = args.range or 1.1 * radius

        def analytic(x):
            return np.where(np.abs(x) < radius, 2 / (math.pi * radius ** 2) * np.sqrt(np.clip(radius ** 2 - x * x, 0, None)), 0.0)

        law = f"semicircle radius {radius:.12g}"
    else:
        c = pastur_weight_scale(args.beta)
        spec = EnsembleSpec(args.beta, args.n, c, SourceProfile(tuple((a * c, w) for a, w in profile.atoms)))
        half = args.range or float(np.max(np.abs(profile.locations))) + 2.6

        def analytic(x):
            return pastur_density(profile, x, 1e-6)

        law = f"pastur source {profile.to_json()}"
    eigs = sample_spectra(spec, args.samples, args.seed, args.workers)
    x, dens = empirical_density(eigs, args.bins, (-half, half), beta=args.beta)
    exact = analytic(x)
    meta = {
        "command": "density",
        "beta": args.beta,
        "n": args.n,
        "weight_scale": spec.weight_scale,
        "samples": args.samples,
        "seed": args.seed,
        "analytic": law,
    }
    _emit(args, meta, ["lambda", "mc_density", "analytic"], [[a, b, c] for a, b, c in zip(x, dens, exact)])


def cmd_ratio(args):
    from .ensembles import EnsembleSpec, mc_ratio
    from .exactfn import goe_ratio_quadrature, gue_ratio

    mu = complex(args.mu, args.eps)
    spec = EnsembleSpec(args.beta, args.n)
    est = mc_ratio(spec, args.lam, mu, args.samples, args.seed, args.workers)
    exact = None
    if args.beta == 2:
        exact = gue_ratio(args.lam, mu, args.n)
    elif args.beta == 1 and args.n % 2 == 0:
        exact = goe_ratio_quadrature(args.lam, mu, args.n)
    row = [args.lam, args.mu, args.eps, est.mean.real, est.mean.imag, est.std_error_re, est.std_error_im]
    cols = ["lambda", "mu", "eps", "mc_re", "mc_im", "se_re", "se_im"]
    if exact is not None:
        row += [exact.real, exact.imag]
        cols += ["exact_re", "exact_im"]
    meta = {"command": "ratio", "beta": args.beta, "n": args.n, "samples": args.samples, "seed": args.seed}
    _emit(args, meta, cols, [row])


def cmd_hiz_series(args):
    from .hiz import HizParams, series_by_recursion, series_closed_form

    params = HizParams(Fraction(args.beta), args.k)
    build = series_closed_form if args.method == "closed" else series_by_recursion
    series = build(params, args.order)
    meta = {
        "command": "hiz-series",
        "beta": params.beta,
        "k": args.k,
        "gamma": params.gamma,
        "method": args.method,
        "terminated": series.terminated,
    }
    _emit(args, meta, ["p", "c_p"], [[p, c] for p, c in enumerate(series.coefficients)])


def cmd_kernel(args):
    from . import kernels

    xs = np.linspace(args.xmin, args.xmax, args.points)
    kind = args.kind
    if kind in ("airy", "airy-edge"):
        fn = kernels.airy_kernel if kind == "airy" else kernels.airy_edge_f
        y = args.y
        vals = [fn(x, x if y is None else y) for x in xs]
    elif kind == "f2":
        if args.xmin <= 0:
            raise UsageError("--xmin must be positive for f2")
        vals = [kernels.f2_general_beta(x, args.beta) for x in xs]
    else:
        fn = {"sine": kernels.sine_kernel, "gue": kernels.rho2_gue, "goe": kernels.rho2_goe, "gse": kernels.rho2_gse}[kind]
        vals = [fn(x) for x in xs]
    meta = {"command": "kernel", "kind": kind, "convention": "x = pi N rho (l1 - l2)" if kind not in ("airy", "airy-edge") else "edge variables"}
    if kind == "f2":
        meta["beta"] = args.beta
    if kind in ("airy", "airy-edge"):
        meta["second_argument"] = "diagonal" if args.y is None else args.y
    _emit(args, meta, ["x", "value"], [[x, v] for x, v in zip(xs, vals)])


def cmd_spacing(args):
    from .spacing import spacing_curve, spacing_density

    n = int(round(args.smax / args.ds))
    if n < 4:
        raise UsageError("--smax / --ds must give at least 5 grid points")
    grid = np.linspace(0.0, n * args.ds, n + 1)
    curve = spacing_curve(args.ensemble, grid, route=args.route, convention=args.convention, order=args.order)
    p = spacing_density(curve)
    meta = {"command": "spacing", "ensemble": args.ensemble, "route": args.route, "convention": args.convention}
    _emit(args, meta, ["s", "E", "p"], [[s, e, q] for s, e, q in zip(grid, curve.e_values, p)])


def cmd_pastur(args):
    from .source import SourceProfile, pastur_density

    profile = _load_profile(args) or SourceProfile.zero()
    xs = np.linspace(args.lmin, args.lmax, args.points)
    rho = pastur_density(profile, xs, args.epsilon)
    meta = {"command": "pastur", "source": profile.to_json(), "epsilon": args.epsilon}
    _emit(args, meta, ["lambda", "rho"], [[x, r] for x, r in zip(xs, rho)])


def cmd_validate(args):
    from .acceptance import run_all

    only = None
    if args.only:
        try:
            only = {int(t) for t in args.only.split(",")}
        except ValueError:
            raise UsageError(f"--only expects comma-separated criterion numbers, got {args.only!r}")
    results = run_all(only, echo=lambda line: print(line, flush=True))
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


# --------------------------------------------------------------- parser


def _default_seed() -> int:
    raw = os.environ.get("RMT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RMT_SEED must be an integer, got {raw!r}")


def build_parser(seed_default: int = 0) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmtpoly", description="Random-matrix characteristic polynomials and spectral statistics.")
    parser.add_argument("--config", help="JSON file of flag values")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, seeded=False):
        p.add_argument("--output", "-o", help="write to this file instead of stdout")
        p.add_argument("--format", choices=FORMATS, default="csv")
        if seeded:
            p.add_argument("--seed", type=int, default=seed_default)
            p.add_argument("--workers", type=int, default=1)

    def ensemble(p):
        p.add_argument("--beta", type=int, choices=(1, 2, 4), default=2)
        p.add_argument("--n", type=int, default=100)

    p = sub.add_parser("density", help="MC eigenvalue histogram with the analytic density")
    ensemble(p)
    common(p, seeded=True)
    p.add_argument("--weight-scale", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--range", type=float, help="histogram half-width")
    p.add_argument("--source", help="JSON source profile {atoms: [{a, w}]}")
    p.add_argument("--a", type=float, help="two-atom source +-a")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("ratio", help="<det(lam - X)/det(mu - X)> by MC and exactly")
    ensemble(p)
    common(p, seeded=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.1, help="Im mu")
    p.add_argument("--samples", type=int, default=10000)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("hiz-series", help="exact heat-kernel series coefficients")
    common(p)
    p.add_argument("--beta", type=Fraction, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--method", choices=("recursion", "closed"), default="recursion")
    p.set_defaults(func=cmd_hiz_series)

    p = sub.add_parser("kernel", help="bulk and edge correlation curves")
    common(p)
    p.add_argument("--kind", choices=("sine", "gue", "goe", "gse", "f2", "airy", "airy-edge"), required=True)
    p.add_argument("--xmin", type=float, default=0.0)
    p.add_argument("--xmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--beta", type=float, default=1.0, help="for f2")
    p.add_argument("--y", type=float, help="second Airy argument (default: diagonal)")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("spacing", help="gap probability E(s) and spacing density p(s)")
    common(p)
    p.add_argument("--ensemble", choices=("gue", "goe", "gse"), default="gue")
    p.add_argument("--route", choices=("ode", "hamiltonian", "nystrom"), default="ode")
    p.add_argument("--convention", choices=("unit", "piless"), default="unit")
    p.add_argument("--smax", type=float, default=3.0)
    p.add_argument("--ds", type=float, default=0.01)
    p.add_argument("--order", type=int, default=40, help="Nystrom order")
    p.set_defaults(func=cmd_spacing)

    p = sub.add_parser("pastur", help="density of states with a deterministic source")
    common(p)
    p.add_argument("--source", help="JSON source profile {atoms: [{a, w}]}")
    p.add_argument("--a", type=float, help="two-atom source +-a")
    p.add_argument("--lmin", type=float, default=-3.0)
    p.add_argument("--lmax", type=float, default=3.0)
    p.add_argument("--points", type=int, default=121)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.set_defaults(func=cmd_pastur)

    p = sub.add_parser("validate", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_validate)
    return parser


def _config_argv(argv: list[str]) -> list[str]:
    """Expand --config into flags placed before the explicit ones."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        with open(known.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--config: {exc}")
    if not isinstance(cfg, dict):
        raise UsageError("--config: expected a JSON object")
    subcommand = cfg.pop("subcommand", None)
    if rest and not rest[0].startswith("-"):
        subcommand, rest = rest[0], rest[1:]
    if subcommand is None:
        raise UsageError("--config: no subcommand given")
    flags = []
    for key, value in cfg.items():
        flags += [f"--{key.replace('_', '-')}", str(value)]
    return [subcommand, *flags, *rest]


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser(_default_seed())
        args = parser.parse_args(_config_argv(argv))
        if args.subcommand == "spacing" and args.route == "ode":
            args.route = "hamiltonian"
        for name in ("n", "samples", "points", "bins", "workers"):
            if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
                raise UsageError(f"--{name} must be positive")
        code = args.func(args)
        return 0 if code is None else int(code)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0) if isinstance(exc.code, int) else 2
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error ({type(exc).__module__}.{type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error ({type(exc).__module__}.{type(exc).__name__}): {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
