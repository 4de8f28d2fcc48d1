"""Command-line entry point.

    insider-perc sweep --trials 100 --n-max 1000 --l-min 0.01 --seed 1 --out sweep.csv --figures
    insider-perc exact --n 100 --l-min 0.01
    insider-perc classify --n 500 --l-min 0.01 --format json
    insider-perc lattice-threshold --geometry square-2d triangular-2d --trials 200
    insider-perc spacing-cdf --n 100 --trials 10000

Exit codes: 0 success, 2 invalid config, 3 numerical divergence, 4 I/O.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analytic, report
from .config import SCHEMAS, RunConfig
from .errors import ConvergenceError, DivergenceError, DomainError, UnsupportedGeometryError, ValidationError
from .lattice import LatticeGeometry, critical_points, estimate_threshold
from .montecarlo import SimulationConfig, run_sweep, spacing_distribution
from .regime import DEFAULT_CUTOFFS, classify

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGENCE, EXIT_IO = 0, 2, 3, 4


class _IOFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, formats=("csv", "json"), default="csv"):
    p.add_argument("--config", type=Path, help="key = value file supplying defaults for this command")
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--figures", action="store_true", help="also write PNG figures next to --out")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = one per CPU")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="insider-perc", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    p = subs["sweep"] = sub.add_parser("sweep", help="trial-averaged latitude sweep over N = 1..n_max")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-max", dest="n_max", type=int, default=1000)
    p.add_argument("--l-min", dest="l_min", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--independent", dest="incremental", action="store_false",
                   help="fresh boundaries for every N instead of reusing the first N")
    _common(p)

    for name, help_ in (("exact", "closed-form latitudes for one (N, l_min)"),
                        ("classify", "regime of an environment with N rules")):
        p = subs[name] = sub.add_parser(name, help=help_)
        p.add_argument("--n", type=int, required=False, default=None)
        p.add_argument("--l-min", dest="l_min", type=float, default=0.01)
        p.add_argument("--cutoffs", type=float, nargs=3, default=DEFAULT_CUTOFFS, metavar=("LOW", "MID", "HIGH"),
                       help="N/N_min cut points between regimes")
        _common(p, ("text", "csv", "json"), "text")

    p = subs["lattice-threshold"] = sub.add_parser("lattice-threshold", help="site percolation threshold estimates")
    p.add_argument("--geometry", nargs="+", default=["square-2d"],
                   help="linear-1d, square-2d, triangular-2d, honeycomb-2d, simple-cubic-3d, hypercubic-Dd, bethe")
    p.add_argument("--size", type=int, default=None, help="side length / site count / Bethe generations")
    p.add_argument("--z", type=int, default=3, help="Bethe coordination number")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--method", choices=("newman-ziff", "direct"), default="newman-ziff")
    _common(p)

    p = subs["spacing-cdf"] = sub.add_parser("spacing-cdf", help="pooled gap-width CDF against 1 - exp(-(N+1)L)")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--points", type=int, default=200)
    _common(p)

    parser._subs = subs
    return parser


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        try:
            cfg = RunConfig.load(args.config)
        except OSError as exc:
            raise _IOFailure(str(exc)) from exc
        if cfg.command != args.command:
            raise ValidationError(f"config is for '{cfg.command}', not '{args.command}'")
        defaults = dict(cfg.params)
        if "geometry" in defaults:
            defaults["geometry"] = list(defaults["geometry"])
        parser._subs[args.command].set_defaults(**defaults)
        args = parser.parse_args(argv)
    if args.figures and args.out is None:
        parser.error("--figures needs --out")
    return args


def _run_config(args) -> RunConfig:
    params = {k: getattr(args, k) for k in SCHEMAS[args.command]}
    for k in ("cutoffs", "geometry"):
        if k in params:
            params[k] = tuple(params[k])
    return RunConfig(args.command, params)


def _header(cfg: RunConfig) -> list:
    return [f"insider-perc {cfg.command}"] + cfg.lines()


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, newline="\n")
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc


def _figure_path(out: Path, name: str) -> Path:
    return out.with_name(f"{out.stem}_{name}.png")


def _plot(fn, *a, **kw):
    from . import plotting

    try:
        return getattr(plotting, fn)(*a, **kw)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc


def cmd_sweep(args):
    cfg = _run_config(args)
    sim = SimulationConfig(args.trials, args.n_max, args.l_min, args.seed, args.incremental)
    result = run_sweep(sim, threads=args.threads)
    if args.format == "csv":
        cols, rows = report.sweep_table(result)
        _emit(report.to_csv(_header(cfg), cols, rows), args.out)
    else:
        _emit(report.to_json(report.sweep_document(result, cfg.as_dict())), args.out)
    if args.figures:
        _plot("plot_latitudes", result, _figure_path(args.out, "latitude"))
        _plot("plot_ratio", result, _figure_path(args.out, "ratio"))


def _require_n(args):
    if args.n is None:
        raise ValidationError("--n is required")


def cmd_exact(args):
    _require_n(args)
    cfg = _run_config(args)
    rep = classify(args.n, args.l_min, args.cutoffs)
    values = {
        "N": args.n,
        "l_min": args.l_min,
        "p_occupation": analytic.occupation_probability(args.n, args.l_min),
        "n_min": analytic.n_min(args.l_min).value,
        "n_threat_expected": analytic.threat_boundary_count_expected(args.n, args.l_min),
        "l_normal": 1.0 / (args.n + 1),
        "l_exact": analytic.exact_threat_latitude(args.n, args.l_min),
        "l_percolation": analytic.percolation_threat_latitude(args.n, args.l_min),
        "regime": rep.regime.value,
    }
    _emit_record(args, cfg, values)
    if args.figures:
        _plot("plot_regimes", args.n, args.l_min, _figure_path(args.out, "regimes"), args.cutoffs)


def cmd_classify(args):
    _require_n(args)
    cfg = _run_config(args)
    rep = classify(args.n, args.l_min, args.cutoffs)
    if args.format == "text":
        _emit(rep.summary() + "\n", args.out)
    else:
        _emit_record(args, cfg, rep.to_dict())
    if args.figures:
        _plot("plot_regimes", args.n, args.l_min, _figure_path(args.out, "regimes"), args.cutoffs)


def _emit_record(args, cfg, values: dict):
    if args.format == "text":
        width = max(map(len, values))
        text = "".join(f"{k:<{width}}  {report.cell(v)}\n" for k, v in values.items())
    elif args.format == "csv":
        text = report.to_csv(_header(cfg), tuple(values), [tuple(values.values())])
    else:
        text = report.to_json({"config": cfg.as_dict(), **values})
    _emit(text, args.out)


def _geometries(args) -> list:
    out = []
    for kind in args.geometry:
        z = args.z if kind == "bethe" else None
        out.append(LatticeGeometry(kind, args.size, z) if args.size is not None else LatticeGeometry.default(kind, z))
    return out


def cmd_lattice(args):
    cfg = _run_config(args)
    geoms = _geometries(args)
    estimates = [
        estimate_threshold(g, trials=args.trials, seed=args.seed, threads=args.threads, method=args.method)
        for g in geoms
    ]
    if args.format == "csv":
        cols, rows = report.threshold_table(estimates)
        _emit(report.to_csv(_header(cfg), cols, rows), args.out)
    else:
        _emit(report.to_json(report.threshold_document(estimates, cfg.as_dict())), args.out)
    if args.figures:
        curves = {
            f"{g.kind} (size {g.size})": (critical_points(g, args.trials, args.seed, args.threads), g.reference_pc)
            for g in geoms
            if g.kind != "bethe"
        }
        _plot("plot_spanning", curves, _figure_path(args.out, "spanning"))


def cmd_spacing(args):
    cfg = _run_config(args)
    hist = spacing_distribution(args.n, args.trials, args.seed)
    ks = hist.ks_exponential()
    if args.format == "csv":
        cols, rows = report.spacing_table(hist, args.points)
        _emit(report.to_csv(_header(cfg) + [f"ks_exponential = {ks!r}"], cols, rows), args.out)
    else:
        cols, rows = report.spacing_table(hist, args.points)
        doc = {"config": cfg.as_dict(), "ks_exponential": ks}
        for i, c in enumerate(cols):
            doc[c] = [r[i] for r in rows]
        _emit(report.to_json(doc), args.out)
    if args.figures:
        _plot("plot_spacing_cdf", hist, _figure_path(args.out, "cdf"))


COMMANDS = {
    "sweep": cmd_sweep,
    "exact": cmd_exact,
    "classify": cmd_classify,
    "lattice-threshold": cmd_lattice,
    "spacing-cdf": cmd_spacing,
}


def main(argv=None) -> int:
    try:
        args = _parse(argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    except (ValidationError, DomainError, UnsupportedGeometryError) as exc:
        print(f"insider-perc: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DivergenceError, ConvergenceError) as exc:
        print(f"insider-perc: numerical divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except _IOFailure as exc:
        print(f"insider-perc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
