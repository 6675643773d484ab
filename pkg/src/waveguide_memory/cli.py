"""Command-line entry point.

All lengths are given in units of ``1/alpha`` and widths as ``gamma/alpha``::

    waveguide-memory solve --kind lorentzian --gamma 2 --alphaL 10
    waveguide-memory series --kind gaussian --gamma 2 --order 8
    waveguide-memory sweep fig4 --alphaz 0.785398 --format csv,json,svg

Exit status: 0 success, 1 numerical failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .exceptions import ConfigurationError, WaveguideMemoryError
from .kernels import ReservoirKind, ReservoirSpec, kernel_series
from .observables import observe
from .series import amplitude_series, closed_form_coefficients
from .solver import SolverConfig, solve_volterra
from .svg import line_chart
from .sweeps import (
    FIG4_ALPHAZ,
    sweep_blp_vs_gamma,
    sweep_logf_vs_z,
    sweep_transmission_vs_gamma,
    sweep_transmission_vs_z,
)

FORMATS = ("csv", "json", "svg")
SERIES_TOLERANCE = 1e-12


class UsageError(Exception):
    pass


def _formats(text):
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        if part not in FORMATS:
            raise argparse.ArgumentTypeError(f"unknown format {part!r}; choose from {', '.join(FORMATS)}")
        out.append(part)
    return out


def _kind(text):
    try:
        return ReservoirKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p):
    p.add_argument("--alpha", type=float, default=1.0, help="coupling strength (sets the length unit)")
    p.add_argument("--step", type=float, default=1e-3, help="grid step in units of 1/alpha")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", type=_formats, action="append", default=None,
                   help="comma-separated subset of csv,json,svg (default csv,json)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="waveguide-memory", description="Guided-mode amplitude in a waveguide coupled to a structured reservoir."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the amplitude equation for one reservoir")
    p.add_argument("--kind", type=_kind, required=True)
    p.add_argument("--gamma", type=float, default=None,
                   help="width gamma/alpha (default 2, or 0 for hermitian)")
    p.add_argument("--alphaL", type=float, default=10.0, help="propagation length alpha*L")
    p.add_argument("--detuning", type=float, default=0.0, help="(beta - beta_c)/alpha")
    _common(p)

    p = sub.add_parser("series", help="power-series coefficients of the amplitude")
    p.add_argument("--kind", type=_kind, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--detuning", type=float, default=0.0)
    _common(p)

    p = sub.add_parser("sweep", help="figure sweeps")
    p.add_argument("figure", choices=("fig2", "fig3", "fig4", "fig5"))
    p.add_argument("--kind", type=_kind, action="append", dest="kinds",
                   help="restrict to a reservoir kind (repeatable)")
    p.add_argument("--gamma", type=float, default=None, help="gamma/alpha for fig2 (2) and fig3 (10)")
    p.add_argument("--alphaL", type=float, default=None, help="length for fig2 (10), fig3 (6), fig5 (100)")
    p.add_argument("--alphaz", type=float, action="append", default=None, help="fig4 positions (repeatable)")
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--no-zero", action="store_true", help="fig5: omit the gamma = 0 point")
    p.add_argument("--detuning", type=float, default=0.0, help="fig2 only")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep points")
    _common(p)
    return parser


def _resolve_formats(args):
    if not args.format:
        return ["csv", "json"]
    return sorted({f for group in args.format for f in group}, key=FORMATS.index)


def _spec(args):
    gamma = args.gamma
    if gamma is None:
        gamma = 0.0 if args.kind is ReservoirKind.HERMITIAN else 2.0
    if gamma < 0:
        raise UsageError("--gamma must be non-negative")
    try:
        return ReservoirSpec(args.kind, args.alpha, gamma * args.alpha, args.detuning * args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _manifest(out, command, config, files):
    doc = {
        "command": command,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config,
        "files": sorted(files),
    }
    _write(os.path.join(out, "manifest.json"), json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_solve(args, formats):
    spec = _spec(args)
    if args.alphaL <= 0 or args.step <= 0:
        raise UsageError("--alphaL and --step must be positive")
    try:
        cfg = SolverConfig(args.alphaL / args.alpha, args.step / args.alpha)
        cfg.check_resolution(spec)
    except ConfigurationError as exc:
        raise UsageError(str(exc)) from None
    trace = solve_volterra(spec, cfg)
    report = observe(trace)
    files = []
    if "csv" in formats:
        _write(os.path.join(args.out, "trace.csv"), trace.to_csv())
        files.append("trace.csv")
    if "json" in formats:
        _write(os.path.join(args.out, "report.json"), report.to_json())
        files.append("report.json")
    if "svg" in formats:
        svg = line_chart({"T": (trace.z * spec.alpha, report.transmission)},
                         title=f"{spec.kind.value}, gamma/alpha={args.gamma or 0:g}",
                         xlabel="alpha z", ylabel="T")
        _write(os.path.join(args.out, "trace.svg"), svg)
        files.append("trace.svg")
    f_end = complex(trace.f[-1])
    print(f"{spec.kind.value}: alpha L = {args.alphaL:g}, f(L) = {f_end.real:.10g}{f_end.imag:+.10g}j, "
          f"T(L) = {abs(f_end) ** 2:.10g}, BLP = {report.blp:.10g}")
    config = dict(kind=spec.kind.value, alpha=args.alpha, gamma_over_alpha=spec.gamma / args.alpha,
                  alphaL=args.alphaL, step=args.step, detuning_over_alpha=args.detuning)
    return config, files


def cmd_series(args, formats):
    if args.order < 2:
        raise UsageError("--order must be at least 2")
    spec = _spec(args)
    f = amplitude_series(kernel_series(spec, args.order), args.order).coeffs
    reference = closed_form_coefficients(spec, args.order) if spec.detuning == 0 else []
    worst = 0.0
    lines = ["n,re_f,im_f,reference,abs_diff"]
    for n, c in enumerate(f):
        c = complex(c)
        if n < len(reference):
            diff = abs(c - reference[n])
            worst = max(worst, diff)
            ref_txt, diff_txt = f"{reference[n]:.17g}", f"{diff:.3g}"
        else:
            ref_txt = diff_txt = ""
        lines.append(f"{n},{c.real:.17g},{c.imag:.17g},{ref_txt},{diff_txt}")
        print(f"f_{n:<3d} = {c.real: .15g}" + (f"{c.imag:+.15g}j" if c.imag else "")
              + (f"    reference {ref_txt}" if ref_txt else ""))
    files = []
    if "csv" in formats:
        _write(os.path.join(args.out, "series.csv"), "\n".join(lines) + "\n")
        files.append("series.csv")
    if "json" in formats:
        doc = {"kind": spec.kind.value, "alpha": args.alpha, "gamma": spec.gamma, "order": args.order,
               "coefficients": [[complex(c).real, complex(c).imag] for c in f],
               "reference": reference, "max_abs_diff": worst}
        _write(os.path.join(args.out, "series.json"), json.dumps(doc, indent=2, sort_keys=True) + "\n")
        files.append("series.json")
    config = dict(kind=spec.kind.value, alpha=args.alpha, gamma_over_alpha=spec.gamma / args.alpha,
                  order=args.order, detuning_over_alpha=args.detuning)
    if worst > SERIES_TOLERANCE:
        print(f"MISMATCH: recursion differs from the closed form by {worst:.3g}", file=sys.stderr)
        raise _SeriesMismatch(config, files)
    return config, files


class _SeriesMismatch(Exception):
    def __init__(self, config, files):
        self.config, self.files = config, files


_SVG_STYLE = {"hermitian": "dotted"}


def _sweep_svg(result, *, logy=False, ylabel=""):
    series = {label: (result.axis, values) for label, values in result.rows.items()}
    styles = {label: "dashed" if label.startswith("markov_") else _SVG_STYLE.get(label, "solid")
              for label in series}
    xlabel = "alpha z" if result.axis_name == "alpha_z" else "gamma / alpha"
    return line_chart(series, title=result.name, xlabel=xlabel, ylabel=ylabel or result.observable,
                      logy=logy, styles=styles)


def cmd_sweep(args, formats):
    fig = args.figure
    common = dict(alpha=args.alpha, step=args.step, kinds=args.kinds, n_jobs=args.jobs)
    try:
        if fig == "fig2":
            results = [sweep_transmission_vs_z(2.0 if args.gamma is None else args.gamma,
                                               args.alphaL or 10.0, detuning_over_alpha=args.detuning, **common)]
        elif fig == "fig3":
            results = [sweep_logf_vs_z(10.0 if args.gamma is None else args.gamma, args.alphaL or 6.0, **common)]
        elif fig == "fig4":
            results = sweep_transmission_vs_gamma(
                tuple(args.alphaz or FIG4_ALPHAZ),
                (args.gamma_min or 0.2, args.gamma_max or 50.0), args.points or 40, **common)
        else:
            results = [sweep_blp_vs_gamma((args.gamma_min or 0.1, args.gamma_max or 10.0), args.alphaL or 100.0,
                                          args.points or 12, include_zero=not args.no_zero, **common)]
    except ConfigurationError as exc:
        raise UsageError(str(exc)) from None
    files = []
    for res in results:
        stem = fig if fig != "fig4" else f"fig4_az{res.metadata['alpha_z']:.6f}"
        if "csv" in formats:
            _write(os.path.join(args.out, stem + ".csv"), res.to_csv())
            files.append(stem + ".csv")
        if "svg" in formats:
            _write(os.path.join(args.out, stem + ".svg"), _sweep_svg(res))
            files.append(stem + ".svg")
        print(f"{stem}: {len(res.rows)} series x {res.axis.size} points")
    config = dict(figure=fig, alpha=args.alpha, step=args.step,
                  kinds=[k.value for k in args.kinds] if args.kinds else None,
                  parameters=[res.metadata for res in results])
    return config, files


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    formats = _resolve_formats(args)
    handler = {"solve": cmd_solve, "series": cmd_series, "sweep": cmd_sweep}[args.command]
    try:
        os.makedirs(args.out, exist_ok=True)
        config, files = handler(args, formats)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except _SeriesMismatch as exc:
        config, files = exc.config, exc.files
        _manifest(args.out, args.command, config, files)
        return 1
    except WaveguideMemoryError as exc:
        print(f"{parser.prog}: numerical failure: {exc}", file=sys.stderr)
        return 1
    config["formats"] = formats
    _manifest(args.out, args.command, config, files)
    return 0


if __name__ == "__main__":
    sys.exit(main())
