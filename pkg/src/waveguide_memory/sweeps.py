"""Parameter sweeps behind the transmission, decay and memory figures.

All lengths and widths are dimensionless: positions are ``alpha z`` and
widths ``gamma / alpha``.  Each sweep point is an independent solve; with
``n_jobs != 1`` points are evaluated by joblib and gathered in axis order.
"""
from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .kernels import STRUCTURED_KINDS, ReservoirKind, ReservoirSpec, markov_rate
from .observables import blp_measure
from .solver import SolverConfig, solve_volterra

__all__ = [
    "SweepResult",
    "sweep_transmission_vs_z",
    "sweep_logf_vs_z",
    "sweep_transmission_vs_gamma",
    "sweep_blp_vs_gamma",
    "gamma_grid",
    "interior_minimum",
    "is_monotone",
    "FIG4_ALPHAZ",
]

FIG4_ALPHAZ = (math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi)


@dataclass
class SweepResult:
    """Observable values per series label along one swept axis."""

    name: str
    axis_name: str
    axis: np.ndarray
    observable: str
    rows: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axis = np.asarray(self.axis, dtype=float)
        if self.axis.size > 1 and np.any(np.diff(self.axis) <= 0):
            raise ValueError("sweep axis must be strictly increasing")
        for label, values in self.rows.items():
            values = np.asarray(values, dtype=float)
            if values.shape != self.axis.shape:
                raise ValueError(f"row {label!r} does not match the axis length")
            self.rows[label] = values

    def __getitem__(self, label):
        return self.rows[label]

    def to_csv(self, target=None):
        """Long-format CSV ``kind, axis_value, observable``."""
        buf = io.StringIO()
        buf.write("kind,axis_value,observable\n")
        for label, values in self.rows.items():
            for x, v in zip(self.axis.tolist(), values.tolist()):
                buf.write(f"{label},{x:.12g},{v:.12g}\n")
        text = buf.getvalue()
        if target is None:
            return text
        if isinstance(target, (str, os.PathLike)):
            with open(target, "w", newline="") as fh:
                fh.write(text)
        else:
            target.write(text)
        return None


def gamma_grid(lo=0.2, hi=50.0, points=40, include_zero=False):
    """Log-spaced ``gamma / alpha`` values, optionally preceded by 0."""
    grid = np.geomspace(lo, hi, points) if points > 1 else np.array([float(lo)])
    return np.concatenate([[0.0], grid]) if include_zero else grid


def _solve(kind, alpha, gamma, detuning, length, step):
    spec = ReservoirSpec(kind, alpha, gamma, detuning)
    return solve_volterra(spec, SolverConfig(length, step))


def _run(tasks, n_jobs):
    if n_jobs == 1:
        return [fn(*args) for fn, args in tasks]
    return Parallel(n_jobs=n_jobs)(delayed(fn)(*args) for fn, args in tasks)


def _kinds(kinds):
    return tuple(ReservoirKind.parse(k) for k in (kinds or STRUCTURED_KINDS))


def sweep_transmission_vs_z(
    gamma_over_alpha=2.0, alphaL=10.0, *, alpha=1.0, step=1e-3, detuning_over_alpha=0.0, kinds=None, n_jobs=1
) -> SweepResult:
    """``T(alpha z)`` for each kind at one width, plus the single-mode reference."""
    if gamma_over_alpha < 0:
        raise ValueError("gamma_over_alpha must be non-negative")
    kinds = _kinds(kinds)
    labels = [k.value for k in kinds] + ["hermitian"]
    gammas = [gamma_over_alpha * alpha] * len(kinds) + [0.0]
    traces = _run(
        [
            (_solve, (k, alpha, g, detuning_over_alpha * alpha, alphaL / alpha, step / alpha))
            for k, g in zip(list(kinds) + [ReservoirKind.HERMITIAN], gammas)
        ],
        n_jobs,
    )
    axis = traces[0].z * alpha
    rows = {label: np.abs(tr.f) ** 2 for label, tr in zip(labels, traces)}
    meta = dict(alpha=alpha, gamma_over_alpha=gamma_over_alpha, alphaL=alphaL, step=step,
                detuning_over_alpha=detuning_over_alpha)
    return SweepResult("fig2", "alpha_z", axis, "T", rows, meta)


def sweep_logf_vs_z(
    gamma_over_alpha=10.0, alphaL=6.0, *, alpha=1.0, step=1e-3, kinds=None, n_jobs=1
) -> SweepResult:
    """``log10|f|`` per kind with the Markovian ``exp(-kappa z)`` overlays."""
    kinds = _kinds(kinds)
    traces = _run(
        [(_solve, (k, alpha, gamma_over_alpha * alpha, 0.0, alphaL / alpha, step / alpha)) for k in kinds],
        n_jobs,
    )
    axis = traces[0].z * alpha
    rows = {}
    with np.errstate(divide="ignore"):
        for k, tr in zip(kinds, traces):
            rows[k.value] = np.log10(np.abs(tr.f))
    for k, tr in zip(kinds, traces):
        if tr.spec.gamma > 0:
            rows[f"markov_{k.value}"] = -markov_rate(tr.spec) * tr.z / math.log(10)
    meta = dict(alpha=alpha, gamma_over_alpha=gamma_over_alpha, alphaL=alphaL, step=step)
    return SweepResult("fig3", "alpha_z", axis, "log10_abs_f", rows, meta)


def _transmission_at(kind, alpha, gamma, length, step, positions):
    tr = _solve(kind, alpha, gamma, 0.0, length, step)
    return np.interp(positions, tr.z, np.abs(tr.f) ** 2)


def sweep_transmission_vs_gamma(
    alphaz_values=FIG4_ALPHAZ, gamma_range=(0.2, 50.0), points=40, *, alpha=1.0, step=1e-3, kinds=None, n_jobs=1
) -> list:
    """``T`` versus ``gamma / alpha`` at fixed ``alpha z``; one result per position.

    A single solve to the largest position serves every requested position;
    intermediate positions are read by linear interpolation of ``T``.
    """
    alphaz = np.asarray(sorted(alphaz_values), dtype=float)
    if alphaz.size == 0 or np.any(alphaz <= 0):
        raise ValueError("every alpha z must be positive")
    kinds = _kinds(kinds)
    axis = gamma_grid(*gamma_range, points)
    length = alphaz[-1] / alpha
    tasks = [
        (_transmission_at, (k, alpha, g * alpha, length, step / alpha, alphaz / alpha))
        for k in kinds
        for g in axis
    ]
    values = np.asarray(_run(tasks, n_jobs)).reshape(len(kinds), axis.size, alphaz.size)
    out = []
    for i, az in enumerate(alphaz):
        rows = {k.value: values[j, :, i] for j, k in enumerate(kinds)}
        meta = dict(alpha=alpha, alpha_z=float(az), gamma_range=list(gamma_range), points=points, step=step)
        out.append(SweepResult("fig4", "gamma_over_alpha", axis, "T", rows, meta))
    return out


def _blp_point(kind, alpha, gamma, length, step):
    return blp_measure(_solve(kind, alpha, gamma, 0.0, length, step))


def sweep_blp_vs_gamma(
    gamma_range=(0.1, 10.0), alphaL=100.0, points=12, *, alpha=1.0, step=1e-3, include_zero=True, kinds=None, n_jobs=1
) -> SweepResult:
    """BLP measure versus ``gamma / alpha`` at fixed ``alpha L``.

    With ``include_zero`` the axis starts at 0, where every kind reduces to
    the single-mode limit (solved once and shared).
    """
    if alphaL <= 0:
        raise ValueError("alphaL must be positive")
    kinds = _kinds(kinds)
    axis = gamma_grid(*gamma_range, points, include_zero=include_zero)
    keys = []
    for k in kinds:
        for g in axis:
            keys.append((ReservoirKind.HERMITIAN if g == 0 else k, g))
    unique = list(dict.fromkeys(keys))
    results = _run(
        [(_blp_point, (k, alpha, g * alpha, alphaL / alpha, step / alpha)) for k, g in unique], n_jobs
    )
    lookup = dict(zip(unique, results))
    rows = {
        k.value: np.array([lookup[key] for key in keys[i * axis.size : (i + 1) * axis.size]])
        for i, k in enumerate(kinds)
    }
    meta = dict(alpha=alpha, alphaL=alphaL, gamma_range=list(gamma_range), points=points, step=step,
                include_zero=include_zero)
    return SweepResult("fig5", "gamma_over_alpha", axis, "blp", rows, meta)


def is_monotone(values, *, increasing=True, tol=0.0):
    """True if consecutive values never move against the direction by more than ``tol``."""
    d = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(d >= -tol) if increasing else np.all(d <= tol))


def interior_minimum(axis, values, *, tol=1e-4, log_axis=False):
    """Locate a minimum strictly inside the sweep.

    Returns ``(x_min, v_min)`` refined by a parabola through the discrete
    argmin and its neighbours, or ``None`` when the discrete minimum sits on
    an endpoint or is not below both endpoints by more than ``tol``.
    """
    x = np.log(axis) if log_axis else np.asarray(axis, dtype=float)
    v = np.asarray(values, dtype=float)
    i = int(np.argmin(v))
    if i == 0 or i == v.size - 1 or v[i] >= min(v[0], v[-1]) - tol:
        return None
    x0, x1, x2 = x[i - 1 : i + 2]
    y0, y1, y2 = v[i - 1 : i + 2]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
    if a <= 0:
        xm, vm = x1, y1
    else:
        xm = -b / (2 * a)
        c = y1 - a * x1**2 - b * x1
        vm = min(a * xm**2 + b * xm + c, y1)
    return (float(np.exp(xm)) if log_axis else float(xm)), float(vm)
