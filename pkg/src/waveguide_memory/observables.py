"""Observables computed from amplitude traces."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DivergentRateError, DomainError, UnderflowError
from .kernels import ReservoirSpec, markov_rate
from .solver import AmplitudeTrace, memory_integrals

__all__ = [
    "DecayFit",
    "ObservableReport",
    "transmission",
    "flux_rate",
    "blp_measure",
    "blp_hermitian_closed_form",
    "fit_decay_rate",
    "default_fit_window",
    "observe",
]


def transmission(trace: AmplitudeTrace):
    """Survival probability ``T(z_k) = |f(z_k)|**2``."""
    return np.abs(trace.f) ** 2


def flux_rate(trace: AmplitudeTrace, spec: ReservoirSpec | None = None):
    """``dT/dz = -2 Re{conj(f) (m~ * f)}`` with the solver's trapezoid history.

    Negative values mean leakage into the reservoir, positive values a
    revival fed back from it.
    """
    q = memory_integrals(trace, spec)
    return -2.0 * np.real(np.conj(trace.f) * q)


def blp_measure(trace: AmplitudeTrace) -> float:
    """Accumulated growth of ``|f|`` along the trace.

    ``f`` is taken piecewise linear between samples.  On each segment ``|f|``
    is convex, so its growth is ``|f_{k+1}| - min`` where ``min`` is the
    distance from the origin to the segment.  This captures zero crossings
    that fall between nodes.
    """
    f = np.asarray(trace.f, dtype=complex)
    a, d = f[:-1], np.diff(f)
    dd = np.abs(d) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, -np.real(np.conj(a) * d) / dd, 0.0)
    abs_a, abs_b = np.abs(a), np.abs(f[1:])
    interior = (t > 0) & (t < 1)
    low = np.where(interior, np.abs(a + np.clip(t, 0.0, 1.0) * d), abs_a)
    rise = np.where(interior, abs_b - low, np.maximum(abs_b - abs_a, 0.0))
    return float(math.fsum(np.maximum(rise, 0.0)))


def blp_hermitian_closed_form(alphaL: float) -> float:
    """Accumulated growth of ``|cos(alpha z)|`` over ``[0, L]``.

    ``floor(alphaL / pi) + (1 - H(tan alphaL)) |cos alphaL|`` with the
    Heaviside convention ``H(0) = 1``.  ``tan`` is evaluated from the reduced
    phase so that multiples of pi are not pushed across zero by rounding.
    """
    if alphaL < 0:
        raise DomainError("alphaL must be non-negative")
    x = alphaL / math.pi
    if abs(x - round(x)) < 1e-12:
        x = float(round(x))
    n = math.floor(x)
    frac = x - n
    # tan(alphaL) < 0 exactly when the reduced phase lies in (pi/2, pi)
    return n + (abs(math.cos(alphaL)) if frac > 0.5 else 0.0)


@dataclass(frozen=True)
class DecayFit:
    kappa: float
    residual: float
    window: tuple
    intercept: float = 0.0


def default_fit_window(spec: ReservoirSpec):
    """``[1/k, 5/k]`` with ``k`` the Markovian rate; skips the quadratic onset."""
    k = markov_rate(spec)
    return (1.0 / k, 5.0 / k)


def fit_decay_rate(trace: AmplitudeTrace, window=None) -> DecayFit:
    """Least-squares slope of ``-ln|f|`` over ``window``.

    Raises
    ------
    DomainError
        If the window is empty or leaves the grid.
    UnderflowError
        If ``|f| <= 1e-12`` inside the window.
    """
    if window is None:
        if trace.spec is None:
            raise ValueError("a window is required for traces without a spec")
        window = default_fit_window(trace.spec)
    lo, hi = map(float, window)
    tol = 1e-9 * max(1.0, trace.length)
    if not (lo < hi) or lo < trace.z[0] - tol or hi > trace.z[-1] + tol:
        raise DomainError(f"fit window [{lo:.6g}, {hi:.6g}] outside grid [0, {trace.length:.6g}]")
    mask = (trace.z >= lo - tol) & (trace.z <= hi + tol)
    if mask.sum() < 2:
        raise DomainError("fit window contains fewer than two samples")
    mag = np.abs(trace.f[mask])
    if np.any(mag <= 1e-12):
        raise UnderflowError("|f| too small to fit a logarithmic slope")
    z = trace.z[mask]
    y = -np.log(mag)
    slope, intercept = np.polyfit(z, y, 1)
    resid = y - (slope * z + intercept)
    return DecayFit(float(slope), float(np.sqrt(np.mean(resid**2))), (lo, hi), float(intercept))


@dataclass
class ObservableReport:
    transmission: np.ndarray
    blp: float
    kappa_fit: DecayFit | None
    flux: np.ndarray | None = None
    trace: AmplitudeTrace | None = None

    def to_dict(self):
        spec = self.trace.spec if self.trace is not None else None
        return {
            "kind": spec.kind.value if spec else None,
            "alpha": float(spec.alpha) if spec else None,
            "gamma": float(spec.gamma) if spec else None,
            "L": self.trace.length if self.trace is not None else None,
            "h": float(self.trace.h) if self.trace is not None else None,
            "blp": self.blp,
            "kappa_fit": self.kappa_fit.kappa if self.kappa_fit else None,
            "residual": self.kappa_fit.residual if self.kappa_fit else None,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def observe(trace: AmplitudeTrace, window=None, *, with_flux=False) -> ObservableReport:
    """Bundle transmission, BLP and (when meaningful) the fitted decay rate.

    The fit is skipped, leaving ``kappa_fit = None``, for the single-mode
    limit and when the default window does not fit inside the trace.
    """
    fit = None
    try:
        fit = fit_decay_rate(trace, window)
    except (DivergentRateError, DomainError, UnderflowError):
        if window is not None:
            raise
    except ValueError:
        pass
    flux = flux_rate(trace) if with_flux and trace.spec is not None else None
    return ObservableReport(transmission(trace), blp_measure(trace), fit, flux, trace)
