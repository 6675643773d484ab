"""Volterra solver for the memory equation ``f'(z) = -(m~ * f)(z)``, ``f(0) = 1``.

The history integral is discretized with the composite trapezoid rule on a
uniform grid and advanced with one predict-evaluate-correct-evaluate (PECE)
step per grid point: an explicit Euler predictor followed by a trapezoid
corrector.  The scheme is second order.

General kernels cost O(N^2).  Exponential kernels (Lorentzian and the
single-mode limit) satisfy ``K[m+1] = r K[m]`` so the same trapezoid sums are
accumulated recursively in O(N).
"""
from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, NumericalInstabilityError
from .kernels import ReservoirKind, ReservoirSpec, autocorrelation

__all__ = [
    "SolverConfig",
    "AmplitudeTrace",
    "convolve_history",
    "memory_integrals",
    "solve_volterra",
    "TRACE_COLUMNS",
]

TRACE_COLUMNS = ("z", "re_f", "im_f", "abs_f", "T")

# Gaussian history is skipped once the kernel falls below this fraction of alpha**2.
_KERNEL_FLOOR = 1e-18


@dataclass(frozen=True)
class SolverConfig:
    """Grid length ``L`` and nominal step ``h``.

    The grid has ``N = round(L / h)`` intervals; the effective step is
    ``L / N`` so that the last node sits exactly at ``L``.
    """

    length: float
    step: float
    method: str = "trapezoid-pece"

    def __post_init__(self):
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ConfigurationError(f"length must be positive, got {self.length!r}")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ConfigurationError(f"step must be positive, got {self.step!r}")
        if self.method != "trapezoid-pece":
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.n_steps < 8:
            raise ConfigurationError(f"L/h = {self.length / self.step:.3g} < 8; grid too coarse")

    @property
    def n_steps(self):
        return max(int(round(self.length / self.step)), 1)

    @property
    def h(self):
        return self.length / self.n_steps

    def grid(self):
        return np.linspace(0.0, self.length, self.n_steps + 1)

    def check_resolution(self, spec: ReservoirSpec):
        scale = max(spec.alpha, spec.gamma, abs(spec.detuning))
        if self.h * scale > 0.1:
            raise ConfigurationError(
                f"step {self.h:.3g} too coarse: h*max(alpha, gamma, |detuning|) = "
                f"{self.h * scale:.3g} > 0.1"
            )


@dataclass
class AmplitudeTrace:
    """Amplitude samples ``f(z_k)`` on a uniform grid."""

    z: np.ndarray
    f: np.ndarray
    spec: ReservoirSpec | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=float)
        self.f = np.asarray(self.f)
        if self.z.ndim != 1 or self.z.shape != self.f.shape:
            raise ValueError("z and f must be 1-D arrays of equal length")
        if self.z.size < 2:
            raise ValueError("a trace needs at least two samples")

    @property
    def h(self):
        return (self.z[-1] - self.z[0]) / (self.z.size - 1)

    @property
    def length(self):
        return float(self.z[-1])

    @property
    def transmission(self):
        return np.abs(self.f) ** 2

    def at(self, zq):
        """Linear interpolation of ``f`` at ``zq``."""
        zq = np.asarray(zq, dtype=float)
        if np.any(zq < self.z[0]) or np.any(zq > self.z[-1]):
            raise ValueError("interpolation point outside the trace grid")
        f = np.asarray(self.f, dtype=complex)
        out = np.interp(zq, self.z, f.real) + 1j * np.interp(zq, self.z, f.imag)
        return out if np.ndim(out) else complex(out)

    def to_csv(self, target=None):
        """Write ``z, re_f, im_f, abs_f, T`` with 12 significant digits.

        ``target`` may be a path or a text stream; with ``None`` the CSV text
        is returned.
        """
        f = np.asarray(self.f, dtype=complex)
        table = np.column_stack([self.z, f.real, f.imag, np.abs(f), np.abs(f) ** 2])
        buf = io.StringIO()
        np.savetxt(buf, table, fmt="%.12g", delimiter=",", header=",".join(TRACE_COLUMNS), comments="")
        text = buf.getvalue()
        if target is None:
            return text
        if isinstance(target, (str, os.PathLike)):
            with open(target, "w", newline="") as fh:
                fh.write(text)
        else:
            target.write(text)
        return None

    @classmethod
    def from_csv(cls, source, spec=None):
        if isinstance(source, (str, os.PathLike)) and not str(source).lstrip().startswith("z,"):
            with open(source) as fh:
                text = fh.read()
        elif hasattr(source, "read"):
            text = source.read()
        else:
            text = str(source)
        lines = text.splitlines()
        header = tuple(c.strip() for c in lines[0].split(","))
        if header != TRACE_COLUMNS:
            raise ValueError(f"unexpected trace header {header!r}")
        data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
        f = data[:, 1] + 1j * data[:, 2]
        if not np.any(data[:, 2]):
            f = data[:, 1].copy()
        return cls(data[:, 0], f, spec)


def convolve_history(kernel_samples, f_samples, h):
    """Composite-trapezoid value of ``int_0^{z_k} m~(z_k - s) f(s) ds``.

    ``kernel_samples[i] = m~(i h)`` and ``f_samples[i] = f(i h)`` for
    ``i = 0..k``.
    """
    K = np.asarray(kernel_samples)
    f = np.asarray(f_samples)
    if K.ndim != 1 or K.shape != f.shape:
        raise ValueError("kernel and amplitude samples must be 1-D with equal length")
    if K.size == 0:
        raise ValueError("need at least one sample")
    k = K.size - 1
    if k == 0:
        return 0.0 * K[0] * f[0]
    inner = K[k - 1 : 0 : -1] @ f[1:k] if k > 1 else 0.0
    return h * (0.5 * K[k] * f[0] + inner + 0.5 * K[0] * f[k])


def _exponential_parameters(spec):
    """(c, lam) with m~(z) = c exp(lam z) for exponential kernels, else None."""
    if spec.kind is ReservoirKind.LORENTZIAN:
        lam = complex(-0.5 * spec.gamma, spec.detuning)
    elif spec.kind is ReservoirKind.HERMITIAN:
        lam = complex(0.0, spec.detuning)
    else:
        return None
    return float(spec.alpha) ** 2, lam if lam.imag else lam.real


def _kernel_lags(spec, K):
    """Number of kernel lags that contribute above the floor."""
    if spec.kind is not ReservoirKind.GAUSSIAN:
        return K.size
    below = np.flatnonzero(np.abs(K) < _KERNEL_FLOOR * float(spec.alpha) ** 2)
    return int(below[0]) if below.size else K.size


def _check_finite(value, z):
    if not abs(value) < 1e300:
        raise NumericalInstabilityError(z)


def _pece_general(K, z, h, lags):
    n = K.size - 1
    f = np.zeros(n + 1, dtype=K.dtype)
    f[0] = 1.0
    krev = np.ascontiguousarray(K[::-1])
    kl = K.tolist()
    k0 = kl[0]
    f_prev, g_prev = f[0].item(), 0.0 * k0
    g = [g_prev]
    for k in range(1, n + 1):
        lo = max(1, k - lags + 1)
        known = h * (0.5 * kl[k] + (krev[n - k + lo : n] @ f[lo:k]).item()) if k > lo else h * 0.5 * kl[k]
        f_pred = f_prev + h * g_prev
        g_pred = -(known + 0.5 * h * k0 * f_pred)
        f_new = f_prev + 0.5 * h * (g_prev + g_pred)
        _check_finite(f_new, z[k])
        g_prev = -(known + 0.5 * h * k0 * f_new)
        f[k] = f_new
        f_prev = f_new
        g.append(g_prev)
    return f, np.asarray(g, dtype=K.dtype)


def _pece_exponential(c, lam, z, h):
    n = z.size - 1
    dtype = complex if isinstance(lam, complex) else float
    K = (c * np.exp(lam * z)).tolist()
    r = K[1] / c
    f = np.empty(n + 1, dtype=dtype)
    g = np.empty(n + 1, dtype=dtype)
    f[0], g[0] = 1.0, 0.0
    f_prev, g_prev = 1.0, 0.0
    acc = 1.0  # sum_j r**(k-j) f_j
    for k in range(1, n + 1):
        known = h * (c * r * acc - 0.5 * K[k])
        f_pred = f_prev + h * g_prev
        g_pred = -(known + 0.5 * h * c * f_pred)
        f_new = f_prev + 0.5 * h * (g_prev + g_pred)
        _check_finite(f_new, z[k])
        g_prev = -(known + 0.5 * h * c * f_new)
        acc = r * acc + f_new
        f[k], g[k] = f_new, g_prev
        f_prev = f_new
    return f, g


def solve_volterra(spec: ReservoirSpec, cfg: SolverConfig) -> AmplitudeTrace:
    """Second-order trace of the amplitude on ``[0, cfg.length]``.

    Raises
    ------
    ConfigurationError
        If the step does not resolve ``max(alpha, gamma, |detuning|)``.
    NumericalInstabilityError
        On overflow or NaN; carries the offending ``z``.
    """
    cfg.check_resolution(spec)
    z = cfg.grid()
    h = cfg.h
    expo = _exponential_parameters(spec)
    if expo is not None:
        f, g = _pece_exponential(expo[0], expo[1], z, h)
    else:
        K = autocorrelation(spec, z, real_if_resonant=True)
        f, g = _pece_general(K, z, h, _kernel_lags(spec, K))
    return AmplitudeTrace(z, f, spec, info={"method": cfg.method, "step": h, "derivative": g})


def memory_integrals(trace: AmplitudeTrace, spec: ReservoirSpec | None = None):
    """Trapezoid history integrals ``(m~ * f)(z_k)`` for every node of a trace."""
    spec = spec or trace.spec
    if spec is None:
        raise ValueError("a reservoir spec is required")
    z, h = trace.z, trace.h
    expo = _exponential_parameters(spec)
    if expo is not None:
        c, lam = expo
        r = np.exp(lam * h)
        K0 = c * np.exp(lam * z)
        out = np.empty(z.size, dtype=np.result_type(trace.f, K0))
        acc = 0.0
        for k, fk in enumerate(trace.f.tolist()):
            acc = r * acc + fk
            out[k] = h * (c * acc - 0.5 * K0[k] * trace.f[0] - 0.5 * c * fk)
        out[0] = 0.0
        return out
    K = autocorrelation(spec, z, real_if_resonant=True)
    f = np.asarray(trace.f)
    lags = _kernel_lags(spec, K)
    krev = np.ascontiguousarray(K[::-1])
    n = z.size - 1
    out = np.zeros(z.size, dtype=np.result_type(f, K))
    for k in range(1, n + 1):
        lo = max(1, k - lags + 1)
        inner = krev[n - k + lo : n] @ f[lo:k] if k > lo else 0.0
        out[k] = h * (0.5 * K[k] * f[0] + inner + 0.5 * K[0] * f[k])
    return out
