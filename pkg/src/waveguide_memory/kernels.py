"""Reservoir spectral densities and their memory kernels.

Every reservoir is parametrized by its full width at half maximum ``gamma``
so that the three structured profiles are directly comparable.  The memory
kernel is the Fourier transform of the density scaled by ``alpha**2`` and
rotated into the frame of the guided mode::

    m~(z) = alpha**2 * exp(1j * detuning * z) * R(z)

where ``R`` is the resonant autocorrelation (real and even for all kinds).
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .exceptions import DivergentRateError, DomainError, UnsupportedOperationError

__all__ = [
    "ReservoirKind",
    "ReservoirSpec",
    "KernelSeries",
    "STRUCTURED_KINDS",
    "pdf",
    "autocorrelation",
    "kernel_series",
    "markov_rate",
]

LN256 = math.log(256.0)
LN65536 = math.log(65536.0)


class ReservoirKind(str, Enum):
    LORENTZIAN = "lorentzian"
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"
    HERMITIAN = "hermitian"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown reservoir kind {value!r}; expected one of "
                + ", ".join(k.value for k in cls)
            ) from None


STRUCTURED_KINDS = (ReservoirKind.LORENTZIAN, ReservoirKind.GAUSSIAN, ReservoirKind.UNIFORM)


@dataclass(frozen=True)
class ReservoirSpec:
    """Physical configuration of the waveguide-reservoir pair.

    A structured kind with ``gamma == 0`` collapses to
    :attr:`ReservoirKind.HERMITIAN`, the single-mode limit shared by all
    profiles.  ``beta_c`` is carried for bookkeeping; the dynamics depend on
    ``detuning = beta - beta_c`` only.
    """

    kind: ReservoirKind
    alpha: float
    gamma: float = 0.0
    detuning: float = 0.0
    beta_c: float = 0.0

    def __post_init__(self):
        kind = ReservoirKind.parse(self.kind)
        for name in ("alpha", "gamma", "detuning", "beta_c"):
            value = getattr(self, name)
            if not isinstance(value, numbers.Real) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite real number, got {value!r}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma!r}")
        if kind is ReservoirKind.HERMITIAN and self.gamma != 0:
            raise ValueError("the hermitian kind requires gamma == 0")
        if self.gamma == 0:
            kind = ReservoirKind.HERMITIAN
        object.__setattr__(self, "kind", kind)

    @property
    def width(self):
        """Internal width parameter of the density (Gamma, sigma or half-width)."""
        if self.kind is ReservoirKind.LORENTZIAN:
            return self.gamma / 2
        if self.kind is ReservoirKind.GAUSSIAN:
            return self.gamma / math.sqrt(LN256)
        if self.kind is ReservoirKind.UNIFORM:
            return self.gamma / 2
        return 0.0

    @property
    def is_resonant(self):
        return self.detuning == 0


@dataclass(frozen=True)
class KernelSeries:
    """Taylor coefficients ``m_0 .. m_K`` of the memory kernel about ``z = 0``."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a kernel series needs at least one coefficient")

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


def pdf(spec: ReservoirSpec, beta):
    """Spectral density of reservoir propagation constants at ``beta``.

    Raises
    ------
    UnsupportedOperationError
        For the hermitian kind, whose density is a delta distribution.
    """
    if spec.kind is ReservoirKind.HERMITIAN:
        raise UnsupportedOperationError("the hermitian reservoir has no pointwise density")
    x = np.asarray(beta, dtype=float) - spec.beta_c
    w = spec.width
    if spec.kind is ReservoirKind.LORENTZIAN:
        out = w / (np.pi * (x * x + w * w))
    elif spec.kind is ReservoirKind.GAUSSIAN:
        out = np.exp(-0.5 * (x / w) ** 2) / (w * math.sqrt(2 * math.pi))
    else:
        out = np.where(np.abs(x) <= w, 1.0 / spec.gamma, 0.0)
    return out if np.ndim(out) else float(out)


def _resonant_kernel(spec, z):
    a2 = spec.alpha**2
    g = spec.gamma
    if spec.kind is ReservoirKind.LORENTZIAN:
        return a2 * np.exp(-0.5 * g * z)
    if spec.kind is ReservoirKind.GAUSSIAN:
        return a2 * np.exp(-(g * z) ** 2 / LN65536)
    if spec.kind is ReservoirKind.UNIFORM:
        # np.sinc is the normalized sinc; sinc(0) = 1
        return a2 * np.sinc(g * z / (2 * np.pi))
    return np.full(np.shape(z), a2, dtype=float)


def autocorrelation(spec: ReservoirSpec, z, *, real_if_resonant=False):
    """Memory kernel ``m~(z)`` in the frame of the guided mode.

    Accepts a scalar or an array of non-negative positions.  The result is
    complex unless ``real_if_resonant`` is set and the detuning vanishes.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("the memory kernel is defined for z >= 0 only")
    out = _resonant_kernel(spec, z)
    if spec.detuning != 0:
        out = out * np.exp(1j * spec.detuning * z)
    elif not real_if_resonant:
        out = out.astype(complex)
    return out if np.ndim(out) else out.item()


def _is_exact(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def kernel_series(spec: ReservoirSpec, order: int) -> KernelSeries:
    """Taylor coefficients of ``m~`` about zero, up to and including ``order``.

    Coefficients are :class:`~fractions.Fraction` when ``alpha`` and
    ``gamma`` are given as ints/Fractions, the detuning is zero and the kind
    has rational coefficients (all but Gaussian).
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    exact = (
        _is_exact(spec.alpha)
        and _is_exact(spec.gamma)
        and spec.detuning == 0
        and spec.kind is not ReservoirKind.GAUSSIAN
    )
    one = Fraction(1) if exact else 1.0
    a2 = one * spec.alpha**2
    g = one * spec.gamma
    coeffs = [0 * one] * (order + 1)
    if spec.kind is ReservoirKind.LORENTZIAN:
        for j in range(order + 1):
            coeffs[j] = a2 * (-g / 2) ** j / math.factorial(j)
    elif spec.kind is ReservoirKind.GAUSSIAN:
        c = -(g**2) / LN65536
        for j in range(order // 2 + 1):
            coeffs[2 * j] = a2 * c**j / math.factorial(j)
    elif spec.kind is ReservoirKind.UNIFORM:
        for j in range(order // 2 + 1):
            coeffs[2 * j] = a2 * (-1) ** j * (g / 2) ** (2 * j) / math.factorial(2 * j + 1)
    else:
        coeffs[0] = a2
    if spec.detuning != 0:
        phase = [(1j * spec.detuning) ** k / math.factorial(k) for k in range(order + 1)]
        coeffs = [
            sum(coeffs[j] * phase[n - j] for j in range(n + 1)) for n in range(order + 1)
        ]
    return KernelSeries(tuple(coeffs))


def markov_rate(spec: ReservoirSpec) -> float:
    """One-sided integral of the resonant kernel, the Markovian decay rate of ``|f|``.

    Detuning is ignored: the rate refers to the resonant configuration.
    """
    if spec.gamma == 0:
        raise DivergentRateError("zero spectral width has no Markovian decay rate")
    a2, g = float(spec.alpha) ** 2, float(spec.gamma)
    if spec.kind is ReservoirKind.LORENTZIAN:
        return 2 * a2 / g
    if spec.kind is ReservoirKind.GAUSSIAN:
        return math.sqrt(math.pi * math.log(16.0)) * a2 / g
    return math.pi * a2 / g
