"""Power-series solution of ``f' = -(m~ * f)``, ``f(0) = 1``, ``f'(0) = 0``.

Matching powers of ``z`` in the convolution of two power series gives

    f[n+1] = -1/(n (n+1)) * sum_{j<n} m[j] f[n-1-j] / C(n-1, j),   n >= 1

which reproduces ``f = 1 - m0/2 z^2 - m1/6 z^3 + (m0^2 - 2 m2)/24 z^4 + ...``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exceptions import TruncationError
from .kernels import LN256, KernelSeries, ReservoirKind, ReservoirSpec

__all__ = ["AmplitudeSeries", "amplitude_series", "eval_series", "closed_form_coefficients"]


@dataclass(frozen=True)
class AmplitudeSeries:
    coeffs: tuple

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def is_exact(self):
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)


def _compensated_sum(terms):
    if all(isinstance(t, (int, Fraction)) for t in terms):
        return sum(terms, Fraction(0))
    if any(isinstance(t, complex) for t in terms):
        re = math.fsum(complex(t).real for t in terms)
        im = math.fsum(complex(t).imag for t in terms)
        return complex(re, im)
    return math.fsum(terms)


def amplitude_series(kernel: KernelSeries, order: int) -> AmplitudeSeries:
    """Taylor coefficients ``f_0 .. f_order`` driven by the kernel coefficients."""
    if order < 2:
        raise ValueError("order must be at least 2")
    if kernel.order < order - 2:
        raise TruncationError(
            f"amplitude order {order} needs kernel order >= {order - 2}, got {kernel.order}"
        )
    m = kernel.coeffs
    exact = all(isinstance(c, (int, Fraction)) for c in m)
    f = [Fraction(1), Fraction(0)] if exact else [1.0, 0.0]
    for n in range(1, order):
        terms = [m[j] * f[n - 1 - j] / math.comb(n - 1, j) for j in range(n)]
        f.append(-_compensated_sum(terms) / (n * (n + 1)))
    return AmplitudeSeries(tuple(f))


def eval_series(s: AmplitudeSeries, z):
    """Horner evaluation of the truncated series.

    Returns ``(value, remainder)`` where ``remainder = |f_K z^K|`` is a crude
    size estimate of the neglected tail.  ``K`` is the highest order with a
    non-zero coefficient, so even series do not report a zero remainder.
    """
    acc = 0
    for c in reversed(s.coeffs):
        acc = acc * z + c
    k = max(k for k, c in enumerate(s.coeffs) if c != 0)
    return acc, abs(complex(s.coeffs[k])) * abs(z) ** k


def closed_form_coefficients(spec: ReservoirSpec, order: int = 4):
    """Known closed-form coefficients of the amplitude series.

    Structured kinds are known through fourth order; the hermitian limit is
    the full cosine series.  Only defined at zero detuning.
    """
    if spec.detuning != 0:
        raise ValueError("closed forms are tabulated at resonance only")
    a2, g = spec.alpha**2, spec.gamma
    if spec.kind is ReservoirKind.HERMITIAN:
        out = []
        for n in range(order + 1):
            out.append(0.0 if n % 2 else (-a2) ** (n // 2) / math.factorial(n))
        return out
    cubic = a2 * g / 12 if spec.kind is ReservoirKind.LORENTZIAN else 0.0
    if spec.kind is ReservoirKind.LORENTZIAN:
        quartic = a2 / 24 * (a2 - g**2 / 4)
    elif spec.kind is ReservoirKind.GAUSSIAN:
        quartic = a2 / 24 * (a2 + g**2 / LN256)
    else:
        quartic = a2 / 24 * (a2 + g**2 / 12)
    return [1.0, 0.0, -a2 / 2, cubic, quartic][: order + 1]
