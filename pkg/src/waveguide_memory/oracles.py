"""Independent reference solutions.

* :func:`lorentzian_exact` - closed form for the exponential kernel, which
  turns the memory equation into a damped oscillator.
* :func:`build_bath` / :func:`solve_discrete_modes` - brute-force integration
  of the single-excitation Schroedinger equation for the guide coupled to a
  finite set of reservoir modes.  No memory kernel is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import IntegratorFailureError
from .kernels import ReservoirKind, ReservoirSpec, pdf
from .solver import AmplitudeTrace, SolverConfig

__all__ = [
    "lorentzian_exact",
    "DiscreteBath",
    "SingleExcitationState",
    "build_bath",
    "solve_discrete_modes",
    "DEFAULT_WINDOWS",
]

# half-width of the sampled beta window, in units of gamma
DEFAULT_WINDOWS = {
    ReservoirKind.GAUSSIAN: 10.0,
    ReservoirKind.LORENTZIAN: 200.0,
    ReservoirKind.UNIFORM: 0.5,
}

NORM_TOLERANCE = 1e-6


def _sinhc(x):
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, 1 + x * x / 6, np.sinh(safe) / safe)


def lorentzian_exact(alpha, gamma, z, detuning=0.0):
    """Exact amplitude for the kernel ``alpha**2 exp(-gamma z / 2 + i detuning z)``.

    The amplitude obeys ``f'' + b f' + alpha**2 f = 0`` with
    ``b = gamma/2 - i detuning``, ``f(0) = 1``, ``f'(0) = 0``, so

        f(z) = exp(-b z / 2) [cosh(d z / 2) + (b z / 2) sinhc(d z / 2)]

    with ``d = sqrt(b**2 - 4 alpha**2)``.  Writing the sinh term through
    ``sinhc`` makes the critically damped case ``d = 0`` a smooth limit.
    """
    z = np.asarray(z, dtype=float)
    b = complex(0.5 * gamma, -detuning)
    d = np.sqrt(b * b - 4 * alpha * alpha + 0j)
    half = 0.5 * d * z
    out = np.exp(-0.5 * b * z) * (np.cosh(half) + 0.5 * b * z * _sinhc(half))
    if detuning == 0:
        out = out.real
    return out if np.ndim(out) else out.item()


@dataclass(frozen=True)
class DiscreteBath:
    """Reservoir modes at ``beta_c + offsets[n]`` with couplings ``couplings[n]``."""

    offsets: np.ndarray
    couplings: np.ndarray
    spec: ReservoirSpec
    window: tuple

    @property
    def count(self):
        return int(self.offsets.size)

    @property
    def spacing(self):
        return float(self.offsets[1] - self.offsets[0]) if self.count > 1 else math.inf

    @property
    def recurrence_length(self):
        """Distance ``2 pi / d_beta`` beyond which the finite bath revives artificially."""
        return 2 * math.pi / self.spacing

    @property
    def coupling_sum(self):
        return float(self.couplings @ self.couplings)

    def captured_mass(self):
        """Exact density mass inside the sampled window."""
        s = self.spec
        lo, hi = (w - s.beta_c for w in self.window)
        if s.kind is ReservoirKind.HERMITIAN:
            return 1.0
        if s.kind is ReservoirKind.UNIFORM:
            half = s.gamma / 2
            return (min(hi, half) - max(lo, -half)) / s.gamma
        if s.kind is ReservoirKind.LORENTZIAN:
            w = s.width
            return (math.atan(hi / w) - math.atan(lo / w)) / math.pi
        root = s.width * math.sqrt(2)
        return 0.5 * (math.erf(hi / root) - math.erf(lo / root))


@dataclass
class SingleExcitationState:
    guide: complex
    bath: np.ndarray

    @property
    def norm(self):
        return abs(self.guide) ** 2 + float(np.vdot(self.bath, self.bath).real)


def build_bath(spec: ReservoirSpec, M: int, window_halfwidth: float | None = None) -> DiscreteBath:
    """Sample ``M`` modes uniformly in beta with density-weighted couplings.

    ``g_n = alpha sqrt(rho(beta_n) w_n d_beta)`` with trapezoid weights
    ``w_n``, so ``sum g_n**2`` is the trapezoid estimate of
    ``alpha**2 * (mass inside the window)``.  The window is
    ``beta_c +- window_halfwidth * gamma``; the uniform kind must use its
    exact support (half-width 0.5).
    """
    if spec.kind is ReservoirKind.HERMITIAN:
        return DiscreteBath(np.zeros(1), np.array([float(spec.alpha)]), spec, (spec.beta_c, spec.beta_c))
    if M < 2:
        raise ValueError("a structured bath needs M >= 2 modes")
    if window_halfwidth is None:
        window_halfwidth = DEFAULT_WINDOWS[spec.kind]
    if spec.kind is ReservoirKind.UNIFORM and window_halfwidth != 0.5:
        raise ValueError("the uniform bath must sample exactly its support (half-width 0.5)")
    half = window_halfwidth * spec.gamma
    offsets = np.linspace(-half, half, M)
    d_beta = offsets[1] - offsets[0]
    weights = np.ones(M)
    weights[[0, -1]] = 0.5
    rho = pdf(spec, spec.beta_c + offsets)
    couplings = float(spec.alpha) * np.sqrt(rho * weights * d_beta)
    return DiscreteBath(offsets, couplings, spec, (spec.beta_c - half, spec.beta_c + half))


def solve_discrete_modes(
    bath: DiscreteBath, detuning: float | None, cfg: SolverConfig, *, return_state=False
):
    """Integrate the guide + bath amplitudes with fixed-step classical RK4.

    In the frame rotating with the guide,

        i c_a' = sum_n g_n c_n
        i c_n' = (beta_n - beta) c_n + g_n c_a

    from ``c_a = 1``, ``c_n = 0``; ``beta_n - beta = offsets[n] - detuning``.

    Raises
    ------
    IntegratorFailureError
        If the total probability drifts by more than 1e-6.
    """
    if detuning is None:
        detuning = bath.spec.detuning
    z = cfg.grid()
    h = cfg.h
    omega = bath.offsets - detuning
    g = bath.couplings.astype(complex)

    def rhs(ca, c):
        return -1j * (g @ c), -1j * (omega * c + g * ca)

    ca = 1.0 + 0j
    c = np.zeros(bath.count, dtype=complex)
    out = np.empty(z.size, dtype=complex)
    out[0] = ca
    drift = 0.0
    for k in range(1, z.size):
        k1a, k1 = rhs(ca, c)
        k2a, k2 = rhs(ca + 0.5 * h * k1a, c + 0.5 * h * k1)
        k3a, k3 = rhs(ca + 0.5 * h * k2a, c + 0.5 * h * k2)
        k4a, k4 = rhs(ca + h * k3a, c + h * k3)
        ca = ca + h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        c = c + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k] = ca
        drift = max(drift, abs(abs(ca) ** 2 + np.vdot(c, c).real - 1.0))
        if drift > NORM_TOLERANCE:
            raise IntegratorFailureError(f"norm drift {drift:.3g} at z={z[k]:.6g}")
    spec = bath.spec
    if detuning != spec.detuning:
        spec = ReservoirSpec(spec.kind, spec.alpha, spec.gamma, detuning, spec.beta_c)
    trace = AmplitudeTrace(z, out, spec, info={"method": "rk4-discrete-bath", "norm_drift": drift, "modes": bath.count})
    if return_state:
        return trace, SingleExcitationState(ca, c)
    return trace
