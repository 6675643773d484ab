"""Photon-amplitude dynamics in a waveguide coupled to a structured reservoir."""

__version__ = "0.1.0"

from .exceptions import (
    ConfigurationError,
    DivergentRateError,
    DomainError,
    IntegratorFailureError,
    NumericalInstabilityError,
    TruncationError,
    UnderflowError,
    UnsupportedOperationError,
    WaveguideMemoryError,
)
from .kernels import (
    KernelSeries,
    ReservoirKind,
    ReservoirSpec,
    autocorrelation,
    kernel_series,
    markov_rate,
    pdf,
)
from .observables import (
    DecayFit,
    ObservableReport,
    blp_hermitian_closed_form,
    blp_measure,
    fit_decay_rate,
    flux_rate,
    observe,
    transmission,
)
from .oracles import DiscreteBath, build_bath, lorentzian_exact, solve_discrete_modes
from .series import AmplitudeSeries, amplitude_series, closed_form_coefficients, eval_series
from .solver import AmplitudeTrace, SolverConfig, convolve_history, memory_integrals, solve_volterra
from .sweeps import (
    SweepResult,
    sweep_blp_vs_gamma,
    sweep_logf_vs_z,
    sweep_transmission_vs_gamma,
    sweep_transmission_vs_z,
)
from .estimator import AmplitudePropagator, DecayRateRegressor
