"""scikit-learn style wrappers.

:class:`AmplitudePropagator` treats propagation positions as the input
samples: ``fit`` solves the memory equation up to the largest position and
``transform`` returns the amplitude features at each position.  Parameters
are plain constructor arguments, so ``get_params``/``set_params``,
``clone`` and ``GridSearchCV``-style parameter sweeps work unchanged.

:class:`DecayRateRegressor` fits ``|f| = A exp(-kappa z)`` to measured or
simulated amplitudes.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .kernels import ReservoirSpec
from .observables import blp_measure, fit_decay_rate
from .solver import AmplitudeTrace, SolverConfig, solve_volterra

__all__ = ["AmplitudePropagator", "DecayRateRegressor", "check_positions"]

FEATURES = ("re_f", "im_f", "abs_f", "T")


def check_positions(X, *, name="X"):
    """Validate propagation positions and return them as a flat float array.

    Accepts a 1-D array or a single-column 2-D array of finite,
    non-negative values.
    """
    X = np.asarray(X)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    X = check_array(X, dtype=float, ensure_2d=True, input_name=name)
    if X.shape[1] != 1:
        raise ValueError(f"{name} must hold a single column of positions, got shape {X.shape}")
    z = X[:, 0]
    if np.any(z < 0):
        raise ValueError(f"{name} contains negative positions")
    return z


class AmplitudePropagator(TransformerMixin, BaseEstimator):
    """Guided-mode amplitude for one reservoir, exposed as a transformer.

    Parameters
    ----------
    kind : {"lorentzian", "gaussian", "uniform", "hermitian"}
    alpha : float
        Coupling strength.
    gamma : float
        Full width at half maximum of the reservoir density.
    detuning : float
        ``beta - beta_c``.
    step : float
        Grid step of the Volterra solver.
    """

    def __init__(self, kind="lorentzian", alpha=1.0, gamma=2.0, detuning=0.0, step=1e-3):
        self.kind = kind
        self.alpha = alpha
        self.gamma = gamma
        self.detuning = detuning
        self.step = step

    def fit(self, X, y=None):
        z = check_positions(X)
        self.spec_ = ReservoirSpec(self.kind, self.alpha, self.gamma, self.detuning)
        length = max(float(z.max()), 8 * self.step)
        self.trace_: AmplitudeTrace = solve_volterra(self.spec_, SolverConfig(length, self.step))
        self.n_features_in_ = 1
        self.blp_ = blp_measure(self.trace_)
        return self

    def _amplitude(self, X):
        check_is_fitted(self, "trace_")
        z = check_positions(X)
        if z.max(initial=0.0) > self.trace_.length * (1 + 1e-12):
            raise ValueError("position beyond the fitted propagation length; refit with larger X")
        return self.trace_.at(np.minimum(z, self.trace_.length))

    def transform(self, X):
        """Columns ``re f, im f, |f|, |f|**2`` at each position."""
        f = np.atleast_1d(self._amplitude(X))
        return np.column_stack([f.real, f.imag, np.abs(f), np.abs(f) ** 2])

    def predict(self, X):
        """Transmission ``|f|**2`` at each position."""
        return np.abs(np.atleast_1d(self._amplitude(X))) ** 2

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURES, dtype=object)


class DecayRateRegressor(RegressorMixin, BaseEstimator):
    """Log-linear fit of an exponentially decaying amplitude.

    ``fit(z, |f|)`` stores ``kappa_`` and ``amplitude_`` so that
    ``predict(z) = amplitude_ * exp(-kappa_ z)``.  Only samples inside
    ``window`` (all samples when ``None``) enter the fit.
    """

    def __init__(self, window=None):
        self.window = window

    def fit(self, X, y):
        X, y = check_X_y(np.asarray(X).reshape(-1, 1) if np.ndim(X) == 1 else X, y, dtype=float)
        z = check_positions(X)
        order = np.argsort(z)
        z, mag = z[order], np.abs(y[order])
        window = self.window if self.window is not None else (z[0], z[-1])
        fit = fit_decay_rate(AmplitudeTrace(z, mag), window)
        self.kappa_ = fit.kappa
        self.amplitude_ = float(np.exp(-fit.intercept))
        self.residual_ = fit.residual
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "kappa_")
        z = check_positions(X)
        return self.amplitude_ * np.exp(-self.kappa_ * z)
