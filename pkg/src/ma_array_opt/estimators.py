"""Scikit-learn style facade over the placement optimizers."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import column_or_1d

from .baselines import ao_optimize, aps_baseline, fpa_baseline
from .model import ScenarioConfig, beam_gain, upper_bound
from .optimizer import MMOptions, mm_optimize

_METHODS = ("mm", "ao", "fpa", "aps")


class AntennaArrayDesigner(BaseEstimator):
    """Fit antenna positions and transmit weights to destination angles.

    fit(X) takes the destination angles (radians in [0, pi), shape (M,) or
    (M, 1)) and optimizes the array layout and beamforming weights for them.
    predict(X) evaluates the fitted array's beam gain at query angles, and
    score(X) is the combined SNR the fitted array delivers toward the given
    angles (the training angles reproduce ``snr_``).

    Parameters mirror the scenario fields plus the optimizer controls;
    ``method`` selects the placement scheme: "mm" (surrogate ascent), "ao"
    (alternating optimization), "fpa" (fixed array) or "aps" (grid selection).

    Attributes set by fit: ``positions_``, ``weights_``, ``lambda_max_``,
    ``snr_``, ``rate_``, ``bound_``, ``n_iter_``, ``scenario_``.
    """

    def __init__(
        self,
        n_antennas=4,
        segment_length=10.0,
        min_spacing=0.5,
        wavelength=1.0,
        tx_power=1.0,
        noise_power=1.0,
        method="mm",
        tol=1e-6,
        max_iters=500,
        multi_start=1,
        random_state=0,
    ):
        self.n_antennas = n_antennas
        self.segment_length = segment_length
        self.min_spacing = min_spacing
        self.wavelength = wavelength
        self.tx_power = tx_power
        self.noise_power = noise_power
        self.method = method
        self.tol = tol
        self.max_iters = max_iters
        self.multi_start = multi_start
        self.random_state = random_state

    def _angles(self, X):
        angles = column_or_1d(np.asarray(X, dtype=float))
        if angles.size == 0:
            raise ValueError("at least one angle is required")
        return angles

    def fit(self, X, y=None):
        angles = self._angles(X)
        cfg = ScenarioConfig(
            n_antennas=self.n_antennas,
            angles=tuple(angles),
            segment_length=self.segment_length,
            min_spacing=self.min_spacing,
            wavelength=self.wavelength,
            tx_power=self.tx_power,
            noise_power=self.noise_power,
        )
        opts = MMOptions(
            tol=self.tol,
            max_iters=self.max_iters,
            multi_start=self.multi_start,
            rng_seed=self.random_state,
        )
        if self.method == "mm":
            r = mm_optimize(cfg, opts)
            x, w, lam, snr, rate = r.x_opt, r.w_opt, r.lambda_max, r.snr, r.rate
            n_iter = r.iterations
        elif self.method == "ao":
            b = ao_optimize(cfg, opts)
            x, w, lam, snr, rate = b.x, b.w, b.lambda_max, b.snr, b.rate
            n_iter = b.meta["outer_iterations"]
        elif self.method == "fpa":
            b = fpa_baseline(cfg)
            x, w, lam, snr, rate = b.x, b.w, b.lambda_max, b.snr, b.rate
            n_iter = 0
        elif self.method == "aps":
            b = aps_baseline(cfg)
            x, w, lam, snr, rate = b.x, b.w, b.lambda_max, b.snr, b.rate
            n_iter = 0
        else:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        self.scenario_ = cfg
        self.positions_ = x
        self.weights_ = w
        self.lambda_max_ = lam
        self.snr_ = snr
        self.rate_ = rate
        self.bound_ = upper_bound(cfg)
        self.n_iter_ = n_iter
        return self

    def predict(self, X):
        """Beam gain of the fitted array at each query angle."""
        self._check_fitted()
        angles = self._angles(X)
        return np.array(
            [beam_gain(self.positions_, self.weights_, t, self.wavelength) for t in angles]
        )

    def score(self, X, y=None):
        """Combined SNR toward the query angles (higher is better)."""
        return float(np.sum(self.predict(X)) / self.noise_power)

    def _check_fitted(self):
        if not hasattr(self, "positions_"):
            raise NotFittedError(
                "this AntennaArrayDesigner instance is not fitted yet; call fit first"
            )
