"""Scenario definition and linear-array response model.

Working units are wavelength-normalized metres: the default wavelength is 1
and the default minimum antenna spacing is half a wavelength.  Angles are
radians in [0, pi); powers are linear scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import principal_eigenpair

POSITION_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid scenario or experiment configuration."""


class ConstraintViolationError(ValueError):
    """A position vector violates the spacing or segment constraints.

    ``index`` is the offending antenna index.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class ScenarioConfig:
    """One placement problem instance.

    n_antennas      number of movable antennas on the segment
    angles          destination angles in radians, each in [0, pi)
    segment_length  length of the placement segment
    min_spacing     minimum distance between adjacent antennas
    wavelength      carrier wavelength
    tx_power        transmit power budget (linear)
    noise_power     receiver noise power (linear)

    Instances that cannot host ``n_antennas`` at ``min_spacing`` are rejected
    here rather than at solve time.
    """

    n_antennas: int
    angles: tuple
    segment_length: float
    min_spacing: float = 0.5
    wavelength: float = 1.0
    tx_power: float = 1.0
    noise_power: float = 1.0

    def __post_init__(self):
        object.__setattr__(
            self, "angles", tuple(float(a) for a in np.atleast_1d(self.angles))
        )
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 1:
            raise ConfigError(f"n_antennas must be a positive integer, got {self.n_antennas}")
        object.__setattr__(self, "n_antennas", int(self.n_antennas))
        if len(self.angles) < 1:
            raise ConfigError("at least one destination angle is required")
        for m, theta in enumerate(self.angles):
            if not (math.isfinite(theta) and 0.0 <= theta < math.pi):
                raise ConfigError(f"angles[{m}] = {theta} is outside [0, pi)")
        if not (self.wavelength > 0):
            raise ConfigError(f"wavelength must be positive, got {self.wavelength}")
        if not (self.min_spacing > 0):
            raise ConfigError(f"min_spacing must be positive, got {self.min_spacing}")
        if not (self.segment_length >= 0):
            raise ConfigError(f"segment_length must be >= 0, got {self.segment_length}")
        if not (self.tx_power > 0):
            raise ConfigError(f"tx_power must be positive, got {self.tx_power}")
        if not (self.noise_power > 0):
            raise ConfigError(f"noise_power must be positive, got {self.noise_power}")
        needed = (self.n_antennas - 1) * self.min_spacing
        if self.segment_length < needed:
            raise ConfigError(
                f"segment_length {self.segment_length} cannot host {self.n_antennas} "
                f"antennas at spacing {self.min_spacing} (needs >= {needed})"
            )

    @property
    def n_angles(self):
        return len(self.angles)

    def angular_frequencies(self):
        """Spatial frequencies 2*pi*cos(theta_m)/wavelength, shape (M,)."""
        return 2.0 * np.pi * np.cos(np.asarray(self.angles)) / self.wavelength


def check_positions(x, cfg, tol=POSITION_TOL):
    """Validate antenna positions against cfg; return them as a read-only array.

    Raises ConstraintViolationError naming the first offending antenna index.
    """
    xv = np.asarray(x, dtype=float).reshape(-1)
    if xv.size != cfg.n_antennas:
        raise ConfigError(f"expected {cfg.n_antennas} positions, got {xv.size}")
    for n, val in enumerate(xv):
        if not math.isfinite(val):
            raise ConstraintViolationError(f"x[{n}] = {val} is not finite", n)
    if xv[0] < -tol:
        raise ConstraintViolationError(f"x[0] = {xv[0]} lies below the segment start", 0)
    if xv[-1] > cfg.segment_length + tol:
        raise ConstraintViolationError(
            f"x[{xv.size - 1}] = {xv[-1]} exceeds the segment length {cfg.segment_length}",
            xv.size - 1,
        )
    gaps = np.diff(xv)
    bad = np.nonzero(gaps < cfg.min_spacing - tol)[0]
    if bad.size:
        n = int(bad[0]) + 1
        raise ConstraintViolationError(
            f"gap x[{n}] - x[{n - 1}] = {gaps[n - 1]} is below min_spacing {cfg.min_spacing}",
            n,
        )
    out = xv.copy()
    out.flags.writeable = False
    return out


def uniform_positions(cfg):
    """Evenly spread layout over the whole segment (midpoint for one antenna)."""
    if cfg.n_antennas == 1:
        x = np.array([cfg.segment_length / 2.0])
    else:
        x = np.linspace(0.0, cfg.segment_length, cfg.n_antennas)
    return check_positions(x, cfg)


def fpa_positions(cfg):
    """Conventional fixed layout: consecutive antennas at min_spacing from 0."""
    return check_positions(np.arange(cfg.n_antennas) * cfg.min_spacing, cfg)


def steering_vector(x, theta, wavelength=1.0):
    """Array response toward theta: entry n is exp(j*2*pi*x_n*cos(theta)/wavelength)."""
    if not (wavelength > 0):
        raise ConfigError(f"wavelength must be positive, got {wavelength}")
    xv = np.asarray(x, dtype=float).reshape(-1)
    return np.exp(2j * np.pi * math.cos(theta) / wavelength * xv)


def steering_matrix(x, cfg):
    """Response columns stacked over every destination angle, shape (N, M)."""
    xv = np.asarray(x, dtype=float).reshape(-1)
    return np.exp(1j * np.outer(xv, cfg.angular_frequencies()))


@dataclass(frozen=True)
class ChannelGram:
    """Hermitian Gram matrix of the steering columns plus its dominant eigenpair.

    The eigen data is computed eagerly at construction: every consumer needs it.
    """

    matrix: np.ndarray
    lambda_max: float
    v_max: np.ndarray


def build_gram(x, cfg):
    """Gram matrix of the steering columns at layout x.

    Entry (i, j) is sum_m exp(j*2*pi*(x_i - x_j)*cos(theta_m)/wavelength), so
    the diagonal is the number of destinations and the matrix depends only on
    position differences.
    """
    xv = check_positions(x, cfg)
    a = steering_matrix(xv, cfg)
    b = a @ a.conj().T
    eig = principal_eigenpair(b)
    b.flags.writeable = False
    return ChannelGram(matrix=b, lambda_max=eig.value, v_max=eig.vector)


def beam_gain(x, w, theta, wavelength=1.0):
    """Radiated power |a(x, theta)^H w|^2 of the array with weight vector w."""
    a = steering_vector(x, theta, wavelength)
    return float(abs(np.vdot(a, np.asarray(w).reshape(-1))) ** 2)


def effective_snr(x, w, cfg):
    """Combined received SNR across all destinations: sum_m |a_m^H w|^2 / noise."""
    a = steering_matrix(x, cfg)
    projections = a.conj().T @ np.asarray(w).reshape(-1)
    return float(np.sum(np.abs(projections) ** 2) / cfg.noise_power)


def achievable_rate(x, w, cfg):
    """log2(1 + SNR) for the layout/weights pair."""
    return math.log2(1.0 + effective_snr(x, w, cfg))


def optimal_beamformer(x, cfg, gram=None):
    """Power-scaled dominant eigenvector of the Gram matrix (phase-gauged).

    Closed-form optimum of the weight subproblem for a fixed layout; the
    resulting SNR equals tx_power * lambda_max / noise_power.
    """
    if gram is None:
        gram = build_gram(x, cfg)
    return math.sqrt(cfg.tx_power) * gram.v_max


def upper_bound(cfg):
    """Ceiling on the dominant Gram eigenvalue: n_antennas * n_angles."""
    return float(cfg.n_antennas * cfg.n_angles)


def snr_upper_bound(cfg):
    """SNR-scale version of upper_bound."""
    return cfg.tx_power * upper_bound(cfg) / cfg.noise_power
