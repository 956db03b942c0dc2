"""Monotone surrogate-ascent optimizer for antenna positions.

The objective is the dominant eigenvalue of the steering Gram matrix.  Each
iteration freezes the dominant eigenvector at the current layout, which turns
the eigenvalue into a Rayleigh quadratic form that lower-bounds it everywhere
and touches it at the current point.  That form splits into a constant plus a
pairwise cosine coupling term; a second quadratic lower bound of the coupling
(gradient step with a curvature constant dominating its Hessian) is then
maximized exactly by projecting onto the spacing/segment constraints.  Both
bounds touch at the current layout, so the dominant eigenvalue can never
decrease along the iteration.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from .model import (
    ConfigError,
    build_gram,
    check_positions,
    effective_snr,
    optimal_beamformer,
    uniform_positions,
    upper_bound,
)

log = logging.getLogger(__name__)

# An ascent step below this is a fixed point of the update map; the objective
# cannot move further, so the solve stops without another eigen evaluation.
STEP_TOL = 1e-12


@dataclass(frozen=True)
class MMOptions:
    """Stopping and restart controls for mm_optimize."""

    tol: float = 1e-6
    max_iters: int = 500
    multi_start: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if not (self.tol > 0):
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.multi_start < 1:
            raise ConfigError(f"multi_start must be >= 1, got {self.multi_start}")


@dataclass(frozen=True)
class MMIterate:
    """State snapshot at one outer iteration."""

    k: int
    lambda_max: float
    x: np.ndarray
    grad_norm: float
    delta: float
    step_norm: float
    wall_time: float


@dataclass(frozen=True)
class MMTrace:
    iterates: tuple

    def __len__(self):
        return len(self.iterates)

    def __iter__(self):
        return iter(self.iterates)

    def lambda_values(self):
        return np.array([it.lambda_max for it in self.iterates])


@dataclass(frozen=True)
class SolveResult:
    """Final layout, weights and diagnostics of one optimization run."""

    x_opt: np.ndarray
    w_opt: np.ndarray
    snr: float
    rate: float
    lambda_max: float
    trace: MMTrace
    bound: float

    @property
    def iterations(self):
        return len(self.trace) - 1


def rayleigh_quotient(x, v_ref, cfg):
    """Quadratic form v_ref^H B(x) v_ref, via its real pair expansion.

    Splits into the diagonal contribution (every diagonal Gram entry equals
    the number of destinations) plus twice the pairwise coupling, which keeps
    the value exactly real.  For unit v_ref this lower-bounds the dominant
    eigenvalue of B(x) at every layout x.
    """
    o = np.asarray(v_ref, dtype=complex).reshape(-1)
    diag = cfg.n_angles * float(np.sum(np.abs(o) ** 2))
    return diag + 2.0 * pairwise_coupling(x, v_ref, cfg)


def pairwise_coupling(x, v_ref, cfg):
    """Real off-diagonal part of the reference quadratic form.

    Sum over antenna pairs i < j and destinations m of
    |o_i| |o_j| cos(phi_i - phi_j + k_m (x_j - x_i)) with o the reference
    vector components and k_m the spatial frequency of destination m.
    """
    xv = np.asarray(x, dtype=float).reshape(-1)
    o = np.asarray(v_ref, dtype=complex).reshape(-1)
    if xv.size < 2:
        return 0.0
    amp = np.abs(o)
    phase = np.angle(o)
    i_idx, j_idx = np.triu_indices(xv.size, k=1)
    weight = amp[i_idx] * amp[j_idx]
    base = phase[i_idx] - phase[j_idx]
    gap = xv[j_idx] - xv[i_idx]
    freqs = cfg.angular_frequencies()
    angles = base[None, :] + freqs[:, None] * gap[None, :]
    return float(np.sum(weight[None, :] * np.cos(angles)))


def coupling_gradient(x, v_ref, cfg):
    """Gradient of pairwise_coupling in the antenna positions.

    Component i sums sine terms against every other antenna; the j-above-i
    and j-below-i contributions fold into one signed matrix because the pair
    term is antisymmetric under swapping i and j.
    """
    xv = np.asarray(x, dtype=float).reshape(-1)
    o = np.asarray(v_ref, dtype=complex).reshape(-1)
    if xv.size < 2:
        return np.zeros(xv.size)
    amp = np.abs(o)
    phase = np.angle(o)
    weight = amp[:, None] * amp[None, :]
    dphase = phase[:, None] - phase[None, :]
    dx = xv[None, :] - xv[:, None]
    grad = np.zeros(xv.size)
    for km in cfg.angular_frequencies():
        grad += km * np.sum(weight * np.sin(dphase + km * dx), axis=1)
    return grad


def curvature_bound(v_ref, cfg):
    """Constant dominating the spectral norm of the coupling Hessian.

    Entrywise the Hessian is bounded by |o_i| |o_j| q with q the sum of
    squared spatial frequencies; through the Frobenius norm this yields
    q * sqrt(s2 * (s1^2 + s2)) with s1 = sum|o_i|, s2 = sum|o_i|^2.  The
    bound does not depend on the positions and is zero only when every
    destination sits broadside (all spatial frequencies vanish).
    """
    amp = np.abs(np.asarray(v_ref, dtype=complex).reshape(-1))
    q = float(np.sum(cfg.angular_frequencies() ** 2))
    s1 = float(np.sum(amp))
    s2 = float(np.sum(amp**2))
    return q * math.sqrt(s2 * (s1 * s1 + s2))


def _pava_nondecreasing(values):
    """Unweighted nondecreasing isotonic fit, pooling adjacent violators left
    to right."""
    means = []
    counts = []
    for val in values:
        means.append(float(val))
        counts.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            m2, c2 = means.pop(), counts.pop()
            m1, c1 = means.pop(), counts.pop()
            c = c1 + c2
            means.append((m1 * c1 + m2 * c2) / c)
            counts.append(c)
    return np.repeat(means, counts)


def project_positions(t, cfg):
    """Euclidean projection onto {x: adjacent gaps >= min_spacing, x in [0, L]}.

    Shifting coordinate n down by n*min_spacing turns the spacing constraints
    into plain monotonicity with one common box, where isotonic regression
    followed by clipping is the exact projection.
    """
    tv = np.asarray(t, dtype=float).reshape(-1)
    offsets = np.arange(tv.size) * cfg.min_spacing
    slack = cfg.segment_length - offsets[-1]
    y = _pava_nondecreasing(tv - offsets)
    return np.clip(y, 0.0, slack) + offsets


def solve_surrogate(x_k, grad, delta, cfg):
    """Exact maximizer of the quadratic surrogate around x_k.

    The surrogate is grad^T (x - x_k) - (delta/2) ||x - x_k||^2 up to a
    constant, so the maximizer is the projection of x_k + grad/delta onto the
    feasible set.  delta == 0 means the objective is locally flat and x_k is
    returned unchanged.
    """
    xv = np.asarray(x_k, dtype=float).reshape(-1)
    if delta < 0:
        raise ConfigError(f"delta must be nonnegative, got {delta}")
    if delta == 0.0:
        return xv.copy()
    g = np.asarray(grad, dtype=float).reshape(-1)
    return project_positions(xv + g / delta, cfg)


def _random_feasible(cfg, rng):
    """Uniform draw from the feasible polytope via the order-statistics map."""
    slack = cfg.segment_length - (cfg.n_antennas - 1) * cfg.min_spacing
    y = np.sort(rng.uniform(0.0, slack, size=cfg.n_antennas))
    return check_positions(y + np.arange(cfg.n_antennas) * cfg.min_spacing, cfg)


def start_layouts(cfg, opts):
    """Initial layouts for a multi-start solve: the evenly spread layout
    first, then opts.multi_start - 1 seeded random feasible draws."""
    starts = [uniform_positions(cfg)]
    if opts.multi_start > 1:
        rng = np.random.default_rng(opts.rng_seed)
        starts += [_random_feasible(cfg, rng) for _ in range(opts.multi_start - 1)]
    return starts


def _ascend(cfg, x0, opts):
    t_start = time.perf_counter()
    x = np.asarray(x0, dtype=float).reshape(-1)
    gram = build_gram(x, cfg)
    rows = []
    lam_prev = None
    k = 0
    while True:
        lam = gram.lambda_max
        now = time.perf_counter() - t_start
        converged = lam_prev is not None and abs(lam - lam_prev) <= opts.tol * max(
            1.0, abs(lam_prev)
        )
        if converged or k >= opts.max_iters:
            rows.append(MMIterate(k, lam, x, 0.0, 0.0, 0.0, now))
            break
        grad = coupling_gradient(x, gram.v_max, cfg)
        delta = curvature_bound(gram.v_max, cfg)
        grad_norm = float(np.linalg.norm(grad))
        if delta == 0.0:
            log.warning(
                "all destinations broadside: the objective does not depend on positions"
            )
            rows.append(MMIterate(k, lam, x, grad_norm, 0.0, 0.0, now))
            break
        x_next = solve_surrogate(x, grad, delta, cfg)
        step = float(np.linalg.norm(x_next - x))
        rows.append(MMIterate(k, lam, x, grad_norm, float(delta), step, now))
        if step <= STEP_TOL:
            break
        x = x_next
        gram = build_gram(x, cfg)
        lam_prev = lam
        k += 1
    w = optimal_beamformer(x, cfg, gram=gram)
    snr = effective_snr(x, w, cfg)
    return SolveResult(
        x_opt=check_positions(x, cfg),
        w_opt=w,
        snr=snr,
        rate=math.log2(1.0 + snr),
        lambda_max=gram.lambda_max,
        trace=MMTrace(tuple(rows)),
        bound=upper_bound(cfg),
    )


def mm_optimize(cfg, opts=None):
    """Optimize antenna positions and transmit weights for the scenario.

    Runs the monotone surrogate ascent from the evenly spread layout, stopping
    once the relative objective change drops below opts.tol, the update map
    reaches a fixed point, or opts.max_iters is hit.  With multi_start > 1,
    additional seeded random feasible layouts are tried and the best final
    objective wins (ties keep the earliest start).  The returned weights are
    the power-scaled dominant eigenvector at the final layout.
    """
    opts = MMOptions() if opts is None else opts
    best = None
    for x0 in start_layouts(cfg, opts):
        result = _ascend(cfg, x0, opts)
        if best is None or result.lambda_max > best.lambda_max:
            best = result
    return best
