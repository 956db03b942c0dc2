"""Benchmark placement schemes: fixed array, discrete grid selection,
alternating optimization, and an exhaustive grid oracle for small arrays."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    ConfigError,
    build_gram,
    check_positions,
    effective_snr,
    fpa_positions,
    optimal_beamformer,
)
from .optimizer import MMOptions, project_positions, start_layouts

EXHAUSTIVE_LIMIT = 200_000
BATCH = 20_000
ARMIJO_C = 1e-4
MAX_INNER_STEPS = 200


@dataclass(frozen=True)
class BaselineResult:
    """Solved layout/weights of one benchmark scheme plus diagnostics."""

    scheme: str
    x: np.ndarray
    w: np.ndarray
    lambda_max: float
    snr: float
    rate: float
    meta: dict


def _finish(scheme, x, cfg, meta):
    gram = build_gram(x, cfg)
    w = optimal_beamformer(x, cfg, gram=gram)
    snr = effective_snr(x, w, cfg)
    return BaselineResult(
        scheme=scheme,
        x=check_positions(x, cfg),
        w=w,
        lambda_max=gram.lambda_max,
        snr=snr,
        rate=math.log2(1.0 + snr),
        meta=meta,
    )


def _batch_lambda_max(positions, cfg):
    """Dominant Gram eigenvalue for a batch of layouts, shape (C, N) -> (C,)."""
    e = np.exp(1j * positions[:, :, None] * cfg.angular_frequencies()[None, None, :])
    grams = np.einsum("cim,cjm->cij", e, e.conj())
    return np.linalg.eigvalsh(grams)[:, -1].real


def fpa_baseline(cfg):
    """Fixed array at minimum spacing from the segment origin."""
    return _finish("FPA", fpa_positions(cfg), cfg, {})


def _selection_lambda(grid, indices, cfg):
    return float(_batch_lambda_max(grid[np.asarray(indices)][None, :], cfg)[0])


def _greedy_seed(grid, n, cfg):
    """Grow a selection one grid point at a time, best objective first."""
    selected = []
    for _ in range(n):
        best_lam, best_p = -math.inf, None
        for p in range(grid.size):
            if p in selected:
                continue
            lam = _selection_lambda(grid, sorted(selected + [p]), cfg)
            if lam > best_lam:
                best_lam, best_p = lam, p
        selected.append(best_p)
    return sorted(selected)


def _swap_local_search(grid, selected, cfg):
    """Replace one selected point by one unselected point while it helps."""
    selected = list(selected)
    current = _selection_lambda(grid, selected, cfg)
    evals = 0
    improved = True
    while improved:
        improved = False
        best_lam, best_sel = current, None
        for out_pos in range(len(selected)):
            for p in range(grid.size):
                if p in selected:
                    continue
                cand = sorted(selected[:out_pos] + selected[out_pos + 1 :] + [p])
                lam = _selection_lambda(grid, cand, cfg)
                evals += 1
                if lam > best_lam:
                    best_lam, best_sel = lam, cand
        if best_sel is not None:
            selected, current = best_sel, best_lam
            improved = True
    return selected, current, evals


def aps_baseline(cfg):
    """Pick antenna positions from the uniform min_spacing grid on the segment.

    Grid points are min_spacing apart, so any subset taken in index order is
    feasible automatically.  The subset maximizing the dominant Gram
    eigenvalue is found exhaustively while the candidate count stays within
    EXHAUSTIVE_LIMIT; beyond that, greedy seeding plus pairwise-swap local
    search until no improving swap remains.
    """
    n_points = math.floor(cfg.segment_length / cfg.min_spacing + 1e-9) + 1
    grid = np.arange(n_points) * cfg.min_spacing
    n = cfg.n_antennas
    if grid.size < n:
        raise ConfigError(
            f"selection grid has {grid.size} points, fewer than {n} antennas"
        )
    total = math.comb(grid.size, n)
    if total <= EXHAUSTIVE_LIMIT:
        best_lam, best_x = -math.inf, None
        combos = itertools.combinations(range(grid.size), n)
        while True:
            chunk = list(itertools.islice(combos, BATCH))
            if not chunk:
                break
            pos = grid[np.array(chunk)]
            lams = _batch_lambda_max(pos, cfg)
            i = int(np.argmax(lams))
            if lams[i] > best_lam:
                best_lam, best_x = float(lams[i]), pos[i]
        meta = {"strategy": "exhaustive", "grid_size": int(grid.size), "candidates": total}
        return _finish("APS", best_x, cfg, meta)
    selected = _greedy_seed(grid, n, cfg)
    selected, _, evals = _swap_local_search(grid, selected, cfg)
    meta = {
        "strategy": "local_search",
        "grid_size": int(grid.size),
        "candidates": total,
        "swap_evaluations": evals,
    }
    return _finish("APS", grid[np.array(selected)], cfg, meta)


def _snr_gradient(x, w, cfg):
    """Gradient of the fixed-weight SNR in the antenna positions."""
    xv = np.asarray(x, dtype=float).reshape(-1)
    wv = np.asarray(w, dtype=complex).reshape(-1)
    grad = np.zeros(xv.size)
    for km in cfg.angular_frequencies():
        e = np.exp(1j * km * xv)
        proj = np.vdot(e, wv)  # a^H w
        grad += 2.0 * km * np.imag(np.conj(proj) * np.conj(e) * wv)
    return grad / cfg.noise_power


def _ascend_fixed_weights(x, w, cfg, tol):
    """Projected gradient ascent on the fixed-weight SNR with Armijo
    backtracking from unit step."""
    x = np.asarray(x, dtype=float).reshape(-1)
    g = effective_snr(x, w, cfg)
    steps = 0
    for steps in range(1, MAX_INNER_STEPS + 1):
        grad = _snr_gradient(x, w, cfg)
        accepted = None
        t = 1.0
        while t >= 1e-12:
            cand = project_positions(x + t * grad, cfg)
            g_cand = effective_snr(cand, w, cfg)
            if g_cand >= g + ARMIJO_C * float(np.dot(grad, cand - x)):
                accepted = (cand, g_cand)
                break
            t *= 0.5
        if accepted is None:
            break
        x_new, g_new = accepted
        done = abs(g_new - g) <= tol * max(1.0, abs(g))
        x, g = x_new, g_new
        if done:
            break
    return x, steps


def _ao_single(cfg, x0, opts):
    x = np.asarray(x0, dtype=float).reshape(-1)
    gram = build_gram(x, cfg)
    lam_trace = [gram.lambda_max]
    snr_prev = cfg.tx_power * gram.lambda_max / cfg.noise_power
    inner_total = 0
    outer = 0
    for outer in range(1, opts.max_iters + 1):
        w = optimal_beamformer(x, cfg, gram=gram)
        x, inner = _ascend_fixed_weights(x, w, cfg, opts.tol)
        inner_total += inner
        gram = build_gram(x, cfg)
        lam_trace.append(gram.lambda_max)
        snr = cfg.tx_power * gram.lambda_max / cfg.noise_power
        if abs(snr - snr_prev) <= opts.tol * max(1.0, abs(snr_prev)):
            break
        snr_prev = snr
    meta = {
        "outer_iterations": outer,
        "inner_steps": inner_total,
        "lambda_trace": [float(v) for v in lam_trace],
    }
    return _finish("AO", x, cfg, meta)


def ao_optimize(cfg, opts=None):
    """Alternate closed-form weights with projected-gradient position updates.

    The weight step for a fixed layout is the power-scaled dominant
    eigenvector; the position step climbs the fixed-weight SNR by projected
    gradient ascent.  The outer objective (weight-optimal SNR at the current
    layout) is monotone: the inner ascent never lowers the fixed-weight SNR
    and re-optimizing the weights can only help.  opts.multi_start restarts
    from seeded random layouts exactly as mm_optimize does.
    """
    opts = MMOptions() if opts is None else opts
    best = None
    for x0 in start_layouts(cfg, opts):
        result = _ao_single(cfg, x0, opts)
        if best is None or result.lambda_max > best.lambda_max:
            best = result
    return best


def grid_oracle(cfg, step):
    """Exhaustive search over a step-discretized feasible set.

    The first antenna is pinned at 0, which loses nothing because the Gram
    matrix only sees position differences.  Supports n_antennas <= 3 only;
    the candidate count explodes combinatorially beyond that.
    """
    if cfg.n_antennas > 3:
        raise ConfigError(
            "grid_oracle supports n_antennas <= 3; use mm_optimize for larger arrays"
        )
    if not (0 < step <= cfg.min_spacing / 4):
        raise ConfigError(
            f"step must lie in (0, min_spacing/4 = {cfg.min_spacing / 4}], got {step}"
        )
    gap_idx = math.ceil(cfg.min_spacing / step - 1e-9)
    top_idx = math.floor(cfg.segment_length / step + 1e-9)
    if cfg.n_antennas == 1:
        best_x = np.array([0.0])
        count = 1
    elif cfg.n_antennas == 2:
        i2 = np.arange(gap_idx, top_idx + 1)
        pos = np.column_stack([np.zeros(i2.size), i2 * step])
        lams = _batch_lambda_max(pos, cfg)
        best_x = pos[int(np.argmax(lams))]
        count = int(i2.size)
    else:
        best_lam, best_x = -math.inf, None
        count = 0
        for i2 in range(gap_idx, top_idx - gap_idx + 1):
            i3 = np.arange(i2 + gap_idx, top_idx + 1)
            pos = np.column_stack(
                [np.zeros(i3.size), np.full(i3.size, i2 * step), i3 * step]
            )
            lams = _batch_lambda_max(pos, cfg)
            count += int(i3.size)
            i = int(np.argmax(lams))
            if lams[i] > best_lam:
                best_lam, best_x = float(lams[i]), pos[i]
    meta = {"step": float(step), "points_evaluated": count}
    return _finish("ORACLE", best_x, cfg, meta)
