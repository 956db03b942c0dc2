"""End-to-end acceptance gate.

Each test checks one shipping criterion at its stated tolerance and prints a
single [PASS]/[FAIL] line (visible with `pytest -s` or in failure output).
"""

import math
import time

import numpy as np
import pytest

from ma_array_opt import (
    MMOptions,
    ScenarioConfig,
    ao_optimize,
    aps_baseline,
    beam_gain,
    build_gram,
    check_positions,
    coupling_gradient,
    curvature_bound,
    effective_snr,
    fpa_baseline,
    grid_oracle,
    mm_optimize,
    optimal_beamformer,
    pairwise_coupling,
    rayleigh_quotient,
    upper_bound,
)
from ma_array_opt.harness import (
    parse_experiment,
    rows_to_csv,
    rows_to_json,
    run_convergence,
    run_rate_sweep,
)
from oracles import fd_gradient, fd_hessian, random_feasible_positions, random_unit_complex

PI = math.pi


def _report(num, desc, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    line = f"[{tag}] acceptance {num:02d}: {desc}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def random_instance(rng):
    n = int(rng.integers(2, 9))
    m = int(rng.integers(1, 5))
    angles = tuple(rng.uniform(0.0, PI - 1e-6, size=m))
    low = max(2.0, (n - 1) * 0.5)
    length = float(rng.uniform(low, 15.0))
    return ScenarioConfig(n_antennas=n, angles=angles, segment_length=length)


def test_01_upper_bound_attainment():
    cfg = ScenarioConfig(n_antennas=3, angles=(PI / 8, PI / 4), segment_length=20.0)
    t0 = time.perf_counter()
    res = mm_optimize(cfg)
    elapsed = time.perf_counter() - t0
    ok = res.lambda_max >= 5.7 and elapsed < 5.0
    _report(
        1,
        "long-segment objective reaches 0.95*bound within 5 s",
        ok,
        f"lambda_max={res.lambda_max:.4f}, elapsed={elapsed:.2f}s",
    )


def test_02_monotone_feasible_ascent():
    rng = np.random.default_rng(20240901)
    worst = math.inf
    for _ in range(50):
        cfg = random_instance(rng)
        res = mm_optimize(cfg)
        lams = res.trace.lambda_values()
        if lams.size > 1:
            worst = min(worst, float(np.min(np.diff(lams))))
        for it in res.trace:
            check_positions(it.x, cfg)
    ok = worst == math.inf or worst >= -1e-9
    _report(2, "50 seeded instances: non-decreasing objective, feasible iterates", ok,
            f"worst step delta={worst:.3e}")


def test_03_gradient_correctness():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        cfg = random_instance(rng)
        x = random_feasible_positions(cfg, rng)
        v = random_unit_complex(cfg.n_antennas, rng)
        grad = coupling_gradient(x, v, cfg)
        ref = fd_gradient(lambda z: pairwise_coupling(z, v, cfg), x, h=1e-6)
        rel = float(np.linalg.norm(grad - ref) / max(np.linalg.norm(ref), 1e-9))
        worst = max(worst, rel)
    ok = worst < 1e-6
    _report(3, "analytic coupling gradient matches central differences", ok,
            f"worst rel err={worst:.3e}")


def test_04_curvature_bound_validity():
    rng = np.random.default_rng(11)
    margin = math.inf
    for _ in range(10):
        cfg = random_instance(rng)
        v = random_unit_complex(cfg.n_antennas, rng)
        delta = curvature_bound(v, cfg)
        for _ in range(20):
            x = random_feasible_positions(cfg, rng)
            hess = fd_hessian(lambda z: pairwise_coupling(z, v, cfg), x, h=1e-4)
            top = float(np.max(np.linalg.eigvalsh(0.5 * (hess + hess.T))))
            margin = min(margin, delta - top)
    ok = margin >= 0.0
    _report(4, "curvature constant dominates the coupling Hessian", ok,
            f"worst margin={margin:.3e}")


def test_05_minorization_chain():
    rng = np.random.default_rng(13)
    ok = True
    detail = ""
    for _ in range(5):
        cfg = random_instance(rng)
        x_k = random_feasible_positions(cfg, rng)
        gram_k = build_gram(x_k, cfg)
        v_k = gram_k.v_max
        grad = coupling_gradient(x_k, v_k, cfg)
        delta = curvature_bound(v_k, cfg)
        f2_k = pairwise_coupling(x_k, v_k, cfg)

        def f3(z):
            d = np.asarray(z) - x_k
            return f2_k + float(grad @ d) - 0.5 * delta * float(d @ d)

        if abs(f3(x_k) - f2_k) > 1e-10:
            ok, detail = False, "surrogate does not touch at expansion point"
            break
        if abs(rayleigh_quotient(x_k, v_k, cfg) - gram_k.lambda_max) > 1e-8:
            ok, detail = False, "quadratic form misses objective at expansion point"
            break
        for _ in range(100):
            z = random_feasible_positions(cfg, rng)
            lam_z = build_gram(z, cfg).lambda_max
            f1_z = rayleigh_quotient(z, v_k, cfg)
            f2_z = pairwise_coupling(z, v_k, cfg)
            if lam_z < f1_z - 1e-9:
                ok, detail = False, "objective below quadratic form"
                break
            if abs(f1_z - (cfg.n_angles + 2.0 * f2_z)) > 1e-10:
                ok, detail = False, "diagonal/coupling identity broken"
                break
            if f2_z < f3(z) - 1e-9:
                ok, detail = False, "coupling below surrogate"
                break
        if not ok:
            break
    _report(5, "two-level minorization chain holds at random layouts", ok, detail)


def test_06_oracle_equivalence_small_array():
    cfg = ScenarioConfig(n_antennas=2, angles=(PI / 8, PI / 4), segment_length=5.0)
    t0 = time.perf_counter()
    oracle = grid_oracle(cfg, 0.005)
    res = mm_optimize(cfg, MMOptions(multi_start=8))
    elapsed = time.perf_counter() - t0
    ok = res.lambda_max >= 0.98 * oracle.lambda_max and elapsed < 30.0
    _report(6, "restarted solve matches the exhaustive grid optimum", ok,
            f"mm={res.lambda_max:.4f}, oracle={oracle.lambda_max:.4f}, elapsed={elapsed:.1f}s")


@pytest.fixture(scope="module")
def sweep_results():
    angles = (PI / 8, PI / 4, 3 * PI / 4)
    opts = MMOptions(multi_start=16)
    results = {}
    for n in range(3, 7):
        cfg = ScenarioConfig(
            n_antennas=n, angles=angles, segment_length=8.0, tx_power=100.0
        )
        results[n] = {
            "MM": mm_optimize(cfg, opts).rate,
            "AO": ao_optimize(cfg, opts).rate,
            "APS": aps_baseline(cfg).rate,
            "FPA": fpa_baseline(cfg).rate,
        }
    return results


def test_07_scheme_ordering(sweep_results):
    ok = True
    for n, by in sweep_results.items():
        if not (by["MM"] >= by["APS"] - 1e-6 and by["APS"] >= by["FPA"] - 1e-6):
            ok = False
    for scheme in ("MM", "AO", "APS", "FPA"):
        rates = [sweep_results[n][scheme] for n in sorted(sweep_results)]
        if not all(b >= a - 1e-6 for a, b in zip(rates, rates[1:])):
            ok = False
    detail = "; ".join(
        f"N={n}: MM={by['MM']:.3f} APS={by['APS']:.3f} FPA={by['FPA']:.3f}"
        for n, by in sorted(sweep_results.items())
    )
    _report(7, "movable >= grid-selected >= fixed, rates non-decreasing in N", ok, detail)


def test_08_alternating_matches_joint(sweep_results):
    worst = 0.0
    for by in sweep_results.values():
        worst = max(worst, abs(by["MM"] - by["AO"]) / by["MM"])
    ok = worst <= 0.02
    _report(8, "alternating optimization within 2% of the joint solve", ok,
            f"worst rel gap={worst:.4f}")


def test_09_closed_form_beamformer_consistency():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(50):
        cfg = random_instance(rng)
        x = random_feasible_positions(cfg, rng)
        gram = build_gram(x, cfg)
        w = optimal_beamformer(x, cfg, gram=gram)
        snr = effective_snr(x, w, cfg)
        expected = cfg.tx_power * gram.lambda_max / cfg.noise_power
        worst = max(worst, abs(snr - expected) / expected)
    ok = worst <= 1e-8
    _report(9, "per-destination gain sum equals the eigenvalue SNR", ok,
            f"worst rel err={worst:.3e}")


def test_10_beam_gain_dominance():
    cfg = ScenarioConfig(n_antennas=3, angles=(PI / 8, PI / 4), segment_length=10.0,
                         tx_power=1.0)
    mm = mm_optimize(cfg)
    fpa = fpa_baseline(cfg)
    gains = []
    ok = True
    for theta in cfg.angles:
        g_mm = beam_gain(mm.x_opt, mm.w_opt, theta, cfg.wavelength)
        g_fpa = beam_gain(fpa.x, fpa.w, theta, cfg.wavelength)
        gains.append(f"theta={theta:.3f}: {g_mm:.3f} vs {g_fpa:.3f}")
        if g_mm < g_fpa:
            ok = False
    _report(10, "movable array beam gain dominates fixed at both destinations", ok,
            "; ".join(gains))


def test_11_trivial_global_cases():
    ok = True
    details = []
    for n, length in [(2, 4.0), (5, 7.0), (8, 12.0)]:
        cfg = ScenarioConfig(n_antennas=n, angles=(0.9,), segment_length=length)
        res = mm_optimize(cfg)
        if res.iterations != 0 or abs(res.lambda_max - n) > 1e-9:
            ok = False
        details.append(f"M=1,N={n}: lam={res.lambda_max:.10f}, iters={res.iterations}")
    for m in (1, 2, 4):
        angles = tuple(0.3 + 0.5 * i for i in range(m))
        cfg = ScenarioConfig(n_antennas=1, angles=angles, segment_length=3.0)
        res = mm_optimize(cfg)
        if abs(res.lambda_max - m) > 1e-9:
            ok = False
        details.append(f"N=1,M={m}: lam={res.lambda_max:.10f}")
    _report(11, "single-destination and single-antenna cases are exact", ok,
            "; ".join(details))


def test_12_deterministic_outputs():
    doc = {
        "n_antennas": 3,
        "angles": [PI / 8, PI / 4],
        "segment_length": 6.0,
        "L_values": [2.0, 6.0],
        "N_values": [2, 3],
        "seed": 11,
        "multi_start": 3,
    }
    conv_spec = parse_experiment(dict(doc), kind="convergence")
    sweep_spec = parse_experiment(dict(doc), kind="sweep-n")
    csv_a = rows_to_csv(run_convergence(conv_spec))
    csv_b = rows_to_csv(run_convergence(conv_spec))
    json_a = rows_to_json(run_rate_sweep(sweep_spec))
    json_b = rows_to_json(run_rate_sweep(sweep_spec))
    ok = csv_a == csv_b and json_a == json_b
    _report(12, "identical config and seed give byte-identical CSV/JSON", ok,
            f"csv bytes={len(csv_a)}, json bytes={len(json_a)}")
