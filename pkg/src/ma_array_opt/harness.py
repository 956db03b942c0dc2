"""Experiment drivers, JSON config ingestion, and CSV/JSON result emission.

All drivers return flat ResultRow lists in deterministic order; the meaning of
the value column depends on the experiment kind (dominant eigenvalue for
solve/convergence/baselines, beam gain for beampattern, achievable rate for
sweep-n).  Running the same config and seed twice produces byte-identical
output files.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .baselines import ao_optimize, aps_baseline, fpa_baseline, grid_oracle
from .model import (
    ConfigError,
    ScenarioConfig,
    beam_gain,
    snr_upper_bound,
    upper_bound,
)
from .optimizer import MMOptions, mm_optimize

CSV_VERSION = "# ma-array-opt v1"
CSV_HEADER = "experiment,scheme,N,M,L,seed,point,value"

KINDS = ("solve", "convergence", "beampattern", "sweep-n", "baselines")
ALGORITHMS = ("MM", "AO", "FPA", "APS", "ORACLE", "BOUND")
DEFAULT_ALGOS = {
    "solve": ("MM",),
    "convergence": ("MM", "AO", "FPA", "BOUND"),
    "beampattern": ("MM", "FPA"),
    "sweep-n": ("MM", "AO", "FPA", "APS", "BOUND"),
    "baselines": ("FPA", "APS", "AO"),
}

_SCENARIO_KEYS = {
    "n_antennas",
    "angles",
    "segment_length",
    "min_spacing",
    "wavelength",
    "tx_power",
    "tx_power_db",
    "noise_power",
}
_EXPERIMENT_KEYS = {
    "kind",
    "algorithms",
    "L_values",
    "N_values",
    "theta_grid",
    "tol",
    "max_iters",
    "multi_start",
    "seed",
    "oracle_step",
    "out",
}


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(value):
    return 10.0 * math.log10(value)


def _fmt(v):
    return format(float(v), ".12g")


@dataclass(frozen=True)
class ResultRow:
    """One flat output record; x/w are attached only for JSON emission."""

    experiment: str
    scheme: str
    n: int
    m: int
    l: float
    seed: int
    point: float
    value: float
    x: tuple = None
    w: tuple = None

    def csv_line(self):
        return ",".join(
            [
                self.experiment,
                self.scheme,
                str(self.n),
                str(self.m),
                _fmt(self.l),
                str(self.seed),
                _fmt(self.point),
                _fmt(self.value),
            ]
        )

    def to_json_dict(self):
        doc = {
            "experiment": self.experiment,
            "scheme": self.scheme,
            "N": self.n,
            "M": self.m,
            "L": self.l,
            "seed": self.seed,
            "point": self.point,
            "value": self.value,
        }
        if self.x is not None:
            doc["x"] = list(self.x)
        if self.w is not None:
            doc["w"] = [[re, im] for re, im in self.w]
        return doc


@dataclass(frozen=True)
class ExperimentSpec:
    """Parsed experiment: scenario, sweep parameters, schemes and options."""

    kind: str
    base: ScenarioConfig
    opts: MMOptions
    algorithms: tuple
    l_values: tuple
    n_values: tuple
    theta_grid: tuple
    oracle_step: float
    out: str = None


def default_theta_grid():
    """Beam pattern sampling grid: 0 to 1 rad in steps of 0.002."""
    return tuple(np.linspace(0.0, 1.0, 501))


def load_config(path):
    """Read a JSON config document, surfacing I/O and syntax errors as config
    errors with the path attached."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return doc


def parse_experiment(doc, kind=None, **overrides):
    """Build an ExperimentSpec from a config dict plus CLI overrides.

    Unknown fields are rejected by name.  Transmit power is given either
    linearly (tx_power) or in dB (tx_power_db, converted once here).
    """
    unknown = set(doc) - _SCENARIO_KEYS - _EXPERIMENT_KEYS
    if unknown:
        raise ConfigError(f"unknown config field '{sorted(unknown)[0]}'")
    for key in ("n_antennas", "angles", "segment_length"):
        if key not in doc:
            raise ConfigError(f"missing required config field '{key}'")
    if "tx_power" in doc and "tx_power_db" in doc:
        raise ConfigError("give either 'tx_power' or 'tx_power_db', not both")
    scenario_kwargs = {
        "n_antennas": doc["n_antennas"],
        "angles": doc["angles"],
        "segment_length": doc["segment_length"],
    }
    for key in ("min_spacing", "wavelength", "noise_power"):
        if key in doc:
            scenario_kwargs[key] = doc[key]
    if "tx_power_db" in doc:
        scenario_kwargs["tx_power"] = db_to_linear(float(doc["tx_power_db"]))
    elif "tx_power" in doc:
        scenario_kwargs["tx_power"] = doc["tx_power"]
    base = ScenarioConfig(**scenario_kwargs)

    kind = kind or doc.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")

    def picked(key, default):
        if overrides.get(key) is not None:
            return overrides[key]
        return doc.get(key, default)

    algorithms = picked("algorithms", DEFAULT_ALGOS[kind])
    if isinstance(algorithms, str):
        algorithms = [a.strip() for a in algorithms.split(",") if a.strip()]
    algorithms = tuple(str(a).upper() for a in algorithms)
    for algo in algorithms:
        if algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm '{algo}' (choose from {ALGORITHMS})")
    if not algorithms:
        raise ConfigError("algorithms list must be non-empty")

    opts = MMOptions(
        tol=float(picked("tol", 1e-6)),
        max_iters=int(picked("max_iters", 500)),
        multi_start=int(picked("multi_start", 1)),
        rng_seed=int(picked("seed", 0)),
    )

    l_values = tuple(float(v) for v in doc.get("L_values", (base.segment_length,)))
    n_values = tuple(int(v) for v in doc.get("N_values", range(3, 9)))
    theta_grid = tuple(float(v) for v in doc.get("theta_grid", default_theta_grid()))
    if kind == "convergence" and not l_values:
        raise ConfigError("L_values must be non-empty")
    if kind == "sweep-n" and not n_values:
        raise ConfigError("N_values must be non-empty")
    if kind == "beampattern" and not theta_grid:
        raise ConfigError("theta_grid must be non-empty")
    return ExperimentSpec(
        kind=kind,
        base=base,
        opts=opts,
        algorithms=algorithms,
        l_values=l_values,
        n_values=n_values,
        theta_grid=theta_grid,
        oracle_step=float(doc.get("oracle_step", 0.005)),
        out=picked("out", None),
    )


def _workers():
    raw = os.environ.get("MA_OPT_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"MA_OPT_THREADS must be an integer, got {raw!r}")
    if value == 0:
        return os.cpu_count() or 1
    return max(1, value)


def _map_points(fn, points):
    """Evaluate independent sweep points, optionally on a thread pool; results
    always come back in sweep order."""
    points = list(points)
    workers = min(_workers(), len(points))
    if workers <= 1:
        return [fn(p) for p in points]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


def _solve_scheme(algo, cfg, spec):
    """Run one scheme on one scenario; returns a BaselineResult-shaped record."""
    if algo == "MM":
        r = mm_optimize(cfg, spec.opts)
        meta = {"iterations": r.iterations, "trace": r.trace}
        return ("MM", r.x_opt, r.w_opt, r.lambda_max, r.snr, r.rate, meta)
    if algo == "AO":
        b = ao_optimize(cfg, spec.opts)
    elif algo == "FPA":
        b = fpa_baseline(cfg)
    elif algo == "APS":
        b = aps_baseline(cfg)
    elif algo == "ORACLE":
        b = grid_oracle(cfg, spec.oracle_step)
    else:
        raise ConfigError(f"algorithm '{algo}' cannot be solved directly")
    return (b.scheme, b.x, b.w, b.lambda_max, b.snr, b.rate, b.meta)


def _xw_fields(x, w):
    xs = tuple(float(v) for v in np.asarray(x).reshape(-1))
    ws = tuple((float(c.real), float(c.imag)) for c in np.asarray(w).reshape(-1))
    return xs, ws


def solve_report(spec):
    """Single-scenario solve: one row per scheme with the final objective,
    plus human-readable summary lines computed in the same pass."""
    cfg = spec.base
    rows, lines = [], []
    for algo in spec.algorithms:
        if algo == "BOUND":
            rows.append(
                ResultRow(spec.kind, "BOUND", cfg.n_antennas, cfg.n_angles,
                          cfg.segment_length, spec.opts.rng_seed, 0.0, upper_bound(cfg))
            )
            lines.append(f"BOUND: lambda_max={upper_bound(cfg):.6g}")
            continue
        scheme, x, w, lam, snr, rate, meta = _solve_scheme(algo, cfg, spec)
        xs, ws = _xw_fields(x, w)
        rows.append(
            ResultRow(spec.kind, scheme, cfg.n_antennas, cfg.n_angles,
                      cfg.segment_length, spec.opts.rng_seed, 0.0, lam, x=xs, w=ws)
        )
        iterations = meta.get("iterations", meta.get("outer_iterations", 0))
        lines.append(
            f"{scheme}: lambda_max={lam:.6g} snr_db={linear_to_db(snr):.4g} "
            f"rate={rate:.6g} bound={upper_bound(cfg):.6g} iterations={iterations}"
        )
    return rows, lines


def run_solve(spec):
    return solve_report(spec)[0]


def run_baselines(spec):
    return run_solve(spec)


def run_convergence(spec):
    """Iteration traces of the iterative schemes per segment length, with
    fixed-array and bound reference rows at iteration 0."""

    def one(l_value):
        cfg = dataclasses.replace(spec.base, segment_length=l_value)
        seed = spec.opts.rng_seed
        rows = []
        for algo in spec.algorithms:
            if algo == "MM":
                r = mm_optimize(cfg, spec.opts)
                rows += [
                    ResultRow("convergence", "MM", cfg.n_antennas, cfg.n_angles,
                              l_value, seed, float(it.k), it.lambda_max,
                              x=tuple(float(v) for v in it.x))
                    for it in r.trace
                ]
            elif algo == "AO":
                b = ao_optimize(cfg, spec.opts)
                rows += [
                    ResultRow("convergence", "AO", cfg.n_antennas, cfg.n_angles,
                              l_value, seed, float(k), lam)
                    for k, lam in enumerate(b.meta["lambda_trace"])
                ]
            elif algo == "FPA":
                b = fpa_baseline(cfg)
                rows.append(ResultRow("convergence", "FPA", cfg.n_antennas,
                                      cfg.n_angles, l_value, seed, 0.0, b.lambda_max))
            elif algo == "BOUND":
                rows.append(ResultRow("convergence", "BOUND", cfg.n_antennas,
                                      cfg.n_angles, l_value, seed, 0.0, upper_bound(cfg)))
            else:
                raise ConfigError(f"algorithm '{algo}' is not valid for convergence")
        return rows

    return [row for chunk in _map_points(one, spec.l_values) for row in chunk]


def run_beampattern(spec):
    """Beam gain of each solved scheme over the angle grid, plus one marker
    row per destination angle (scheme name suffixed ':mark')."""
    cfg = spec.base
    seed = spec.opts.rng_seed
    rows = []
    for algo in spec.algorithms:
        if algo == "BOUND":
            raise ConfigError("BOUND has no beam pattern")
        scheme, x, w, _lam, _snr, _rate, _meta = _solve_scheme(algo, cfg, spec)
        for theta in spec.theta_grid:
            rows.append(
                ResultRow("beampattern", scheme, cfg.n_antennas, cfg.n_angles,
                          cfg.segment_length, seed, theta,
                          beam_gain(x, w, theta, cfg.wavelength))
            )
        for theta in cfg.angles:
            rows.append(
                ResultRow("beampattern", scheme + ":mark", cfg.n_antennas,
                          cfg.n_angles, cfg.segment_length, seed, theta,
                          beam_gain(x, w, theta, cfg.wavelength))
            )
    return rows


def run_rate_sweep(spec):
    """Achievable rate of each scheme as the array grows, plus bound rows."""

    def one(n):
        cfg = dataclasses.replace(spec.base, n_antennas=n)
        seed = spec.opts.rng_seed
        rows = []
        for algo in spec.algorithms:
            if algo == "BOUND":
                rows.append(ResultRow("sweep-n", algo, n, cfg.n_angles,
                                      cfg.segment_length, seed, float(n),
                                      math.log2(1.0 + snr_upper_bound(cfg))))
                continue
            scheme, x, w, _lam, _snr, rate, _meta = _solve_scheme(algo, cfg, spec)
            xs, ws = _xw_fields(x, w)
            rows.append(ResultRow("sweep-n", scheme, n, cfg.n_angles,
                                  cfg.segment_length, seed, float(n), rate,
                                  x=xs, w=ws))
        return rows

    return [row for chunk in _map_points(one, spec.n_values) for row in chunk]


RUNNERS = {
    "solve": run_solve,
    "convergence": run_convergence,
    "beampattern": run_beampattern,
    "sweep-n": run_rate_sweep,
    "baselines": run_baselines,
}


def rows_to_csv(rows):
    lines = [CSV_VERSION, CSV_HEADER] + [r.csv_line() for r in rows]
    return "\n".join(lines) + "\n"


def rows_to_json(rows):
    return json.dumps([r.to_json_dict() for r in rows], indent=2) + "\n"


def write_rows(rows, path):
    """Emit rows as JSON when the path ends in .json, CSV otherwise."""
    text = rows_to_json(rows) if str(path).endswith(".json") else rows_to_csv(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write output {path}: {exc}") from exc
