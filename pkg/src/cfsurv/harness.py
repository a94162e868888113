"""Experiment runner: scheme sweeps, the co-located baseline, and result I/O.

A scheme id is "<layout>-<assignment>-<power>" with layout in {cf, col},
assignment in {greedy, random}, power in {epa, ppa}. All randomness flows
from a single master seed through per-trial seed sequences, and the same
trial shares its topology across schemes (common random numbers), so
paired scheme comparisons are sharp and reruns are byte-identical.
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .channel import (EstimationModel, SimParams, Topology,
                      compute_large_scale, generate_topology)
from .modes import equal_power, greedy_assign, random_assign
from .powerctl import bisection_power_control
from .sinr import ModeAssignment, success_probability_all

SCHEME_LAYOUTS = ("cf", "col")
SCHEME_ASSIGNMENTS = ("greedy", "random")
SCHEME_POWERS = ("epa", "ppa")

DEFAULT_SCHEMES = ("cf-greedy-ppa", "cf-greedy-epa",
                   "cf-random-ppa", "cf-random-epa")

# residual self-interference between co-located jamming and observing
# chains, linear gain on the noise-normalized scale (-80 dB)
DEFAULT_SI_LEVEL = 1e-8

CSV_COLUMNS = ("scheme", "sweep_var", "sweep_value", "trial",
               "min_success_prob", "per_link_success_prob",
               "greedy_iterations", "bisection_iterations", "error")

CONFIG_VERSION = 1


def dbm_to_linear(p_dBm: float, noise_dBm: float) -> float:
    """Noise-normalized linear power from dBm values."""
    return 10.0 ** ((p_dBm - noise_dBm) / 10.0)


def parse_scheme(scheme: str) -> tuple[str, str, str]:
    parts = scheme.split("-")
    if (len(parts) != 3 or parts[0] not in SCHEME_LAYOUTS
            or parts[1] not in SCHEME_ASSIGNMENTS or parts[2] not in SCHEME_POWERS):
        raise ValueError(f"bad scheme id: {scheme!r}")
    return parts[0], parts[1], parts[2]


@dataclass
class ExperimentConfig:
    sweep_var: str                       # "M" or "K"
    sweep_values: list
    trials: int
    base_params: SimParams               # template; sweep variable overridden
    schemes: tuple = DEFAULT_SCHEMES
    seed: int = 0
    out_dir: str | None = None
    si_level: float = DEFAULT_SI_LEVEL
    p_jam: float = 0.5
    e_min: float = 1e-4
    bisection_eps: float = 1e-3
    threads: int = 1
    write_traces: bool = False

    def __post_init__(self):
        if self.sweep_var not in ("M", "K"):
            raise ValueError("sweep_var must be 'M' or 'K'")
        if not self.sweep_values:
            raise ValueError("sweep value list must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for s in self.schemes:
            parse_scheme(s)


@dataclass
class ResultRow:
    scheme: str
    sweep_var: str
    sweep_value: int
    trial: int
    min_success_prob: float | None
    per_link: list = field(default_factory=list)
    greedy_iterations: int = 0
    bisection_iterations: int = 0
    wall_time_s: float = 0.0
    error: str = ""
    trace: dict | None = None

    def csv_values(self) -> list:
        return [self.scheme, self.sweep_var, self.sweep_value, self.trial,
                "" if self.min_success_prob is None else repr(self.min_success_prob),
                ";".join(repr(p) for p in self.per_link),
                self.greedy_iterations, self.bisection_iterations, self.error]

    def to_json_dict(self) -> dict:
        return {
            "scheme": self.scheme, "sweep_var": self.sweep_var,
            "sweep_value": self.sweep_value, "trial": self.trial,
            "min_success_prob": self.min_success_prob,
            "per_link_success_prob": self.per_link,
            "greedy_iterations": self.greedy_iterations,
            "bisection_iterations": self.bisection_iterations,
            "wall_time_s": self.wall_time_s,
            "error": self.error,
        }


def apply_self_interference(ls, si_level: float):
    """Replace the MN-to-MN gains by a uniform residual self-interference
    level, as seen inside a single co-located array."""
    out = replace(ls, beta_MM=np.full_like(ls.beta_MM, si_level))
    np.fill_diagonal(out.beta_MM, 0.0)
    return out


def evaluate_scheme(scheme: str, ls, params: SimParams,
                    rng: np.random.Generator, p_jam: float = 0.5,
                    e_min: float = 1e-4, bisection_eps: float = 1e-3) -> dict:
    """Run one scheme on a fixed large-scale realization.

    Returns the assignment, power allocation, per-link success
    probabilities, and iteration counters.
    """
    _, assignment, power = parse_scheme(scheme)

    greedy_iters = 0
    trace = None
    if assignment == "greedy":
        trace = greedy_assign(ls, params, e_min=e_min)
        a = trace.final_assignment
        greedy_iters = len(trace.iterations)
    else:
        a = random_assign(params.M, rng, p_jam=p_jam)

    bis_iters = 0
    bis = None
    if power == "ppa" and a.jamming.size > 0:
        bis = bisection_power_control(a, ls, params, eps=bisection_eps)
        theta = bis.theta_opt
        bis_iters = bis.iterations
    else:
        theta = equal_power(a, ls, params)

    probs = success_probability_all(a, theta, ls, params)
    return {
        "assignment": a,
        "theta": theta,
        "per_link": [float(p) for p in probs],
        "min_success_prob": float(probs.min()),
        "greedy_iterations": greedy_iters,
        "bisection_iterations": bis_iters,
        "greedy_trace": trace,
        "bisection_result": bis,
    }


def colocated_baseline(ls_center, params: SimParams,
                       si_level: float = DEFAULT_SI_LEVEL,
                       scheme: str = "col-greedy-ppa",
                       rng: np.random.Generator | None = None,
                       p_jam: float = 0.5, e_min: float = 1e-4,
                       bisection_eps: float = 1e-3) -> float:
    """Minimum success probability of the co-located array baseline.

    ls_center must come from a topology with every MN at the area centre;
    the MN-to-MN gains are overridden by the residual self-interference
    level before the usual mode-assignment and power machinery runs.
    """
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    ls_si = apply_self_interference(ls_center, si_level)
    res = evaluate_scheme(scheme, ls_si, params, rng, p_jam=p_jam,
                          e_min=e_min, bisection_eps=bisection_eps)
    return res["min_success_prob"]


def trial_params(cfg: ExperimentConfig, sweep_value: int) -> SimParams:
    kwargs = {cfg.sweep_var: int(sweep_value)}
    return replace(cfg.base_params, **kwargs)


def _run_trial(cfg: ExperimentConfig, value_idx: int, trial: int) -> list[ResultRow]:
    sweep_value = int(cfg.sweep_values[value_idx])
    params = trial_params(cfg, sweep_value)
    ss = np.random.SeedSequence([cfg.seed, value_idx, trial])
    ss_topo, ss_ls, ss_col, ss_schemes = ss.spawn(4)

    rng_topo = np.random.default_rng(ss_topo)
    topo = generate_topology(params, rng_topo)
    ls_cf = compute_large_scale(topo, params, np.random.default_rng(ss_ls))

    ls_col = None
    if any(parse_scheme(s)[0] == "col" for s in cfg.schemes):
        centre = np.full((params.M, 2), params.area_side / 2.0)
        topo_col = Topology(mn_pos=centre, ut_pos=topo.ut_pos, ur_pos=topo.ur_pos)
        ls_col = apply_self_interference(
            compute_large_scale(topo_col, params, np.random.default_rng(ss_col)),
            cfg.si_level)

    rows = []
    scheme_streams = ss_schemes.spawn(len(cfg.schemes))
    for scheme, stream in zip(cfg.schemes, scheme_streams):
        layout = parse_scheme(scheme)[0]
        ls = ls_cf if layout == "cf" else ls_col
        t0 = time.perf_counter()
        row = ResultRow(scheme=scheme, sweep_var=cfg.sweep_var,
                        sweep_value=sweep_value, trial=trial,
                        min_success_prob=None)
        try:
            res = evaluate_scheme(scheme, ls, params,
                                  np.random.default_rng(stream),
                                  p_jam=cfg.p_jam, e_min=cfg.e_min,
                                  bisection_eps=cfg.bisection_eps)
            row.min_success_prob = res["min_success_prob"]
            row.per_link = res["per_link"]
            row.greedy_iterations = res["greedy_iterations"]
            row.bisection_iterations = res["bisection_iterations"]
            if cfg.write_traces:
                row.trace = {
                    "greedy": (res["greedy_trace"].to_json_dict()
                               if res["greedy_trace"] else None),
                    "bisection": (res["bisection_result"].to_json_dict()
                                  if res["bisection_result"] else None),
                }
        except Exception as exc:  # per-trial failures are recorded, not fatal
            row.error = f"{type(exc).__name__}: {exc}"
        row.wall_time_s = time.perf_counter() - t0
        rows.append(row)
    return rows


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Run the configured sweep; returns rows in a deterministic order and,
    when out_dir is set, writes results.csv / results.json / trace files."""
    tasks = [(vi, t) for vi in range(len(cfg.sweep_values))
             for t in range(cfg.trials)]

    if cfg.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            chunks = list(pool.map(_run_trial_star,
                                   [(cfg, vi, t) for vi, t in tasks]))
    else:
        chunks = [_run_trial(cfg, vi, t) for vi, t in tasks]

    rows = [row for chunk in chunks for row in chunk]
    if cfg.out_dir:
        write_results(rows, Path(cfg.out_dir), cfg)
    return rows


def _run_trial_star(args):
    return _run_trial(*args)


def write_results(rows: list[ResultRow], out_dir: Path, cfg: ExperimentConfig):
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "results.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.csv_values())
    with open(out_dir / "results.json", "w") as f:
        json.dump([r.to_json_dict() for r in rows], f, indent=1, sort_keys=True)
        f.write("\n")
    if cfg.write_traces:
        trace_dir = out_dir / "trace"
        trace_dir.mkdir(exist_ok=True)
        for row in rows:
            if row.trace is None:
                continue
            name = f"{row.scheme}_v{row.sweep_value}_t{row.trial}.json"
            with open(trace_dir / name, "w") as f:
                json.dump(row.trace, f, indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# config file handling (documented in README; version-checked)

def params_from_config(d: dict) -> SimParams:
    p = d.get("params", {})
    noise_dBm = float(p.get("noise_dBm", -92.0))
    rho_UT = dbm_to_linear(float(p.get("p_ut_dBm", 23.979400086720375)), noise_dBm)
    est = EstimationModel(
        mode=p.get("estimation", "lmmse"),
        tau_p=float(p.get("tau_p", 100.0)),
        pilot_power=float(p.get("pilot_power", rho_UT)),
        kappa=float(p.get("kappa", 1.0)),
    )
    return SimParams(
        M=int(p.get("M", 30)),
        K=int(p.get("K", 10)),
        N=int(p.get("N", 2)),
        rho_J=dbm_to_linear(float(p.get("p_mn_dBm", 30.0)), noise_dBm),
        rho_UT=rho_UT,
        area_side=float(p.get("area_side", 1000.0)),
        min_mn_spacing=float(p.get("min_mn_spacing", 80.0)),
        pair_dist_range=(float(p.get("pair_dist_min", 80.0)),
                         float(p.get("pair_dist_max", 160.0))),
        shadow_sigma_dB=float(p.get("shadow_sigma_dB", 4.0)),
        shadow_decorr_m=float(p.get("shadow_decorr_m", 9.0)),
        estimation_model=est,
        seed=int(d.get("seed", 0)),
    )


def config_from_dict(d: dict, out_dir: str | None = None) -> ExperimentConfig:
    version = d.get("config_version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ValueError(f"unsupported config_version {version}")
    si_dB = float(d.get("colocated_si_dB", -80.0))
    return ExperimentConfig(
        sweep_var=d["sweep"],
        sweep_values=list(d["values"]),
        trials=int(d.get("trials", 200)),
        base_params=params_from_config(d),
        schemes=tuple(d.get("schemes", DEFAULT_SCHEMES)),
        seed=int(d.get("seed", 0)),
        out_dir=out_dir if out_dir is not None else d.get("out"),
        si_level=10.0 ** (si_dB / 10.0),
        p_jam=float(d.get("p_jam", 0.5)),
        e_min=float(d.get("e_min", 1e-4)),
        bisection_eps=float(d.get("bisection_eps", 1e-3)),
        threads=int(d.get("threads", 1)),
        write_traces=bool(d.get("write_traces", False)),
    )


def load_config(path: str, out_dir: str | None = None) -> ExperimentConfig:
    import yaml

    with open(path) as f:
        d = yaml.safe_load(f)
    if not isinstance(d, dict):
        raise ValueError("config file must hold a key-value mapping")
    return config_from_dict(d, out_dir=out_dir)
