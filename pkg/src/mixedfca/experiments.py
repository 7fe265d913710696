"""Synthetic tuning experiments on 9-parameter test functions over [0, 10]^9."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InputError
from .tuner import ObjectiveSpec, TuningProblem, TuningReport, tune

N_PARAMETERS = 9
DOMAIN = (0.0, 10.0)
EXP1_TARGETS = (930.0, 27030.0, 27900.0)

# default sweep grids
SWEEPS = {
    "exp1": {"k": (2, 3), "g": (5, 10, 20), "target": EXP1_TARGETS},
    "exp2": {"k": (2, 3, 4), "g": (5, 10, 20, 30), "target": (0.0,)},
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    k: int
    n_configs: int
    target: float = 0.0
    trials: int = 10
    base_seed: int = 0
    max_iterations: int = 50
    candidate_mode: str = "averages"

    def __post_init__(self):
        if self.experiment not in SWEEPS:
            raise InputError(f"experiment must be 'exp1' or 'exp2', got {self.experiment!r}")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if self.n_configs < 3:
            raise InputError("need at least 3 configurations so that 1 < k < |G| holds")
        if not 1 < self.k < self.n_configs:
            raise InputError(f"k must satisfy 1 < k < |G| = {self.n_configs}")


@dataclass(frozen=True)
class ExperimentRow:
    experiment: str
    k: int
    g: int
    objective: float
    mean_initial_distance: float
    mean_final_distance: float
    mean_iterations: float
    mean_percent_reduction: float
    ratio_of_means_percent: float


def random_dataset(seed: int, n_configs: int) -> np.ndarray:
    """``n_configs`` x 9 table drawn uniformly from [0, 10]."""
    if n_configs < 3:
        raise InputError("need at least 3 configurations")
    return np.random.default_rng(seed).uniform(*DOMAIN, size=(n_configs, N_PARAMETERS))


def make_problem(cfg: ExperimentConfig, seed: int) -> TuningProblem:
    table = random_dataset(seed, cfg.n_configs)
    return TuningProblem(
        attributes=[f"t{i}" for i in range(1, N_PARAMETERS + 1)],
        domains=[DOMAIN] * N_PARAMETERS,
        row_names=[f"c{i}" for i in range(1, cfg.n_configs + 1)],
        table=table,
        objective=ObjectiveSpec(builtin=cfg.experiment),
        optimal=cfg.target if cfg.experiment == "exp1" else 0.0,
        k=cfg.k,
        max_iterations=cfg.max_iterations,
        candidate_mode=cfg.candidate_mode,
    )


def run_trials(cfg: ExperimentConfig, backend=None) -> list[TuningReport]:
    return [tune(make_problem(cfg, cfg.base_seed + i), backend) for i in range(cfg.trials)]


def aggregate(cfg: ExperimentConfig, reports: list[TuningReport]) -> ExperimentRow:
    init = np.array([r.initial_distance for r in reports])
    final = np.array([r.final_distance for r in reports])
    mean_init = float(init.mean())
    return ExperimentRow(
        experiment=cfg.experiment,
        k=cfg.k,
        g=cfg.n_configs,
        objective=cfg.target if cfg.experiment == "exp1" else 0.0,
        mean_initial_distance=mean_init,
        mean_final_distance=float(final.mean()),
        mean_iterations=float(np.mean([r.iterations for r in reports])),
        mean_percent_reduction=float(np.mean([r.percent_reduction for r in reports])),
        ratio_of_means_percent=100.0 * float(final.mean()) / mean_init if mean_init else 0.0,
    )


def run_experiment(cfg: ExperimentConfig, backend=None) -> ExperimentRow:
    """Average ``cfg.trials`` tuning runs seeded ``base_seed``, ``base_seed + 1``, ..."""
    return aggregate(cfg, run_trials(cfg, backend))


def sweep(
    experiment: str,
    ks=None,
    gs=None,
    targets=None,
    trials: int = 10,
    base_seed: int = 0,
    max_iterations: int = 50,
    candidate_mode: str = "averages",
) -> list[ExperimentRow]:
    grid = SWEEPS.get(experiment)
    if grid is None:
        raise InputError(f"experiment must be 'exp1' or 'exp2', got {experiment!r}")
    ks = ks or grid["k"]
    gs = gs or grid["g"]
    targets = (0.0,) if experiment == "exp2" else (targets or grid["target"])
    rows = []
    # table order: objective outermost, then k, then |G|
    for target in targets:
        for k in ks:
            for g in gs:
                cfg = ExperimentConfig(
                    experiment, k, g, float(target), trials, base_seed, max_iterations, candidate_mode
                )
                rows.append(run_experiment(cfg))
    return rows


def _columns(experiment: str) -> list[str]:
    cols = ["k", "G"]
    if experiment == "exp1":
        cols.append("Objective")
    return cols + ["Init. Dist.", "Final Dist.", "Iter.", "% Reduc."]


def emit_report(rows: list[ExperimentRow], experiment: str, fmt: str = "tsv") -> str:
    """Result table as TSV (two decimals) or JSON (full precision, both aggregations)."""
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    if fmt != "tsv":
        raise InputError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(_columns(experiment))
    for r in rows:
        line = [str(r.k), str(r.g)]
        if experiment == "exp1":
            line.append(f"{r.objective:g}")
        line += [
            f"{r.mean_initial_distance:.2f}",
            f"{r.mean_final_distance:.2f}",
            f"{r.mean_iterations:.2f}",
            f"{r.mean_percent_reduction:.2f}",
        ]
        writer.writerow(line)
    return buf.getvalue()
