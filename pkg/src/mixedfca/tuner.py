"""Lattice-guided black-box parameter tuning.

Each pass picks the ``k`` configurations closest to the target objective as a
control group, binarizes every parameter against the control group's
min/max interval, mines the mixed concept lattice of the remaining rows and
perturbs only the attributes the lattice marks as negative (out of interval).
"""
from __future__ import annotations

import importlib
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from ._kernels import numpy_impl
from .context import FormalContext, _bits
from .errors import InputError
from .mining import ConceptLattice, mine_lattice

BUILTIN_ARITY = {"example2-poly": 5, "exp1": 9, "exp2": 9}
BUILTIN_RANGE = {"example2-poly": (-115.0, 115.0), "exp1": (0.0, 27930.0), "exp2": (0.0, 485.0)}
CANDIDATE_MODES = ("averages", "extremes")
STOP_RULES = ("improvement", "control-group")


@dataclass
class ObjectiveSpec:
    """Either a builtin test function or a recorded column plus an evaluator.

    ``column`` objectives read the starting objective values from the rows; any
    changed configuration is scored by ``evaluator`` (a callable on one row).
    """

    builtin: str | None = None
    column: str | None = None
    evaluator: Callable[[np.ndarray], float] | None = None

    def __post_init__(self):
        if (self.builtin is None) == (self.column is None):
            raise InputError("objective needs exactly one of 'builtin' or 'column'")
        if self.builtin is not None and self.builtin not in BUILTIN_ARITY:
            raise InputError(f"unknown builtin objective {self.builtin!r}")
        if self.column is not None and self.evaluator is None:
            raise InputError("a column objective needs an evaluator to score new configurations")

    @property
    def code(self) -> int | None:
        return _kernels.BUILTIN_CODES.get(self.builtin) if self.builtin else None


def evaluate_objective(spec: ObjectiveSpec, row) -> float:
    row = np.asarray(row, dtype=np.float64)
    if spec.builtin is not None:
        if row.shape != (BUILTIN_ARITY[spec.builtin],):
            raise InputError(
                f"{spec.builtin} takes {BUILTIN_ARITY[spec.builtin]} values, got {row.shape}"
            )
        return float(numpy_impl.objective(spec.code, row))
    return float(spec.evaluator(row))


@dataclass
class TuningProblem:
    attributes: list[str]
    domains: np.ndarray  # (|M|, 2): [min, max] per attribute
    row_names: list[str]
    table: np.ndarray  # (|G|, |M|)
    objective: ObjectiveSpec
    optimal: float
    k: int
    max_iterations: int = 50
    candidate_mode: str = "averages"
    recorded_objective: np.ndarray | None = None
    stop_rule: str = "improvement"

    def __post_init__(self):
        self.table = np.array(self.table, dtype=np.float64)
        self.domains = np.array(self.domains, dtype=np.float64).reshape(-1, 2)
        g, m = self.table.shape if self.table.ndim == 2 else (0, 0)
        if self.table.ndim != 2 or m != len(self.attributes) or g != len(self.row_names):
            raise InputError("table shape does not match attribute and row names")
        if len(set(self.row_names)) != g:
            raise InputError("duplicate row names")
        if self.domains.shape[0] != m:
            raise InputError("one [min, max] domain per attribute is required")
        if np.any(self.domains[:, 0] > self.domains[:, 1]):
            raise InputError("domain minimum exceeds maximum")
        lo, hi = self.domains[:, 0], self.domains[:, 1]
        if np.any((self.table < lo) | (self.table > hi)):
            raise InputError("table value outside its attribute domain")
        if not 1 < self.k < g:
            raise InputError(f"k must satisfy 1 < k < |G| = {g}, got {self.k}")
        if self.max_iterations < 0:
            raise InputError("max_iterations must be non-negative")
        if self.candidate_mode not in CANDIDATE_MODES:
            raise InputError(f"candidate mode must be one of {CANDIDATE_MODES}")
        if self.stop_rule not in STOP_RULES:
            raise InputError(f"stop rule must be one of {STOP_RULES}")
        spec = self.objective
        if spec.builtin is not None and BUILTIN_ARITY[spec.builtin] != m:
            raise InputError(f"{spec.builtin} needs {BUILTIN_ARITY[spec.builtin]} attributes")
        if spec.column is not None:
            if self.recorded_objective is None or len(self.recorded_objective) != g:
                raise InputError(f"every row needs a recorded {spec.column!r} value")
            self.recorded_objective = np.asarray(self.recorded_objective, dtype=np.float64)

    def initial_objectives(self) -> np.ndarray:
        if self.objective.column is not None:
            return self.recorded_objective.copy()
        return np.array([evaluate_objective(self.objective, r) for r in self.table])


def select_control_group(objectives, optimal: float, k: int) -> list[int]:
    """Indices of the ``k`` rows nearest ``optimal``; ties go to the lower index."""
    objectives = np.asarray(objectives, dtype=np.float64)
    if not 1 < k < len(objectives):
        raise InputError(f"k must satisfy 1 < k < |G| = {len(objectives)}, got {k}")
    order = np.argsort(np.abs(objectives - optimal), kind="stable")
    return sorted(int(i) for i in order[:k])


@dataclass
class TuningIntervals:
    lower: np.ndarray
    upper: np.ndarray

    def as_list(self) -> list[list[float]]:
        return [[float(l), float(u)] for l, u in zip(self.lower, self.upper)]


def compute_intervals(table, control_group: Sequence[int]) -> TuningIntervals:
    if len(control_group) == 0:
        raise InputError("control group is empty")
    rows = np.asarray(table, dtype=np.float64)[list(control_group)]
    return TuningIntervals(rows.min(axis=0), rows.max(axis=0))


def binarize(
    table,
    intervals: TuningIntervals,
    row_names: Sequence[str],
    attributes: Sequence[str],
) -> FormalContext:
    """1 where the value lies in the closed interval of its column."""
    t = np.asarray(table, dtype=np.float64)
    inside = (t >= intervals.lower) & (t <= intervals.upper)
    return FormalContext(row_names, attributes, inside)


class NegativeSetCursor:
    """Walks the lattice top-down and yields each new non-empty negative set.

    The empty-extent concept is skipped (it describes no configuration), as is
    a negative set equal to one already yielded: it would propose exactly the
    same changes.
    """

    def __init__(self, lattice: ConceptLattice):
        self._concepts = iter(lattice.concepts)
        self._seen: set[int] = set()

    def __iter__(self):
        return self

    def __next__(self) -> int:
        for concept in self._concepts:
            neg = concept.intent.neg
            if concept.extent and neg and neg not in self._seen:
                self._seen.add(neg)
                return neg
        raise StopIteration


def select_negative_set(lattice: ConceptLattice) -> tuple[int | None, NegativeSetCursor]:
    """First negative set from the top, or ``None`` when no concept has one."""
    cursor = NegativeSetCursor(lattice)
    return next(cursor, None), cursor


def candidate_values(
    original: float, lower: float, upper: float, dmin: float, dmax: float, mode: str = "averages"
) -> np.ndarray:
    """Original value, a low and a high probe outside the interval, the interval midpoint."""
    if mode == "averages":
        low, high = (dmin + lower) / 2.0, (dmax + upper) / 2.0
    elif mode == "extremes":
        low, high = dmin, dmax
    else:
        raise InputError(f"candidate mode must be one of {CANDIDATE_MODES}")
    return np.array([original, low, high, (lower + upper) / 2.0])


def improve_configuration(
    row,
    columns: Sequence[int],
    intervals: TuningIntervals,
    domains,
    objective: ObjectiveSpec,
    optimal: float,
    mode: str = "averages",
    backend=None,
) -> tuple[np.ndarray, float, int]:
    """Best of the 4^|columns| candidate combinations for one row.

    Returns the new row, its objective value and the number of evaluated
    combinations. The unchanged row is enumerated first, so it wins ties.
    """
    row = np.asarray(row, dtype=np.float64)
    cols = np.array(sorted(columns), dtype=np.int64)
    if cols.size == 0:
        raise InputError("negative set is empty")
    domains = np.asarray(domains, dtype=np.float64)
    cands = np.array(
        [
            candidate_values(
                row[c], intervals.lower[c], intervals.upper[c], domains[c, 0], domains[c, 1], mode
            )
            for c in cols
        ]
    )
    n_combos = 4 ** len(cols)
    if objective.builtin is not None:
        best, _ = _kernels.grid_search(row, cols, cands, objective.code, optimal, backend=backend)
        digits = np.array([(best // 4 ** (len(cols) - 1 - j)) % 4 for j in range(len(cols))])
        new_row = row.copy()
        new_row[cols] = cands[np.arange(len(cols)), digits]
    else:
        grid = numpy_impl.combination_grid(row, cols, cands)
        values = np.array([float(objective.evaluator(r)) for r in grid])
        new_row = grid[int(np.argmin(np.abs(values - optimal)))]
    return new_row, evaluate_objective(objective, new_row), n_combos


@dataclass
class IterationTrace:
    control_group: list[str]
    intervals: list[list[float]]
    tried: list[list[str]]
    changed_attributes: list[str]
    changes: list[dict]
    combinations: int

    def to_dict(self) -> dict:
        return {
            "control_group": self.control_group,
            "intervals": self.intervals,
            "tried": self.tried,
            "changed_attributes": self.changed_attributes,
            "changes": self.changes,
            "combinations": self.combinations,
        }


@dataclass
class TuningReport:
    k: int
    n_rows: int
    optimal: float
    initial_distance: float
    final_distance: float
    iterations: int
    evaluated_combinations: int
    stop_reason: str
    best_row: str
    final_table: np.ndarray
    final_objectives: np.ndarray
    trace: list[IterationTrace] = field(default_factory=list)

    @property
    def percent_reduction(self) -> float:
        """Remaining distance as a percentage of the starting distance."""
        if self.initial_distance == 0:
            return 0.0
        return 100.0 * self.final_distance / self.initial_distance

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "G": self.n_rows,
            "optimal": self.optimal,
            "initial_distance": self.initial_distance,
            "final_distance": self.final_distance,
            "iterations": self.iterations,
            "percent_reduction": self.percent_reduction,
            "evaluated_combinations": self.evaluated_combinations,
            "stop_reason": self.stop_reason,
            "best_row": self.best_row,
            "final_table": self.final_table.tolist(),
            "final_objectives": self.final_objectives.tolist(),
            "trace": [t.to_dict() for t in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    TSV_HEADER = "k\tG\tObjective\tInit. Dist.\tFinal Dist.\tIter.\t% Reduc."

    def to_tsv_row(self) -> str:
        return (
            f"{self.k}\t{self.n_rows}\t{self.optimal:g}\t{self.initial_distance:.2f}\t"
            f"{self.final_distance:.2f}\t{self.iterations}\t{self.percent_reduction:.2f}"
        )


def tune(problem: TuningProblem, backend=None) -> TuningReport:
    """Run the tuning loop until no negative set improves any row outside the
    control group or the iteration cap is reached.

    Only strict improvements of a row's distance to the optimum are committed.
    With ``stop_rule="control-group"`` the loop also ends after a pass in which
    no outside row got closer than the worst control row.
    """
    table = problem.table.copy()
    values = problem.initial_objectives()
    target = problem.optimal
    names = problem.row_names
    attrs = problem.attributes
    dist = np.abs(values - target)
    initial = float(dist.min())
    trace: list[IterationTrace] = []
    combos_total = 0
    stop = "iteration-cap"

    for _ in range(problem.max_iterations):
        gk = select_control_group(values, target, problem.k)
        outside = [i for i in range(len(names)) if i not in gk]
        iv = compute_intervals(table, gk)
        ctx = binarize(table[outside], iv, [names[i] for i in outside], attrs)
        lattice = mine_lattice(ctx, backend=backend)

        tried, changes, combos = [], [], 0
        for neg in NegativeSetCursor(lattice):
            cols = list(_bits(neg))
            tried.append([attrs[c] for c in cols])
            changes = []
            for i in outside:
                new_row, new_value, n = improve_configuration(
                    table[i], cols, iv, problem.domains, problem.objective, target,
                    problem.candidate_mode, backend,
                )
                combos += n
                if abs(new_value - target) < dist[i]:
                    changes.append((i, new_row, new_value))
            if changes:
                break
        combos_total += combos

        if not changes:
            stop = "exhausted"
            break

        records = []
        for i, new_row, new_value in changes:
            records.append(
                {
                    "row": names[i],
                    "before": table[i].tolist(),
                    "after": new_row.tolist(),
                    "objective_before": float(values[i]),
                    "objective_after": float(new_value),
                }
            )
            table[i] = new_row
            values[i] = new_value
            dist[i] = abs(new_value - target)
        trace.append(
            IterationTrace(
                [names[i] for i in gk], iv.as_list(), tried, tried[-1], records, combos
            )
        )
        if problem.stop_rule == "control-group" and not dist[outside].min() < dist[gk].max():
            stop = "control-group-unbeaten"
            break

    best = int(np.argmin(dist))
    return TuningReport(
        k=problem.k,
        n_rows=len(names),
        optimal=target,
        initial_distance=initial,
        final_distance=float(dist[best]),
        iterations=len(trace),
        evaluated_combinations=combos_total,
        stop_reason=stop,
        best_row=names[best],
        final_table=table,
        final_objectives=values,
        trace=trace,
    )


# problem files


def _load_evaluator(path: str) -> Callable:
    module, _, name = path.partition(":")
    if not module or not name:
        raise InputError(f"evaluator must look like 'package.module:function', got {path!r}")
    try:
        return getattr(importlib.import_module(module), name)
    except (ImportError, AttributeError) as exc:
        raise InputError(f"cannot import evaluator {path!r}: {exc}") from None


def problem_from_dict(data: dict) -> TuningProblem:
    """Build a problem from the JSON problem-file layout (see README)."""
    try:
        attrs = data["attributes"]
        names = [a["name"] for a in attrs]
        domains = [a["domain"] for a in attrs]
        rows = data["rows"]
        obj = data["objective"]
        column = obj.get("column")
        spec = ObjectiveSpec(
            builtin=obj.get("builtin"),
            column=column,
            evaluator=_load_evaluator(obj["evaluator"]) if "evaluator" in obj else None,
        )
        recorded = [r[column] for r in rows] if column else None
        return TuningProblem(
            attributes=names,
            domains=domains,
            row_names=[r["name"] for r in rows],
            table=[r["values"] for r in rows],
            objective=spec,
            optimal=float(data["optimal"]),
            k=int(data["k"]),
            max_iterations=int(data.get("maxIterations", 50)),
            candidate_mode=data.get("candidateMode", "averages"),
            stop_rule=data.get("stopRule", "improvement"),
            recorded_objective=recorded,
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed problem file: missing or invalid {exc}") from None


def load_problem(path) -> TuningProblem:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"problem file is not valid JSON: {exc}") from None
    return problem_from_dict(data)
