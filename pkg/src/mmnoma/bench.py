"""Parameter sweeps, timing runs and CSV output for the allocation methods."""

from __future__ import annotations

import csv
import math
import statistics
import time
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .channel import SystemConfig
from .optimizer import (
    ASYMPTOTIC,
    MONTE_CARLO,
    AllocationProblem,
    InfeasibleRate,
    bisect_allocate,
    normalize_evaluator,
)

__all__ = [
    "AXES",
    "METHODS",
    "SweepSpec",
    "ResultRow",
    "SweepError",
    "db_to_linear",
    "apply_axis",
    "run_sweep",
    "time_methods",
    "write_table",
    "read_table",
    "DEFAULT_VALUES",
]

AXES = ("p_max", "r_0", "weak_gain_db", "antenna_count")

MC_BISECTION = "monte-carlo-bisection"
ASYM_BISECTION = "asymptotic-bisection"
METHODS = (MC_BISECTION, ASYM_BISECTION)

DEFAULT_VALUES = {
    "p_max": [0.5, 1.0, 2.0, 4.0, 8.0, 16.0],
    "r_0": [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
    "weak_gain_db": [0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0],
    "antenna_count": [4, 8, 16, 32, 64, 128, 256],
}


class SweepError(RuntimeError):
    pass


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _method_evaluator(method: str) -> str:
    if method in METHODS:
        return MONTE_CARLO if method == MC_BISECTION else ASYMPTOTIC
    return normalize_evaluator(method)


def _method_label(method: str) -> str:
    return MC_BISECTION if _method_evaluator(method) == MONTE_CARLO else ASYM_BISECTION


@dataclass(frozen=True)
class SweepSpec:
    base: AllocationProblem
    axis: str
    values: Sequence[float]
    methods: Sequence[str] = (ASYM_BISECTION,)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; expected one of {AXES}")
        vals = list(self.values)
        if not vals:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be strictly increasing")
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "methods", tuple(_method_label(m) for m in self.methods))


@dataclass
class ResultRow:
    method: str
    axis_value: float
    p_1: float
    p_2: float
    c_1: float
    c_2: float
    sum: float
    iterations: int
    wall_time: float
    feasible: bool
    sic_ok: bool
    std_error: float


COLUMNS = tuple(f.name for f in fields(ResultRow))


def apply_axis(problem: AllocationProblem, axis: str, value: float) -> AllocationProblem:
    """Copy of ``problem`` with the field behind ``axis`` set to ``value``."""
    cfg = problem.cfg
    if axis == "p_max":
        return replace(problem, p_max=float(value))
    if axis == "r_0":
        return replace(problem, r_0=float(value))
    if axis == "weak_gain_db":
        return replace(problem, cfg=replace(cfg, gain_1=db_to_linear(value)))
    if axis == "antenna_count":
        n = int(value)
        if n != value:
            raise ValueError(f"antenna count must be an integer, got {value}")
        return replace(problem, cfg=SystemConfig(n, n, n, cfg.gain_1, cfg.gain_2))
    raise ValueError(f"unknown axis {axis!r}")


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def _solve_row(problem: AllocationProblem, method: str, axis_value: float) -> ResultRow:
    start = time.perf_counter()
    try:
        res = bisect_allocate(problem)
    except InfeasibleRate:
        elapsed = time.perf_counter() - start
        nan = math.nan
        return ResultRow(method, axis_value, nan, nan, nan, nan, nan, 0, elapsed, False, False, nan)
    elapsed = time.perf_counter() - start
    return ResultRow(method, axis_value, res.p_1, res.p_2, res.c_1, res.c_2, res.sum,
                     res.iterations, elapsed, res.feasible, res.sic_ok, res.std_error)


def run_sweep(spec: SweepSpec) -> list[ResultRow]:
    """Solve the allocation problem at every ``(method, value)`` pair.

    Rows are ordered by method, then by axis value. Infeasible points are
    kept with ``feasible=False`` and NaN rates. Monte-Carlo points use a seed
    derived from the base seed and the value's index, shared by all methods.
    """
    rows = []
    for method in spec.methods:
        evaluator = _method_evaluator(method)
        for index, value in enumerate(spec.values):
            problem = apply_axis(spec.base, spec.axis, value)
            problem = replace(problem, evaluator=evaluator, seed=_point_seed(spec.base.seed, index))
            try:
                rows.append(_solve_row(problem, method, float(value)))
            except Exception as exc:
                raise SweepError(f"{method} failed at {spec.axis}={value}: {exc}") from exc
    return rows


def time_methods(sizes: Iterable[int], repetitions: int = 3, template: AllocationProblem | None = None,
                 methods: Sequence[str] = METHODS) -> list[ResultRow]:
    """Median wall time of a full allocation for each array size ``N = n_s = n_1 = n_2``.

    Runs strictly sequentially. The template's ``p_max`` is scaled with ``N``
    so that every size bisects the same per-antenna interval and therefore
    performs the same number of iterations.
    """
    if repetitions < 3:
        raise ValueError("timing needs at least 3 repetitions")
    if template is None:
        # per-antenna budget 8 with epsilon 1e-3 gives 13 bisections
        cfg = SystemConfig(1, 1, 1, db_to_linear(5.0), db_to_linear(20.0))
        template = AllocationProblem(cfg, p_max=8.0, r_0=2.0, epsilon=1e-3)
    rows = []
    for method in methods:
        label = _method_label(method)
        evaluator = _method_evaluator(method)
        for n in sizes:
            problem = apply_axis(template, "antenna_count", n)
            problem = replace(problem, p_max=template.budget * n, evaluator=evaluator)
            times = []
            row = None
            for _ in range(repetitions):
                row = _solve_row(problem, label, float(n))
                times.append(row.wall_time)
            row.wall_time = statistics.median(times)
            rows.append(row)
    return rows


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".16e")
    return str(value)


def _write(rows, fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_format(getattr(row, name)) for name in COLUMNS])


def write_table(rows: Iterable[ResultRow], destination) -> None:
    """Write rows as CSV to a path or an open text stream.

    Floats carry 17 significant digits in exponent form, which is enough for
    parsing to give back the exact values.
    """
    if hasattr(destination, "write"):
        _write(rows, destination)
        return
    path = Path(destination)
    try:
        with path.open("w", newline="") as fh:
            _write(rows, fh)
    except OSError as exc:
        raise OSError(f"cannot write table to {path}: {exc.strerror or exc}") from exc


def _parse(name: str, text: str):
    kind = {f.name: f.type for f in fields(ResultRow)}[name]
    if kind == "bool":
        return text == "true"
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    return text


def read_table(source) -> list[ResultRow]:
    """Inverse of :func:`write_table`."""
    if hasattr(source, "read"):
        reader = csv.reader(source)
        header = next(reader)
        lines = list(reader)
    else:
        with Path(source).open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            lines = list(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected header {header}")
    return [ResultRow(**{n: _parse(n, v) for n, v in zip(COLUMNS, line)}) for line in lines]
