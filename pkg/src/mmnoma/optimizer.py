"""Bisection power allocation maximizing the ergodic sum rate.

The problem is

    maximize   C1(p1, p2) + C2(p2)
    subject to C1(p1, p2) >= r_0,  (p1 + p2) * n_s <= p_max

with per-antenna powers. The sum rate grows with ``p2`` along the full-power
line while ``C1`` shrinks, so the optimum sits where ``C1`` meets ``r_0`` and
bisection on ``p2`` finds it.

In Monte-Carlo mode every evaluation reuses the channel realizations fixed by
``problem.seed``. ``C1`` is then a deterministic, monotone function of ``p2``
within a run and the bracket never breaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import asymptotic, channel
from .channel import PowerSplit, SystemConfig

__all__ = [
    "MONTE_CARLO",
    "ASYMPTOTIC",
    "AllocationProblem",
    "AllocationResult",
    "InfeasibleRate",
    "EvaluatorFailure",
    "bisect_allocate",
    "sum_capacity_at",
    "weak_capacity_at",
    "check_sic",
    "expected_iterations",
]

MONTE_CARLO = "monte-carlo"
ASYMPTOTIC = "asymptotic"

_ALIASES = {
    "mc": MONTE_CARLO,
    "monte-carlo": MONTE_CARLO,
    "monte_carlo": MONTE_CARLO,
    "asym": ASYMPTOTIC,
    "asymptotic": ASYMPTOTIC,
}


class InfeasibleRate(ValueError):
    """The weak user cannot reach ``r_0`` even with the whole budget."""

    def __init__(self, r_0: float, max_rate: float):
        self.r_0 = r_0
        self.max_rate = max_rate
        super().__init__(
            f"minimum rate r_0={r_0:g} bps/Hz exceeds the weak user's rate with the "
            f"full budget ({max_rate:.6g} bps/Hz)"
        )


class EvaluatorFailure(RuntimeError):
    pass


def normalize_evaluator(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown evaluator {name!r}; expected one of {sorted(_ALIASES)}") from None


@dataclass(frozen=True)
class AllocationProblem:
    """Allocation problem; ``p_max`` is the total source power, not per antenna."""

    cfg: SystemConfig
    p_max: float
    r_0: float
    epsilon: float = 1e-3
    evaluator: str = ASYMPTOTIC
    trials: int = channel.DEFAULT_TRIALS
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "evaluator", normalize_evaluator(self.evaluator))
        if not self.p_max > 0:
            raise ValueError(f"p_max must be positive, got {self.p_max!r}")
        if not self.r_0 >= 0:
            raise ValueError(f"r_0 must be nonnegative, got {self.r_0!r}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")

    @property
    def budget(self) -> float:
        """Per-antenna power budget ``p_max / n_s``."""
        return self.p_max / self.cfg.n_s


@dataclass
class AllocationResult:
    p_1: float
    p_2: float
    c_1: float
    c_2: float
    sum: float
    iterations: int
    feasible: bool
    sic_ok: bool
    evaluator_calls: int
    # last midpoint visited, i.e. the point the textbook loop would output
    p_2_midpoint: float = math.nan
    sic_margin: float = math.nan
    std_error: float = 0.0
    c_1_trace: list = field(default_factory=list, repr=False)


def expected_iterations(budget: float, epsilon: float) -> int:
    if budget <= epsilon:
        return 0
    return math.ceil(math.log2(budget / epsilon))


def _guard(fn, *args):
    try:
        return fn(*args)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        raise EvaluatorFailure(f"{fn.__name__} failed: {exc}") from exc


def _weak(problem: AllocationProblem, split: PowerSplit) -> channel.CapacityEstimate:
    if problem.evaluator == MONTE_CARLO:
        return _guard(channel.mc_weak_capacity, problem.cfg, split, problem.trials, problem.seed)
    return channel.CapacityEstimate(_guard(asymptotic.asym_weak_capacity, split, problem.cfg), 0.0, 1)


def _strong(problem: AllocationProblem, p_2: float) -> channel.CapacityEstimate:
    if problem.evaluator == MONTE_CARLO:
        return _guard(channel.mc_strong_capacity, problem.cfg, p_2, problem.trials, problem.seed)
    return channel.CapacityEstimate(_guard(asymptotic.asym_strong_capacity, p_2, problem.cfg), 0.0, 1)


def _bound(problem: AllocationProblem, split: PowerSplit) -> channel.CapacityEstimate:
    if problem.evaluator == MONTE_CARLO:
        return _guard(channel.mc_sic_bound, problem.cfg, split, problem.trials, problem.seed)
    return channel.CapacityEstimate(_guard(asymptotic.asym_sic_bound, split, problem.cfg), 0.0, 1)


def weak_capacity_at(problem: AllocationProblem, split: PowerSplit) -> float:
    return _weak(problem, split).value


def sum_capacity_at(problem: AllocationProblem, split: PowerSplit) -> tuple[float, float, float]:
    """``(C1, C2, C1 + C2)`` at ``split`` using the problem's evaluator."""
    c_1 = _weak(problem, split).value
    c_2 = _strong(problem, split.p_2).value
    return c_1, c_2, c_1 + c_2


def _sic(problem, split, weak_est):
    bound = _bound(problem, split)
    margin = bound.value - weak_est.value
    slack = 0.0
    if problem.evaluator == MONTE_CARLO:
        slack = 3.0 * math.hypot(bound.std_error, weak_est.std_error)
    return margin, margin >= -slack


def check_sic(problem: AllocationProblem, split: PowerSplit) -> tuple[float, bool]:
    """Margin between the strong user's decoding bound and the weak user's rate.

    A negative margin beyond the noise slack means SIC would fail; this is
    reported, not raised.
    """
    return _sic(problem, split, _weak(problem, split))


def bisect_allocate(problem: AllocationProblem) -> AllocationResult:
    """Smallest weak-user power that still meets ``r_0``; the rest goes to the strong user.

    Returns the lower end of the final bracket, which always satisfies the
    rate constraint. The final midpoint is kept in ``p_2_midpoint``.

    Raises
    ------
    InfeasibleRate
        If giving the whole budget to the weak user still misses ``r_0``.
    EvaluatorFailure
        If a capacity evaluation fails numerically.
    """
    budget = problem.budget
    calls = 0

    def weak_at(p_2):
        nonlocal calls
        calls += 1
        return _weak(problem, PowerSplit(max(budget - p_2, 0.0), p_2))

    best = weak_at(0.0)
    if best.value < problem.r_0:
        raise InfeasibleRate(problem.r_0, best.value)

    lo, hi = 0.0, budget
    mid = math.nan
    trace = []
    iterations = 0
    while hi - lo > problem.epsilon:
        mid = 0.5 * (lo + hi)
        est = weak_at(mid)
        iterations += 1
        trace.append((mid, est.value))
        if est.value < problem.r_0:
            hi = mid
        else:
            lo, best = mid, est

    split = PowerSplit(max(budget - lo, 0.0), lo)
    strong = _strong(problem, lo)
    calls += 1
    margin, sic_ok = _sic(problem, split, best)
    rate_tol = 3.0 * best.std_error if problem.evaluator == MONTE_CARLO else 0.0
    return AllocationResult(
        p_1=split.p_1,
        p_2=split.p_2,
        c_1=best.value,
        c_2=strong.value,
        sum=best.value + strong.value,
        iterations=iterations,
        feasible=best.value >= problem.r_0 - rate_tol,
        sic_ok=bool(sic_ok),
        evaluator_calls=calls,
        p_2_midpoint=mid,
        sic_margin=margin,
        std_error=math.hypot(best.std_error, strong.std_error),
        c_1_trace=trace,
    )
