"""Power allocation for two-user massive-MIMO NOMA.

Ergodic capacities are available from two evaluators: Monte-Carlo averaging
of log-det expressions (:mod:`mmnoma.channel`) and closed forms from the
Marchenko-Pastur law (:mod:`mmnoma.asymptotic`). :mod:`mmnoma.optimizer`
runs the bisection power allocation on top of either one, and
:mod:`mmnoma.bench` sweeps and times it.
"""

from .asymptotic import (
    EffectiveSnrs,
    MpLaw,
    asym_capacity_quadrature,
    asym_sic_bound,
    asym_strong_capacity,
    asym_weak_capacity,
    closed_form_capacity,
    effective_snrs,
    mp_density,
    mp_law,
    q_factor,
)
from .channel import (
    CapacityEstimate,
    ChannelSample,
    PowerSplit,
    SystemConfig,
    gram_spectrum,
    mc_sic_bound,
    mc_strong_capacity,
    mc_weak_capacity,
    sample_channel,
    shannon_logdet,
)
from .optimizer import (
    AllocationProblem,
    AllocationResult,
    EvaluatorFailure,
    InfeasibleRate,
    bisect_allocate,
    check_sic,
    sum_capacity_at,
)

__version__ = "0.1.0"
