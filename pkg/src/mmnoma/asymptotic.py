"""Large-array capacities from the Marchenko-Pastur law.

Conventions
-----------
``beta`` is the receive/transmit ratio ``n_rx / n_tx`` of a channel ``G``
whose entries are CN(0, 1/n_tx). The Gram matrix ``X = G G^H`` (size
``n_rx``) then has the Marchenko-Pastur density

    f(x) = sqrt((x - a)+ (b - x)+) / (2 pi beta x) + (1 - 1/beta)+ delta(x)

with ``a = (1 - sqrt(beta))**2`` and ``b = (1 + sqrt(beta))**2``.

The closed-form capacity

    V(c, beta) = beta log2(1 + c - Q) + log2(1 + c beta - Q) - Q log2(e) / c

equals ``(1/n_tx) log2 det(I + c X)`` in the large-array limit, i.e. it is
normalized per *transmit* antenna. Read as a per-receive-antenna quantity
it is only correct for ``beta = 1``; for other ratios it is off by a factor
``beta`` (for example ``c = 1``, ``beta = 2``: quadrature gives 0.71322 per
receive antenna, ``V`` gives 1.42644). :func:`closed_form_capacity`
therefore returns ``V(c, beta) / beta`` per receive antenna, which matches
:func:`asym_capacity_quadrature` to round-off for all ``beta``.
Totals are ``n_rx * V / beta = n_tx * V``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .channel import PowerSplit, SystemConfig

__all__ = [
    "MpLaw",
    "EffectiveSnrs",
    "mp_law",
    "mp_density",
    "mp_bin_probabilities",
    "spectrum_l1_distance",
    "q_factor",
    "effective_snrs",
    "closed_form_capacity",
    "asym_capacity_quadrature",
    "asym_strong_capacity",
    "asym_weak_capacity",
    "asym_sic_bound",
]

LOG2E = 1.0 / math.log(2.0)

# below this effective SNR every capacity is returned as exactly zero
_C_FLOOR = 1e-12


@dataclass(frozen=True)
class MpLaw:
    beta: float
    a: float
    b: float
    zero_mass: float


@dataclass(frozen=True)
class EffectiveSnrs:
    c_1: float
    c_2: float
    c_3: float


def mp_law(beta: float) -> MpLaw:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    r = math.sqrt(beta)
    return MpLaw(beta, (1.0 - r) ** 2, (1.0 + r) ** 2, max(0.0, 1.0 - 1.0 / beta))


def mp_density(x, law: MpLaw):
    """Continuous part of the Marchenko-Pastur density (the atom at 0 is excluded)."""
    x = np.asarray(x, dtype=float)
    inside = (x > law.a) & (x < law.b)
    xs = np.where(inside, x, 1.0)
    val = np.sqrt(np.clip((xs - law.a) * (law.b - xs), 0.0, None)) / (2 * np.pi * law.beta * xs)
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def _mp_cdf_continuous(x: float, law: MpLaw) -> float:
    """Mass of the continuous part on ``[a, x]``.

    Uses ``x = a + (b - a) sin(t)**2`` which turns the square-root edges
    into a smooth integrand.
    """
    if x <= law.a:
        return 0.0
    x = min(x, law.b)
    t_hi = math.asin(math.sqrt((x - law.a) / (law.b - law.a)))
    val, _ = integrate.quad(_mp_kernel, 0.0, t_hi, args=(law, None), epsabs=1e-13, epsrel=1e-12,
                            limit=200)
    return val


def _mp_kernel(t: float, law: MpLaw, alpha: float | None) -> float:
    # f(x) dx/dt after x = a + (b - a) sin^2 t
    w = law.b - law.a
    s, c = math.sin(t), math.cos(t)
    x = law.a + w * s * s
    if x > 0.0:
        dens = w * w * s * s * c * c / (math.pi * law.beta * x)
    else:
        # a = 0 and t = 0: removable singularity
        dens = w * c * c / (math.pi * law.beta)
    if alpha is None:
        return dens
    return math.log1p(alpha * x) * LOG2E * dens


def mp_bin_probabilities(edges, law: MpLaw) -> np.ndarray:
    """Continuous-part probability mass of each histogram bin."""
    cdf = np.array([_mp_cdf_continuous(float(e), law) for e in edges])
    return np.diff(cdf)


def spectrum_l1_distance(eigenvalues, law: MpLaw, bins: int = 50) -> float:
    """L1 distance between an empirical spectrum and the law over ``bins`` bins on ``[a, b]``.

    Both sides are compared as bin probabilities; eigenvalues outside the
    support count towards the edge bins.
    """
    eigs = np.clip(np.asarray(eigenvalues, dtype=float), law.a, law.b)
    edges = np.linspace(law.a, law.b, bins + 1)
    counts, _ = np.histogram(eigs, bins=edges)
    empirical = counts / eigs.size
    return float(np.abs(empirical - mp_bin_probabilities(edges, law)).sum())


def q_factor(c: float, beta: float) -> float:
    """``(sqrt(c(1+sqrt(beta))^2+1) - sqrt(c(1-sqrt(beta))^2+1))^2 / 4``.

    Evaluated as ``4 c^2 beta / (A + B)^2`` to avoid cancellation at small ``c``.
    """
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    r = math.sqrt(beta)
    big = math.sqrt(c * (1 + r) ** 2 + 1)
    small = math.sqrt(c * (1 - r) ** 2 + 1)
    return 4.0 * c * c * beta / (big + small) ** 2


def _v(c: float, beta: float) -> float:
    # V(c, beta) from the module docstring, normalized per transmit antenna
    if c < _C_FLOOR:
        return 0.0
    q = q_factor(c, beta)
    q_over_c = 4.0 * c * beta / (math.sqrt(c * (1 + math.sqrt(beta)) ** 2 + 1)
                                 + math.sqrt(c * (1 - math.sqrt(beta)) ** 2 + 1)) ** 2
    return LOG2E * (beta * math.log1p(c - q) + math.log1p(c * beta - q) - q_over_c)


def closed_form_capacity(c: float, beta: float) -> float:
    """Asymptotic ``(1/n_rx) log2 det(I + c X)`` in closed form, per receive antenna."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    return _v(c, beta) / beta


def asym_capacity_quadrature(alpha: float, beta: float, n_rx: int) -> float:
    """Total asymptotic capacity ``n_rx * integral log2(1 + alpha x) f(x) dx`` by quadrature."""
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    if alpha == 0:
        return 0.0
    law = mp_law(beta)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(_mp_kernel, 0.0, math.pi / 2, args=(law, alpha),
                                    epsabs=1e-11, epsrel=1e-12, limit=200)
        except integrate.IntegrationWarning as exc:
            raise ArithmeticError(f"quadrature failed for alpha={alpha}, beta={beta}: {exc}") from exc
    return n_rx * val


def effective_snrs(split: PowerSplit, cfg: SystemConfig) -> EffectiveSnrs:
    return EffectiveSnrs(
        c_1=split.total * cfg.gain_1,
        c_2=split.p_2 * cfg.gain_1,
        c_3=split.p_2 * cfg.gain_2,
    )


def asym_strong_capacity(p_2: float, cfg: SystemConfig) -> float:
    if p_2 < 0:
        raise ValueError(f"p_2 must be nonnegative, got {p_2}")
    return cfg.n_2 * closed_form_capacity(p_2 * cfg.gain_2, cfg.beta_2)


def _difference(c_hi: float, c_lo: float, beta: float, n_rx: int) -> float:
    if c_hi <= c_lo:
        return 0.0
    return max(0.0, n_rx * (closed_form_capacity(c_hi, beta) - closed_form_capacity(c_lo, beta)))


def asym_weak_capacity(split: PowerSplit, cfg: SystemConfig) -> float:
    """Weak-user rate with the strong user's signal treated as noise (total, bps/Hz)."""
    snr = effective_snrs(split, cfg)
    return _difference(snr.c_1, snr.c_2, cfg.beta_1, cfg.n_1)


def asym_sic_bound(split: PowerSplit, cfg: SystemConfig) -> float:
    """Weak-user rate the strong user can decode; SIC needs the weak rate below this."""
    return _difference(split.total * cfg.gain_2, split.p_2 * cfg.gain_2, cfg.beta_2, cfg.n_2)
