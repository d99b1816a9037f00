"""Rayleigh-fading channel sampling and Monte-Carlo ergodic capacities.

Channel matrices are drawn as ``H = sqrt(gain) * G`` where ``G`` has i.i.d.
CN(0, 1/n_tx) entries, so the Gram matrix ``G G^H`` follows the
Marchenko-Pastur law with ratio ``n_rx / n_tx``.

Every trial draws from its own child stream derived from ``(seed, stream,
trial)``. Repeated calls with the same seed therefore see the same channel
realizations, which is what makes the bisection in :mod:`mmnoma.optimizer`
well defined in Monte-Carlo mode.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SystemConfig",
    "PowerSplit",
    "ChannelSample",
    "CapacityEstimate",
    "DEFAULT_TRIALS",
    "WEAK_STREAM",
    "STRONG_STREAM",
    "trial_rng",
    "sample_channel",
    "gram_spectrum",
    "channel_spectra",
    "shannon_logdet",
    "mc_weak_capacity",
    "mc_strong_capacity",
    "mc_sic_bound",
]

DEFAULT_TRIALS = 10

# spawn-key tags separating the two users' channel ensembles
WEAK_STREAM = 1
STRONG_STREAM = 2

_EIG_CLAMP = 1e-12


@dataclass(frozen=True)
class SystemConfig:
    """Antenna counts and channel gains of the two-user downlink.

    ``gain_1`` belongs to the weak user (treats interference as noise) and
    ``gain_2`` to the strong user (performs SIC). Gains are linear powers.
    """

    n_s: int
    n_1: int
    n_2: int
    gain_1: float
    gain_2: float

    def __post_init__(self):
        for name in ("n_s", "n_1", "n_2"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        for name in ("gain_1", "gain_2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        if self.gain_1 > self.gain_2:
            warnings.warn(
                f"weak-user gain ({self.gain_1:g}) exceeds strong-user gain "
                f"({self.gain_2:g}); SIC at the strong user may fail",
                stacklevel=3,
            )

    @classmethod
    def square(cls, n: int, gain_1: float, gain_2: float) -> "SystemConfig":
        """All three arrays of size ``n``."""
        return cls(n, n, n, gain_1, gain_2)

    @property
    def beta_1(self) -> float:
        return self.n_1 / self.n_s

    @property
    def beta_2(self) -> float:
        return self.n_2 / self.n_s


@dataclass(frozen=True)
class PowerSplit:
    """Per-antenna transmit powers for the weak (``p_1``) and strong (``p_2``) user."""

    p_1: float
    p_2: float

    def __post_init__(self):
        if not (self.p_1 >= 0 and self.p_2 >= 0):
            raise ValueError(f"powers must be nonnegative, got ({self.p_1!r}, {self.p_2!r})")

    @property
    def total(self) -> float:
        return self.p_1 + self.p_2


@dataclass(frozen=True)
class ChannelSample:
    entries: np.ndarray
    gain: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True)
class CapacityEstimate:
    """Monte-Carlo mean in bps/Hz with its standard error."""

    value: float
    std_error: float
    trials: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "CapacityEstimate":
        samples = np.asarray(samples, dtype=float)
        k = samples.size
        # plain left-to-right sum keeps the reduction order fixed
        mean = float(np.add.reduce(samples)) / k
        if k < 2 or np.all(samples == samples[0]):
            se = 0.0
        else:
            se = float(np.std(samples, ddof=1) / np.sqrt(k))
        return cls(max(mean, 0.0), se, k)


def trial_rng(seed, trial: int, stream: int = 0) -> np.random.Generator:
    """Generator for one trial, derived deterministically from the master seed."""
    if isinstance(seed, np.random.SeedSequence):
        entropy = seed.entropy
    else:
        entropy = seed
    return np.random.default_rng(np.random.SeedSequence(entropy, spawn_key=(stream, trial)))


def _unit_gaussian(n_rx: int, n_tx: int, rng: np.random.Generator) -> np.ndarray:
    # CN(0, 1/n_tx): real and imaginary parts each carry half the variance
    z = rng.standard_normal((n_rx, n_tx, 2)).view(np.complex128)[..., 0]
    return z * np.sqrt(0.5 / n_tx)


def sample_channel(n_rx: int, n_tx: int, gain: float, rng: np.random.Generator) -> ChannelSample:
    """Draw an ``n_rx x n_tx`` Rayleigh channel with entry variance ``gain / n_tx``."""
    g = _unit_gaussian(n_rx, n_tx, rng)
    return ChannelSample(np.sqrt(gain) * g, float(gain))


def _clamp(eigs: np.ndarray) -> np.ndarray:
    scale = np.maximum(1.0, np.max(np.abs(eigs), axis=-1, keepdims=True))
    if np.any(eigs < -_EIG_CLAMP * scale):
        raise np.linalg.LinAlgError("Gram matrix has a significantly negative eigenvalue")
    return np.where(eigs < 0, 0.0, eigs)


def _batched_spectrum(h: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of ``H H^H`` for a stack of matrices ``(..., n_rx, n_tx)``."""
    n_rx, n_tx = h.shape[-2:]
    hh = np.conj(np.swapaxes(h, -1, -2))
    # the nonzero spectrum is shared by H H^H and H^H H; factor the smaller one
    gram = h @ hh if n_rx <= n_tx else hh @ h
    eigs = _clamp(np.linalg.eigvalsh(gram))[..., ::-1]
    if n_rx > n_tx:
        pad = np.zeros(eigs.shape[:-1] + (n_rx - n_tx,))
        eigs = np.concatenate([eigs, pad], axis=-1)
    return np.ascontiguousarray(eigs)


def gram_spectrum(h: ChannelSample | np.ndarray) -> np.ndarray:
    """All ``n_rx`` eigenvalues of ``H H^H``, sorted descending and clamped at zero."""
    entries = h.entries if isinstance(h, ChannelSample) else np.asarray(h)
    if entries.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {entries.shape}")
    return _batched_spectrum(entries)


def channel_spectra(n_rx: int, n_tx: int, gain: float, trials: int, seed, stream: int) -> np.ndarray:
    """Gram spectra of ``trials`` independent channels, shape ``(trials, n_rx)``.

    Row ``t`` depends only on ``(seed, stream, t)``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    stack = np.empty((trials, n_rx, n_tx), dtype=np.complex128)
    for t in range(trials):
        stack[t] = _unit_gaussian(n_rx, n_tx, trial_rng(seed, t, stream))
    return gain * _batched_spectrum(stack)


def shannon_logdet(spectrum, alpha: float) -> float | np.ndarray:
    """``log2 det(I + alpha X)`` from the eigenvalues of ``X``.

    A 2-D ``spectrum`` is treated as one spectrum per row and returns an array.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    lam = np.asarray(spectrum, dtype=float)
    out = np.log1p(alpha * lam).sum(axis=-1) / np.log(2.0)
    return out if lam.ndim > 1 else float(out)


def _interference_rates(spectra: np.ndarray, split: PowerSplit) -> np.ndarray:
    if split.p_1 == 0:
        return np.zeros(spectra.shape[0])
    full = shannon_logdet(spectra, split.p_1 + split.p_2)
    if split.p_2 == 0:
        return np.atleast_1d(full)
    rates = full - shannon_logdet(spectra, split.p_2)
    # mathematically >= 0 per trial; cancellation can leave -1e-16
    return np.maximum(rates, 0.0)


def mc_weak_capacity(cfg: SystemConfig, split: PowerSplit, trials: int = DEFAULT_TRIALS,
                     seed=0) -> CapacityEstimate:
    """Ergodic rate of the weak user, which decodes with the strong user's signal as noise."""
    spectra = channel_spectra(cfg.n_1, cfg.n_s, cfg.gain_1, trials, seed, WEAK_STREAM)
    return CapacityEstimate.from_samples(_interference_rates(spectra, split))


def mc_strong_capacity(cfg: SystemConfig, p_2: float, trials: int = DEFAULT_TRIALS,
                       seed=0) -> CapacityEstimate:
    """Ergodic rate of the strong user after perfect SIC."""
    if p_2 < 0:
        raise ValueError(f"p_2 must be nonnegative, got {p_2}")
    if p_2 == 0:
        return CapacityEstimate(0.0, 0.0, trials)
    spectra = channel_spectra(cfg.n_2, cfg.n_s, cfg.gain_2, trials, seed, STRONG_STREAM)
    return CapacityEstimate.from_samples(shannon_logdet(spectra, p_2))


def mc_sic_bound(cfg: SystemConfig, split: PowerSplit, trials: int = DEFAULT_TRIALS,
                 seed=0) -> CapacityEstimate:
    """Rate at which the strong user can still decode the weak user's message.

    SIC succeeds when the weak user's rate stays below this value.
    """
    spectra = channel_spectra(cfg.n_2, cfg.n_s, cfg.gain_2, trials, seed, STRONG_STREAM)
    return CapacityEstimate.from_samples(_interference_rates(spectra, split))
