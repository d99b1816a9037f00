"""Self-checks of the capacity machinery, run by ``mmnoma validate``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import asymptotic
from .asymptotic import mp_law
from .channel import gram_spectrum, sample_channel


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def mp_normalization(betas=(0.25, 0.5, 1.0, 2.0, 4.0), tol=1e-9) -> CheckResult:
    worst = 0.0
    for beta in betas:
        law = mp_law(beta)
        mass = float(asymptotic.mp_bin_probabilities([law.a, law.b], law)[0])
        worst = max(worst, abs(mass + law.zero_mass - 1.0))
    return CheckResult("mp-normalization", worst < tol, f"max |mass - 1| = {worst:.3e} (tol {tol:g})")


def closed_form_vs_quadrature(cs=(0.01, 0.1, 1.0, 10.0, 100.0), betas=(0.5, 1.0, 2.0),
                              tol=1e-6) -> CheckResult:
    worst = 0.0
    for beta in betas:
        for c in cs:
            quad = asymptotic.asym_capacity_quadrature(c, beta, 1)
            worst = max(worst, abs(asymptotic.closed_form_capacity(c, beta) - quad))
    return CheckResult("closed-form-vs-quadrature", worst < tol,
                       f"max per-antenna deviation = {worst:.3e} (tol {tol:g})")


def spectrum_histogram(n=512, bins=50, seed=0, tol=0.05) -> CheckResult:
    rng = np.random.default_rng(seed)
    eigs = gram_spectrum(sample_channel(n, n, 1.0, rng))
    dist = asymptotic.spectrum_l1_distance(eigs, mp_law(1.0), bins)
    return CheckResult("spectrum-histogram", dist < tol, f"L1 distance = {dist:.4f} (tol {tol:g})")


def run_all(seed: int = 0) -> list[CheckResult]:
    return [mp_normalization(), closed_form_vs_quadrature(), spectrum_histogram(seed=seed)]
