"""
Eigenvalues of a large Rayleigh Gram matrix vs. the Marchenko-Pastur law
=======================================================================

Draw one normalized channel, compare its eigenvalue histogram with the law,
then check that the closed-form capacity agrees with direct quadrature.
"""

import numpy as np

from mmnoma import asymptotic as asy
from mmnoma.channel import gram_spectrum, sample_channel

rng = np.random.default_rng(0)

# a square channel (beta = 1): support [0, 4], no atom at zero
law = asy.mp_law(1.0)
for n in (128, 512, 2048):
    eigs = gram_spectrum(sample_channel(n, n, 1.0, rng))
    print(f"N={n:5d}  mean eigenvalue {eigs.mean():.4f}  "
          f"L1 distance to the law (50 bins) {asy.spectrum_l1_distance(eigs, law):.4f}")

# a tall channel (4 receive antennas per transmit antenna): 3/4 of the
# eigenvalues are exactly zero
eigs = gram_spectrum(sample_channel(400, 100, 1.0, rng))
print("\nbeta=4: fraction of zero eigenvalues", np.mean(eigs < 1e-10), "law:", asy.mp_law(4.0).zero_mass)

# capacity per receive antenna, closed form vs quadrature
print("\n  beta      c   closed form    quadrature")
for beta in (0.5, 1.0, 2.0):
    for c in (0.1, 1.0, 10.0):
        print(f"{beta:6.2f} {c:6.1f}  {asy.closed_form_capacity(c, beta):12.9f}  "
              f"{asy.asym_capacity_quadrature(c, beta, 1):12.9f}")
