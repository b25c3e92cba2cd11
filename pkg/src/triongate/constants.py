"""Unit conventions and physical constants.

All energies in this package are in meV and all times in ps; ``HBAR_MEV_PS``
converts between them.  Lengths are in nm.
"""

# hbar in meV*ps
HBAR_MEV_PS = 0.6582119569

# e^2 / (4 pi eps0) in meV*nm
COULOMB_MEV_NM = 1439.96

# hbar^2 / (2 m0) in meV*nm^2 (m0 = free electron mass); 0.0381 eV*nm^2
HBAR2_OVER_2M0_MEV_NM2 = 38.0998
