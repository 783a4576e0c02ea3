"""Physical constants in the unit system used throughout the package.

Units: distance in angstrom (A), time in milliseconds (ms), magnetic field
in millitesla (mT).  Energies are expressed as angular frequencies in
rad/ms, gyromagnetic ratios in rad/(ms*mT).  With these choices electron
dipolar couplings at a few hundred angstrom land near 1 rad/ms.
"""

import numpy as np

# hbar in J*s (exact, from the 2019 SI definition of h)
HBAR_SI = 1.0545718176461565e-34

# Point-dipole prefactor: tensor = DIPOLAR_COEFF * gamma_a * gamma_b *
# (1 - 3 n@n) / r^3, gammas in rad/(ms*mT), r in A, result in rad/ms.
# Equals (mu0 / 4 pi) * hbar converted into the package units.
DIPOLAR_COEFF = HBAR_SI * 1e32

# k_B / hbar in rad/(ms*K), converts temperature to angular frequency.
KB_PER_HBAR = 1.380649e-23 / HBAR_SI * 1e-3

# Gyromagnetic ratios in rad/(ms*mT).
GAMMA_ELECTRON = -1.7608597050e5
GAMMA_1H = 267.5221874
GAMMA_13C = 67.2828
GAMMA_19F = 251.8148
GAMMA_31P = 108.291

GYROMAGNETIC_RATIOS = {
    "electron": GAMMA_ELECTRON,
    "1H": GAMMA_1H,
    "13C": GAMMA_13C,
    "19F": GAMMA_19F,
    "31P": GAMMA_31P,
}

# Hilbert-space dimension above which full-space construction refuses to run.
DEFAULT_DIMENSION_CAP = 2**16

IDENTITY3 = np.eye(3)
