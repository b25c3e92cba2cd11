"""Heavy-light hole sub-band mixing from the four-band Luttinger-Kohn model.

The bulk model couples the valence states {+3/2, +1/2, -1/2, -3/2} through
the k-dependent terms b and c.  For a confined dot the momentum components
are replaced by envelope expectation values; with a well-defined envelope
parity b vanishes and the problem splits into two 2x2 blocks, {+3/2, -1/2}
and {-3/2, +1/2}.  For a parabolic trap, with trap energies hbar*omega_j
given directly in meV, the block reads

    H = (1/4) [[2*wT + dEh,  W ],
               [ W,  2*wT - dEh]],

    wT  = wx + wy + wz
    dEh = (wT - 3*wz) * g2/g1
    W   = sqrt(3)*(g2 + g3)/2 * (wx - wy),

so the light-hole admixture of the predominantly heavy state is
eps ~ W / (2*dEh) when the sub-band splitting dominates the coupling.
The split-off band is energetically distant and excluded throughout.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import HBAR2_OVER_2M0_MEV_NM2

# Row/column order of the bulk 4x4 Hamiltonian (hole Jz).
JZ_ORDER = (+1.5, +0.5, -0.5, -1.5)


@dataclass(frozen=True)
class LuttingerParams:
    """Dimensionless Luttinger parameters gamma1, gamma2, gamma3."""

    gamma1: float
    gamma2: float
    gamma3: float

    def __post_init__(self):
        if self.gamma1 <= 0:
            raise ValueError("gamma1 must be positive")
        if self.gamma1 <= 2 * self.gamma2:
            raise ValueError("gamma1 <= 2*gamma2: heavy-hole mass not positive")


@dataclass(frozen=True)
class TrapFrequencies:
    """Trap energies hbar*omega_j in meV, one per axis."""

    omega_x: float
    omega_y: float
    omega_z: float

    def __post_init__(self):
        if min(self.omega_x, self.omega_y, self.omega_z) <= 0:
            raise ValueError("trap energies must be strictly positive")

    @property
    def total(self) -> float:
        return self.omega_x + self.omega_y + self.omega_z


@dataclass(frozen=True)
class KVector:
    """Envelope expectation values <k> in nm^-1."""

    kx: float
    ky: float
    kz: float

    def __post_init__(self):
        for v in (self.kx, self.ky, self.kz):
            if not math.isfinite(v):
                raise ValueError("k components must be finite")


class HoleKind(Enum):
    H_PLUS = "h+"
    H_MINUS = "h-"
    HPRIME_PLUS = "h'+"
    HPRIME_MINUS = "h'-"


@dataclass(frozen=True)
class MixedHoleState:
    """A mixed hole eigenstate; amplitudes over the Jz basis of JZ_ORDER."""

    eps: float
    kind: HoleKind
    amplitudes: tuple[float, float, float, float]

    def amplitude(self, jz: float) -> float:
        return self.amplitudes[JZ_ORDER.index(jz)]


def lk_bulk_hamiltonian(
    p: LuttingerParams,
    k: KVector,
    scale: float = HBAR2_OVER_2M0_MEV_NM2,
) -> np.ndarray:
    """Bulk 4x4 Luttinger-Kohn Hamiltonian in meV, basis JZ_ORDER.

    ``scale`` is hbar^2/(2 m) in meV*nm^2; the default uses the free
    electron mass, so k is in nm^-1 and energies come out in meV.
    """
    kp2 = k.kx**2 + k.ky**2
    h_hh = scale * (k.kz**2 * (p.gamma1 - 2 * p.gamma2) + kp2 * (p.gamma1 + p.gamma2))
    h_lh = scale * (k.kz**2 * (p.gamma1 + 2 * p.gamma2) + kp2 * (p.gamma1 - p.gamma2))
    c = math.sqrt(3) * scale * (p.gamma2 * (k.kx**2 - k.ky**2) - 2j * p.gamma3 * k.kx * k.ky)
    b = 2 * math.sqrt(3) * scale * p.gamma3 * k.kz * (k.kx - 1j * k.ky)
    return np.array(
        [
            [h_hh, -b, -c, 0.0],
            [-np.conj(b), h_lh, 0.0, -c],
            [-np.conj(c), 0.0, h_lh, b],
            [0.0, -np.conj(c), np.conj(b), h_hh],
        ],
        dtype=complex,
    )


def _w_and_deh(p: LuttingerParams, w: TrapFrequencies) -> tuple[float, float]:
    deh = (w.total - 3 * w.omega_z) * p.gamma2 / p.gamma1
    wmix = math.sqrt(3) * (p.gamma2 + p.gamma3) / 2 * (w.omega_x - w.omega_y)
    return wmix, deh


def parabolic_block(p: LuttingerParams, w: TrapFrequencies) -> np.ndarray:
    """2x2 confined-hole block in meV, basis {+3/2, -1/2} (or {-3/2, +1/2})."""
    wmix, deh = _w_and_deh(p, w)
    wt = w.total
    return 0.25 * np.array([[2 * wt + deh, wmix], [wmix, 2 * wt - deh]])


def mixing_epsilon(p: LuttingerParams, w: TrapFrequencies) -> float:
    """Perturbative hole mixing amplitude eps = W / (2*dEh), sign preserved.

    Warns (without failing) when 2|dEh| < 5|W|, where the perturbative
    estimate degrades; raises for degenerate sub-bands (dEh = 0).
    """
    wmix, deh = _w_and_deh(p, w)
    if deh == 0.0:
        raise ValueError("degenerate hole sub-bands (dEh = 0); eps undefined")
    if wmix != 0.0 and abs(2 * deh / wmix) < 5:
        warnings.warn(
            "sub-band splitting only %.3g x the mixing term; perturbative eps "
            "is unreliable" % abs(2 * deh / wmix),
            stacklevel=2,
        )
    return wmix / (2 * deh)


def mixing_epsilon_exact(p: LuttingerParams, w: TrapFrequencies) -> float:
    """Mixing amplitude from the exact 2x2 rotation, tan(atan(W/dEh)/2)."""
    wmix, deh = _w_and_deh(p, w)
    if deh == 0.0 and wmix == 0.0:
        return 0.0
    if deh == 0.0:
        raise ValueError("degenerate hole sub-bands (dEh = 0); eps undefined")
    return math.tan(0.5 * math.atan(wmix / deh))


def heavy_light_splitting(p: LuttingerParams, w: TrapFrequencies) -> float:
    """Eigenvalue gap of the confined 2x2 block, (1/2)*sqrt(dEh^2 + W^2), meV."""
    wmix, deh = _w_and_deh(p, w)
    return 0.5 * math.hypot(deh, wmix)


def hole_eigenstates(eps: float) -> dict[HoleKind, MixedHoleState]:
    """The four mixed hole states for a given mixing amplitude.

    h+ and h- are the degenerate, predominantly heavy pair; h'+ and h'- are
    predominantly light.  h+ mixes only {+3/2, -1/2}; h- only {-3/2, +1/2}.
    """
    if abs(eps) >= 1:
        raise ValueError("mixing amplitude must satisfy |eps| < 1")
    c = math.sqrt(1 - eps * eps)
    states = {
        HoleKind.H_PLUS: (c, 0.0, eps, 0.0),
        HoleKind.HPRIME_MINUS: (-eps, 0.0, c, 0.0),
        HoleKind.H_MINUS: (0.0, eps, 0.0, c),
        HoleKind.HPRIME_PLUS: (0.0, c, 0.0, -eps),
    }
    return {k: MixedHoleState(eps, k, amps) for k, amps in states.items()}
