"""Dipole-dipole (Foerster) transfer between trions on adjacent dots.

For vertically stacked dots the inter-dot axis lies along z and the
interaction conserves the net angular momentum Jz(hole) + Jz(electron) of
the transferring electron-hole pair.  The nonzero matrix elements between
pure-Jz exciton states are tabulated in ``SELECTION_TABLE`` in units of the
coupling magnitudes

    M_ij = e^2 / (12 pi eps0 eps_r R^3) * W1 * W2 * l_i * l_j,

with i, j in {hh, lh}, l_i the interband dipole lengths and W1, W2 the
envelope overlaps.  Trions carry mixed holes, with a light-hole admixture
of amplitude eps on top of the dominant heavy component; expanding both
trions over pure-Jz excitons and summing table entries with the product
amplitudes gives the transfer element between any two-dot basis states.

Couplings are usually set phenomenologically (all figures of merit are
quoted in meV directly); ``ForsterCouplings.from_scale`` derives them from
the geometric prefactor and dipole lengths instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .basis import DIM, DotState, TwoDotBasisState, enumerate_basis, state_from_label
from .constants import COULOMB_MEV_NM

SQRT3 = math.sqrt(3.0)

_HOLE_JZ = (-1.5, -0.5, 0.5, 1.5)
_ELECTRON_JZ = (-0.5, 0.5)


@dataclass(frozen=True)
class ExcitonAM:
    """Angular momentum labels (hole Jz, electron Jz) of an exciton."""

    jz_hole: float
    jz_electron: float

    def __post_init__(self):
        if self.jz_hole not in _HOLE_JZ:
            raise ValueError(f"hole Jz must be one of {_HOLE_JZ}")
        if self.jz_electron not in _ELECTRON_JZ:
            raise ValueError(f"electron Jz must be one of {_ELECTRON_JZ}")

    @property
    def net_jz(self) -> float:
        return self.jz_hole + self.jz_electron

    def key(self) -> tuple[float, float]:
        return (self.jz_hole, self.jz_electron)


@dataclass(frozen=True)
class DipoleLengths:
    """Interband dipole lengths l_hh, l_lh in nm."""

    l_hh: float
    l_lh: float

    def __post_init__(self):
        if self.l_hh <= 0 or self.l_lh <= 0:
            raise ValueError("dipole lengths must be strictly positive")

    def of(self, band: str) -> float:
        return {"hh": self.l_hh, "lh": self.l_lh}[band]


@dataclass(frozen=True)
class ForsterScale:
    """Geometric prefactor of the coupling magnitudes.

    eps_r: relative permittivity; r_nm: inter-dot distance along z;
    w1, w2: envelope overlap integrals (dimensionless, |W| <= 1).
    """

    eps_r: float
    r_nm: float
    w1: float
    w2: float
    coulomb_mev_nm: float = COULOMB_MEV_NM

    def __post_init__(self):
        if self.eps_r < 1:
            raise ValueError("relative permittivity must be >= 1")
        if self.r_nm <= 0:
            raise ValueError("inter-dot distance must be positive")
        if abs(self.w1) > 1 or abs(self.w2) > 1:
            raise ValueError("envelope overlaps must satisfy |W| <= 1")


@dataclass(frozen=True)
class ForsterCouplings:
    """Coupling magnitudes in meV; may be set independently per channel."""

    m_hh_hh: float
    m_lh_lh: float
    m_lh_hh: float

    @classmethod
    def from_scale(cls, scale: ForsterScale, lengths: DipoleLengths) -> "ForsterCouplings":
        return cls(
            m_hh_hh=m_ij(scale, lengths, "hh", "hh"),
            m_lh_lh=m_ij(scale, lengths, "lh", "lh"),
            m_lh_hh=m_ij(scale, lengths, "lh", "hh"),
        )


def m_ij(scale: ForsterScale, lengths: DipoleLengths, i: str, j: str) -> float:
    """Coupling magnitude M_ij in meV for bands i, j in {hh, lh}."""
    pref = scale.coulomb_mev_nm / (3.0 * scale.eps_r * scale.r_nm**3)
    return pref * scale.w1 * scale.w2 * lengths.of(i) * lengths.of(j)


# Orbital parts of the Bloch functions on the unit sphere.
_ORBITALS = {
    "X": lambda th, ph: math.sqrt(3 / (4 * math.pi)) * np.sin(th) * np.cos(ph),
    "Y": lambda th, ph: math.sqrt(3 / (4 * math.pi)) * np.sin(th) * np.sin(ph),
    "Z": lambda th, ph: math.sqrt(3 / (4 * math.pi)) * np.cos(th),
    "S": lambda th, ph: 1.0 / math.sqrt(4 * math.pi) + 0.0 * th,
}
_AXES = {
    "x": lambda th, ph: np.sin(th) * np.cos(ph),
    "y": lambda th, ph: np.sin(th) * np.sin(ph),
    "z": lambda th, ph: np.cos(th) + 0.0 * ph,
}


def angular_integral(orbital: str, axis: str) -> float:
    """Solid-angle integral of <r|orbital> * (axis direction) * <r|S>.

    Returns the coefficient of r, evaluated by 2d quadrature over
    (theta, phi); 1/sqrt(3) for a matching orbital/axis pair, else 0.
    """
    forb = _ORBITALS[orbital]
    fax = _AXES[axis]

    def integrand(ph, th):
        return forb(th, ph) * fax(th, ph) * _ORBITALS["S"](th, ph) * np.sin(th)

    val, err = integrate.dblquad(integrand, 0.0, math.pi, 0.0, 2 * math.pi,
                                 epsabs=1e-10, epsrel=1e-10)
    if err > 1e-8:
        raise RuntimeError(f"angular quadrature error {err:g} above 1e-8")
    return val


# Selection table: nonzero transfer elements between pure-Jz excitons, as
# (coupling channel, coefficient), keyed by the unordered pair of
# (hole Jz, electron Jz) labels.  Pairs with unequal net Jz, and the net
# Jz = +-2 excitons (vanishing interband dipole), do not appear.
SELECTION_ROWS = (
    ((-1.5, 0.5), (-1.5, 0.5), "hh_hh", 1.0),
    ((1.5, -0.5), (1.5, -0.5), "hh_hh", 1.0),
    ((-0.5, 0.5), (-0.5, 0.5), "lh_lh", -4.0 / 3.0),
    ((0.5, -0.5), (0.5, -0.5), "lh_lh", -4.0 / 3.0),
    ((-0.5, 0.5), (0.5, -0.5), "lh_lh", 4.0 / 3.0),
    ((-0.5, -0.5), (-0.5, -0.5), "lh_lh", 1.0 / 3.0),
    ((0.5, 0.5), (0.5, 0.5), "lh_lh", 1.0 / 3.0),
    ((-1.5, 0.5), (-0.5, -0.5), "lh_hh", 1.0 / SQRT3),
    ((1.5, -0.5), (0.5, 0.5), "lh_hh", 1.0 / SQRT3),
)

SELECTION_TABLE: dict[tuple, tuple[str, float]] = {}
for _s1, _s2, _ch, _co in SELECTION_ROWS:
    SELECTION_TABLE[tuple(sorted((_s1, _s2)))] = (_ch, _co)


def _channel_value(c: ForsterCouplings, channel: str) -> float:
    return {"hh_hh": c.m_hh_hh, "lh_lh": c.m_lh_lh, "lh_hh": c.m_lh_hh}[channel]


def table1_element(s1: ExcitonAM, s2: ExcitonAM, c: ForsterCouplings) -> float:
    """Transfer element between two pure-Jz excitons, in meV.

    Zero when the net Jz differs (angular momentum conservation) or the
    pair carries no interband dipole; symmetric in its two arguments.
    """
    if s1.net_jz != s2.net_jz:
        return 0.0
    entry = SELECTION_TABLE.get(tuple(sorted((s1.key(), s2.key()))))
    if entry is None:
        return 0.0
    channel, coef = entry
    return coef * _channel_value(c, channel)


# Hole content of each trion, in the convention of the transfer operator:
# the dominant component enters with amplitude 1 and the light-hole
# admixture with amplitude eps.
def _trion_hole_components(level: DotState, eps: float) -> tuple[tuple[float, float], ...]:
    if level is DotState.XPLUS:
        return ((+1.5, 1.0), (-0.5, eps))
    if level is DotState.XMINUS:
        return ((-1.5, 1.0), (+0.5, eps))
    raise ValueError(f"{level} is not a trion level")


def trion_transfer_element(
    bra: TwoDotBasisState,
    ket: TwoDotBasisState,
    eps: float,
    c: ForsterCouplings,
) -> float:
    """Matrix element of the trion transfer operator between basis states.

    Nonzero only between single-trion states whose trions sit on opposite
    dots.  The annihilated pair takes its electron from the source singlet
    (the partner stays behind as the qubit), the created pair's electron
    must close a singlet with the destination's resident electron, and
    every channel is read off the selection table; hole components of both
    trions are summed with product amplitudes, so the result is kept to all
    orders in eps.
    """
    if ket.n_trions != 1 or bra.n_trions != 1:
        return 0.0
    src_is_a = ket.dot_a.is_trion
    ket_trion, ket_qubit = (ket.dot_a, ket.dot_b) if src_is_a else (ket.dot_b, ket.dot_a)
    bra_trion, bra_qubit = (bra.dot_b, bra.dot_a) if src_is_a else (bra.dot_a, bra.dot_b)
    if bra_trion.is_qubit or bra_qubit.is_trion:
        return 0.0  # bra trion must sit on the destination dot

    e_created = -ket_qubit.spin       # pairs into a singlet with the resident spin
    e_annihilated = -bra_qubit.spin   # its singlet partner is left behind

    total = 0.0
    for jz1, a1 in _trion_hole_components(ket_trion, eps):
        s1 = ExcitonAM(jz1, e_annihilated)
        for jz2, a2 in _trion_hole_components(bra_trion, eps):
            s2 = ExcitonAM(jz2, e_created)
            total += a1 * a2 * table1_element(s1, s2, c)
    return total


def build_hf(eps: float, c: ForsterCouplings, order: str = "first_order") -> np.ndarray:
    """Transfer Hamiltonian on the 16-state basis, Hermitian, in meV.

    ``first_order`` keeps the leading channels only: the direct excitation
    swaps with magnitude M_hh,hh and the mixing-assisted cross terms with
    magnitude 2*eps*M_lh,hh/sqrt(3).  ``exact`` fills every element from
    ``trion_transfer_element``.
    """
    if abs(eps) >= 1:
        raise ValueError("mixing amplitude must satisfy |eps| < 1")
    h = np.zeros((DIM, DIM), dtype=complex)
    if order == "first_order":
        cross = 2.0 * c.m_lh_hh * eps / SQRT3
        for la, lb, val in (
            ("0x-", "x-0", c.m_hh_hh),
            ("1x+", "x+1", c.m_hh_hh),
            ("1x-", "x+0", cross),
            ("x-1", "0x+", cross),
        ):
            h[state_from_label(la).index, state_from_label(lb).index] = val
        h = h + h.conj().T
    elif order == "exact":
        states = enumerate_basis()
        for m in states:
            for n in states:
                val = trion_transfer_element(m, n, eps, c)
                if val != 0.0:
                    h[m.index, n.index] = val
    else:
        raise ValueError(f"unknown order {order!r}")
    return h
