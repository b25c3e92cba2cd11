"""Rotating-frame Hamiltonian of two driven dots under a chirped pulse.

In the frame rotating at the laser frequency, with the qubit product state
|00> at zero energy,

    H(t) = sum_k [ delta |1>_k<1| + Delta_k(t) P_Xk + (Omega(t)/2) L_k ]
         + H_F + V_XX * (double-trion projector),

where P_Xk projects on a trion in dot k, L_k couples 1 <-> x+ with unit
weight and 0 <-> x- with weight eps_tilde (sigma+ light with hole mixing),
H_F holds the first-order transfer terms, and the chirped pulse supplies

    Omega(t) = Omega0 * exp(-(t/tau_Omega)^2)
    Delta(t) = -Delta0 * (1 - exp(-(t/tau_Delta)^2) / 2).

Both dots see one laser; per-dot detuning differences enter as static
offsets, Delta_k(t) = sign * Delta(t) + offset_k.  The sign convention of
the swept detuning relative to the pulse formula is fixed by
``PhysicalParams.detuning_sign``; the default (+1, the literal reading)
is the convention under which the chirped gate accumulates the entangling
phase pi in both operating regimes.

Energies are in meV and times in ps throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import (
    DIM,
    DotState,
    TwoDotBasisState,
    double_trion_states,
    enumerate_basis,
    projector,
)
from .foerster import ForsterCouplings, build_hf


@dataclass(frozen=True)
class PulseSchedule:
    """Chirped-pulse amplitudes, time scales and integration grid.

    omega0, delta0 in meV; tau_omega, tau_delta, t_start, t_end, dt in ps.
    """

    omega0: float
    tau_omega: float
    delta0: float
    tau_delta: float
    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if self.tau_omega <= 0 or self.tau_delta <= 0:
            raise ValueError("pulse time scales must be strictly positive")
        if not (self.t_start < 0.0 < self.t_end):
            raise ValueError("integration window must straddle t = 0")
        if self.dt <= 0:
            raise ValueError("time step must be positive")

    @classmethod
    def with_default_window(
        cls,
        omega0: float,
        tau_omega: float,
        delta0: float,
        tau_delta: float,
        dt: float = 1e-3,
        pad: float = 4.0,
    ) -> "PulseSchedule":
        """Window of +-pad*max(tau); at pad=4 the envelopes are < 2e-7 of peak."""
        half = pad * max(tau_omega, tau_delta)
        return cls(omega0, tau_omega, delta0, tau_delta, -half, half, dt)

    def scaled(self, factor: float) -> "PulseSchedule":
        """Stretch both pulse time scales and the window by ``factor``."""
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return PulseSchedule(
            self.omega0,
            self.tau_omega * factor,
            self.delta0,
            self.tau_delta * factor,
            self.t_start * factor,
            self.t_end * factor,
            self.dt,
        )


@dataclass(frozen=True)
class PhysicalParams:
    """Static couplings of the two-dot system (energies in meV).

    eps_tilde defaults to eps (equivalent to l_lh/l_hh = sqrt(3)); pass it
    explicitly to use a different dipole-length ratio.
    """

    delta: float
    eps: float
    couplings: ForsterCouplings
    vxx: float
    eps_tilde: float | None = None
    detuning_offset_a: float = 0.0
    detuning_offset_b: float = 0.0
    detuning_sign: float = 1.0

    def __post_init__(self):
        if abs(self.eps) >= 1:
            raise ValueError("|eps| must be < 1")
        if self.eps_tilde is not None and abs(self.eps_tilde) >= 1:
            raise ValueError("|eps_tilde| must be < 1")
        if self.detuning_sign not in (1.0, -1.0):
            raise ValueError("detuning_sign must be +1 or -1")

    @property
    def eps_tilde_value(self) -> float:
        return self.eps if self.eps_tilde is None else self.eps_tilde


def rabi_envelope(t, s: PulseSchedule):
    """Instantaneous Rabi amplitude Omega(t) in meV (peak omega0 at t=0)."""
    t = np.asarray(t, dtype=float)
    out = s.omega0 * np.exp(-((t / s.tau_omega) ** 2))
    return out if out.ndim else float(out)


def detuning(t, s: PulseSchedule):
    """Swept detuning Delta(t) in meV; -delta0/2 at t=0, -delta0 far out."""
    t = np.asarray(t, dtype=float)
    out = -s.delta0 * (1.0 - 0.5 * np.exp(-((t / s.tau_delta) ** 2)))
    return out if out.ndim else float(out)


def trion_projector(dot: str) -> np.ndarray:
    """Projector onto states with a trion in dot 'a' or 'b'."""
    which = {"a": lambda st: st.dot_a.is_trion, "b": lambda st: st.dot_b.is_trion}[dot]
    return projector([st for st in enumerate_basis() if which(st)])


def light_coupling_rwa(omega: float, eps_tilde: float, dot: str) -> np.ndarray:
    """Sigma+ coupling (Omega/2)(|1><x+| + eps_tilde |0><x-| + h.c.) on one dot."""
    return 0.5 * omega * _light_pattern(dot, eps_tilde)


def _light_pattern(dot: str, eps_tilde: float) -> np.ndarray:
    h = np.zeros((DIM, DIM), dtype=complex)
    for other in DotState:
        for q, x, wt in (
            (DotState.Q1, DotState.XPLUS, 1.0),
            (DotState.Q0, DotState.XMINUS, eps_tilde),
        ):
            if dot == "a":
                i, j = TwoDotBasisState(q, other).index, TwoDotBasisState(x, other).index
            else:
                i, j = TwoDotBasisState(other, q).index, TwoDotBasisState(other, x).index
            h[i, j] = wt
    return h + h.conj().T


@dataclass(frozen=True)
class HamiltonianTerms:
    """Precomputed pieces: H(t) = h_static + sign*Delta(t)*p_trions + Omega(t)*light."""

    h_static: np.ndarray
    p_trions: np.ndarray
    light: np.ndarray
    detuning_sign: float

    def at(self, t: float, s: PulseSchedule) -> np.ndarray:
        return self.at_values(rabi_envelope(t, s), self.detuning_sign * detuning(t, s))

    def at_values(self, omega: float, delta_val: float) -> np.ndarray:
        return self.h_static + delta_val * self.p_trions + omega * self.light


@lru_cache(maxsize=128)
def hamiltonian_terms(p: PhysicalParams) -> HamiltonianTerms:
    """Assemble the time-independent pieces of the total Hamiltonian once."""
    pa = trion_projector("a")
    pb = trion_projector("b")
    h0 = np.zeros((DIM, DIM), dtype=complex)
    for st in enumerate_basis():
        zeeman = p.delta * sum(d is DotState.Q1 for d in (st.dot_a, st.dot_b))
        h0[st.index, st.index] = zeeman
    h0 += p.detuning_offset_a * pa + p.detuning_offset_b * pb
    h0 += p.vxx * projector(double_trion_states())
    h0 += build_hf(p.eps, p.couplings, order="first_order")
    half_light = 0.5 * (_light_pattern("a", p.eps_tilde_value)
                        + _light_pattern("b", p.eps_tilde_value))
    return HamiltonianTerms(h0, pa + pb, half_light, p.detuning_sign)


def build_total(t: float, p: PhysicalParams, s: PulseSchedule) -> np.ndarray:
    """Full 16x16 rotating-frame Hamiltonian at time t, in meV."""
    return hamiltonian_terms(p).at(t, s)


def spectrum_sweep(
    p: PhysicalParams,
    omega_fixed: float,
    ratio_grid,
) -> np.ndarray:
    """Sorted eigenvalues (meV) of the static Hamiltonian along Delta/Omega.

    Holds Omega at ``omega_fixed`` and sets Delta = ratio * Omega per grid
    point (no pulse shapes); returns an (n_grid, 16) array, eigenvalues
    ascending within each row.
    """
    ratios = np.atleast_1d(np.asarray(ratio_grid, dtype=float))
    if ratios.size == 0:
        raise ValueError("ratio grid must be nonempty")
    terms = hamiltonian_terms(p)
    out = np.empty((ratios.size, DIM))
    for i, r in enumerate(ratios):
        h = terms.at_values(omega_fixed, r * omega_fixed)
        out[i] = np.linalg.eigvalsh(h)
    return out
