"""Fixed 16-state product basis for two optically driven quantum dots.

Each dot occupies one of four levels: the two spin-qubit states, or one of
the two trion states that sigma+ light can reach from them.  A two-dot basis
state is indexed as ``4*code(dot_a) + code(dot_b)`` with the fixed code map
(Q0, Q1, Xplus, Xminus) -> (0, 1, 2, 3), so serialized matrices and CSV
columns are reproducible across runs.

The 16 states split into 4 computational, 8 single-trion and 4 double-trion
states.  Under the sigma+ selection rules (1 <-> x+ and, through hole
mixing, 0 <-> x-) plus the transfer swap terms, the space partitions into
four disjoint 4-state manifolds, one per computational seed; the total
Hamiltonian never couples different manifolds.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable

import numpy as np

DIM = 16


class DotState(Enum):
    """Level of a single dot: qubit spin down/up or trion with h+/h- hole."""

    Q0 = 0   # electron spin -1/2, computational |0>
    Q1 = 1   # electron spin +1/2, computational |1>
    XPLUS = 2   # trion |x+> = singlet pair (x) predominantly +3/2 hole
    XMINUS = 3  # trion |x-> = singlet pair (x) predominantly -3/2 hole

    @property
    def is_qubit(self) -> bool:
        return self in (DotState.Q0, DotState.Q1)

    @property
    def is_trion(self) -> bool:
        return not self.is_qubit

    @property
    def spin(self) -> float:
        """Electron spin of a qubit level (+-1/2); undefined for trions."""
        if not self.is_qubit:
            raise ValueError(f"{self} is not a qubit level")
        return -0.5 if self is DotState.Q0 else +0.5

    @property
    def label(self) -> str:
        return {DotState.Q0: "0", DotState.Q1: "1",
                DotState.XPLUS: "x+", DotState.XMINUS: "x-"}[self]


@dataclass(frozen=True)
class TwoDotBasisState:
    dot_a: DotState
    dot_b: DotState

    @property
    def index(self) -> int:
        return 4 * self.dot_a.value + self.dot_b.value

    @property
    def n_trions(self) -> int:
        return int(self.dot_a.is_trion) + int(self.dot_b.is_trion)

    @property
    def is_computational(self) -> bool:
        return self.n_trions == 0

    @property
    def label(self) -> str:
        return self.dot_a.label + self.dot_b.label

    def swapped(self) -> "TwoDotBasisState":
        return TwoDotBasisState(self.dot_b, self.dot_a)

    def __repr__(self) -> str:
        return f"|{self.label}>"


@dataclass(frozen=True)
class Manifold:
    """One of the four disjoint 4-state blocks, keyed by its computational seed."""

    seed: TwoDotBasisState
    members: frozenset[TwoDotBasisState]

    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(s.index for s in self.members))


@lru_cache(maxsize=1)
def enumerate_basis() -> tuple[TwoDotBasisState, ...]:
    """All 16 basis states, ordered by index."""
    return tuple(TwoDotBasisState(a, b) for a in DotState for b in DotState)


def state_from_index(index: int) -> TwoDotBasisState:
    if not 0 <= index < DIM:
        raise ValueError(f"basis index {index} out of range 0..15")
    return enumerate_basis()[index]


def state_from_label(label: str) -> TwoDotBasisState:
    for s in enumerate_basis():
        if s.label == label:
            return s
    raise ValueError(f"unknown basis label {label!r}")


def computational_states() -> tuple[TwoDotBasisState, ...]:
    """The four qubit-product states, ordered 00, 01, 10, 11."""
    return tuple(s for s in enumerate_basis() if s.is_computational)


def single_trion_states() -> tuple[TwoDotBasisState, ...]:
    return tuple(s for s in enumerate_basis() if s.n_trions == 1)


def double_trion_states() -> tuple[TwoDotBasisState, ...]:
    return tuple(s for s in enumerate_basis() if s.n_trions == 2)


def projector(states: Iterable[TwoDotBasisState]) -> np.ndarray:
    """Diagonal 0/1 projector onto a nonempty subset of basis states."""
    states = list(states)
    if not states:
        raise ValueError("projector of an empty state set")
    p = np.zeros((DIM, DIM), dtype=complex)
    for s in states:
        p[s.index, s.index] = 1.0
    return p


# Structural coupling pattern of the total Hamiltonian, independent of any
# parameter values: sigma+ light drives 1 <-> x+ and 0 <-> x- on each dot,
# and the first-order transfer terms swap the excitation between dots.
_LIGHT_PAIRS = ((DotState.Q1, DotState.XPLUS), (DotState.Q0, DotState.XMINUS))
_TRANSFER_PAIRS = (("0x-", "x-0"), ("1x+", "x+1"), ("1x-", "x+0"), ("x-1", "0x+"))


def structural_adjacency() -> np.ndarray:
    """Symbolic 16x16 off-diagonal sparsity pattern of the total Hamiltonian."""
    adj = np.zeros((DIM, DIM), dtype=bool)

    def link(i: int, j: int) -> None:
        adj[i, j] = adj[j, i] = True

    for other in DotState:
        for q, x in _LIGHT_PAIRS:
            link(TwoDotBasisState(q, other).index, TwoDotBasisState(x, other).index)
            link(TwoDotBasisState(other, q).index, TwoDotBasisState(other, x).index)
    for la, lb in _TRANSFER_PAIRS:
        link(state_from_label(la).index, state_from_label(lb).index)
    return adj


@lru_cache(maxsize=1)
def manifolds() -> tuple[Manifold, ...]:
    """The four manifolds, computed once from the structural sparsity pattern.

    Connected components of the coupling graph, seeded by the computational
    states; ordered 00, 01, 10, 11.
    """
    adj = structural_adjacency()
    out = []
    for seed in computational_states():
        reached = {seed.index}
        frontier = [seed.index]
        while frontier:
            i = frontier.pop()
            for j in np.flatnonzero(adj[i]):
                if j not in reached:
                    reached.add(int(j))
                    frontier.append(int(j))
        out.append(Manifold(seed, frozenset(state_from_index(i) for i in reached)))
    return tuple(out)


def manifold_of(state: TwoDotBasisState) -> Manifold:
    """The unique manifold containing ``state``."""
    for m in manifolds():
        if state in m.members:
            return m
    raise AssertionError("manifolds do not cover the basis")  # pragma: no cover


def dot_swap_permutation() -> np.ndarray:
    """Permutation p with p[index(a, b)] = index(b, a)."""
    perm = np.empty(DIM, dtype=int)
    for s in enumerate_basis():
        perm[s.index] = s.swapped().index
    return perm
