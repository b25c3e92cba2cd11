"""Adiabatic two-qubit phase gates for spin qubits in coupled quantum dots.

A small numpy/scipy engine for the 16-state two-dot trion system: hole
mixing from the Luttinger-Kohn model, dipole-dipole (Foerster) transfer
with its angular-momentum selection rules, the chirped-pulse rotating-frame
Hamiltonian, Schroedinger integration with gate-phase extraction, and
closed-form leakage estimates plus derivative-free pulse tuning.
"""

from .basis import (
    DIM,
    DotState,
    Manifold,
    TwoDotBasisState,
    computational_states,
    double_trion_states,
    enumerate_basis,
    manifold_of,
    manifolds,
    projector,
    single_trion_states,
    state_from_index,
    state_from_label,
)
from .constants import HBAR_MEV_PS
from .drive import (
    PhysicalParams,
    PulseSchedule,
    build_total,
    detuning,
    light_coupling_rwa,
    rabi_envelope,
    spectrum_sweep,
    trion_projector,
)
from .estimates import (
    LZInput,
    OptimizerConfig,
    OptimizeResult,
    PhononEstimate,
    lz_probability,
    lz_vs_simulation,
    max_detuning_rate,
    min_anticrossing_gap,
    optimize_pulse,
    phonon_suppression,
)
from .foerster import (
    DipoleLengths,
    ExcitonAM,
    ForsterCouplings,
    ForsterScale,
    angular_integral,
    build_hf,
    m_ij,
    table1_element,
    trion_transfer_element,
)
from .luttinger import (
    HoleKind,
    KVector,
    LuttingerParams,
    MixedHoleState,
    TrapFrequencies,
    heavy_light_splitting,
    hole_eigenstates,
    lk_bulk_hamiltonian,
    mixing_epsilon,
    mixing_epsilon_exact,
    parabolic_block,
)
from .propagate import (
    CPhaseReport,
    GateLeakageError,
    GateRecord,
    NumericalPreconditionError,
    PhaseUndefinedError,
    PopulationRecord,
    StepSizeError,
    Trajectory,
    adiabaticity_scan,
    cphase_check,
    gate_phases,
    populations_report,
    propagate,
)

__version__ = "0.1.0"
