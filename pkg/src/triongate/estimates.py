"""Closed-form fidelity estimates and derivative-free pulse tuning.

The sweep through an avoided crossing of gap Omega at rate dDelta/dt leaks
population with the Landau-Zener probability exp(-pi Omega^2 / (4 hbar
dDelta/dt)).  The linearization leaves both the gap and the rate open for a
shaped pulse; here the rate is taken as the peak |dDelta/dt| over the
window and the gap as the smallest avoided-crossing gap encountered within
any of the four dynamically connected 4-state blocks along the swept path.
The estimate tracks the simulated leakage in trend, not in absolute value.

Phonon-induced errors during an adiabatic sweep scale like
(J(w_m)/Omega) * exp(-lambda Omega tau / hbar), an order-of-magnitude
estimator with J(w_m) and lambda supplied by the caller.

``optimize_pulse`` tunes (Omega0, Delta0, tau_Omega, tau_Delta) with a
Nelder-Mead simplex in log space (keeping all four positive), minimizing
w_theta*(theta - pi)^2 + w_leak*(max leakage).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .basis import manifolds
from .constants import HBAR_MEV_PS
from .drive import PhysicalParams, PulseSchedule, hamiltonian_terms
from .propagate import NumericalPreconditionError, gate_phases

_FREE_PARAMS = ("omega0", "delta0", "tau_omega", "tau_delta")


@dataclass(frozen=True)
class LZInput:
    """Gap at closest approach (meV) and sweep rate (meV/ps)."""

    omega_gap: float
    delta_dot: float

    def __post_init__(self):
        if self.omega_gap < 0:
            raise ValueError("gap must be non-negative")
        if self.delta_dot <= 0:
            raise ValueError("sweep rate must be positive")


def lz_probability(inp: LZInput) -> float:
    """Leakage probability exp(-pi gap^2 / (4 hbar rate)) for a linear sweep."""
    return math.exp(-math.pi * inp.omega_gap**2 / (4.0 * HBAR_MEV_PS * inp.delta_dot))


@dataclass(frozen=True)
class PhononEstimate:
    """Inputs of the phonon-error estimate; all non-negative, lambda ~ 1."""

    j_at_cutoff: float   # spectral function at the cutoff, meV
    omega: float         # relevant gap, meV
    tau: float           # sweep time, ps
    lambda_const: float = 1.0

    def __post_init__(self):
        if min(self.j_at_cutoff, self.omega, self.tau, self.lambda_const) < 0:
            raise ValueError("phonon-estimate inputs must be non-negative")


def phonon_suppression(e: PhononEstimate) -> float:
    """Order-of-magnitude phonon error (J/Omega) * exp(-lambda Omega tau / hbar).

    Not a probability bound; returns a probability-scale value.
    """
    if e.omega <= 0:
        raise ValueError("gap must be positive")
    return (e.j_at_cutoff / e.omega) * math.exp(
        -e.lambda_const * e.omega * e.tau / HBAR_MEV_PS
    )


def max_detuning_rate(s: PulseSchedule) -> float:
    """Peak |dDelta/dt| of the swept detuning, meV/ps.

    The envelope derivative peaks at t = tau_Delta/sqrt(2), giving
    Delta0 / (tau_Delta * sqrt(2 e)).
    """
    return s.delta0 / (s.tau_delta * math.sqrt(2.0 * math.e))


def min_anticrossing_gap(p: PhysicalParams, s: PulseSchedule, n_times: int = 241) -> float:
    """Smallest adjacent-eigenvalue gap within any 4-state block on the path.

    Different blocks never couple, so only within-block spacings count as
    avoided crossings; the sweep samples H(t) across the window.
    """
    terms = hamiltonian_terms(p)
    blocks = [np.array(m.indices()) for m in manifolds()]
    gap = math.inf
    for t in np.linspace(s.t_start, s.t_end, n_times):
        h = terms.at(t, s)
        for idx in blocks:
            evals = np.linalg.eigvalsh(h[np.ix_(idx, idx)])
            gap = min(gap, float(np.diff(evals).min()))
    return gap


@dataclass(frozen=True)
class LZComparison:
    lz_estimate: float
    simulated_leakage: float
    omega_gap: float      # meV
    delta_dot: float      # meV/ps


def lz_vs_simulation(p: PhysicalParams, s: PulseSchedule) -> LZComparison:
    """Landau-Zener estimate for the pulse next to the simulated leakage."""
    gap = min_anticrossing_gap(p, s)
    rate = max_detuning_rate(s)
    estimate = lz_probability(LZInput(gap, rate)) if rate > 0 else 0.0
    rec = gate_phases(p, s, record_populations=False)
    return LZComparison(estimate, rec.max_leakage, gap, rate)


@dataclass(frozen=True)
class OptimizerConfig:
    """Objective weights, simplex size and stopping rules for pulse tuning.

    ``free_params`` limits which of (omega0, delta0, tau_omega, tau_delta)
    the simplex moves; the rest stay at their initial values.
    """

    w_theta: float = 1.0
    w_leak: float = 1e-3
    simplex_scale: float = 0.1
    max_evals: int = 200
    tolerance: float = 1e-4
    free_params: tuple[str, ...] = _FREE_PARAMS

    def __post_init__(self):
        if self.w_theta <= 0 or self.w_leak < 0:
            raise ValueError("objective weights must be positive")
        if self.max_evals <= 0:
            raise ValueError("max_evals must be positive")
        if not (0 < self.simplex_scale < 1):
            raise ValueError("simplex scale must be a fraction in (0, 1)")
        for name in self.free_params:
            if name not in _FREE_PARAMS:
                raise ValueError(f"unknown pulse parameter {name!r}")


@dataclass(frozen=True)
class OptimizeResult:
    schedule: PulseSchedule
    theta: float
    max_leakage: float
    objective: float
    converged: bool
    n_evals: int


class _ToleranceReached(Exception):
    pass


def _rebuild_schedule(s0: PulseSchedule, values: dict[str, float]) -> PulseSchedule:
    """New schedule with updated pulse parameters; the window keeps its
    original ratio to the slower time scale."""
    ratio_start = s0.t_start / max(s0.tau_omega, s0.tau_delta)
    ratio_end = s0.t_end / max(s0.tau_omega, s0.tau_delta)
    tau_max = max(values["tau_omega"], values["tau_delta"])
    return PulseSchedule(
        omega0=values["omega0"],
        tau_omega=values["tau_omega"],
        delta0=values["delta0"],
        tau_delta=values["tau_delta"],
        t_start=ratio_start * tau_max,
        t_end=ratio_end * tau_max,
        dt=s0.dt,
    )


def optimize_pulse(
    p: PhysicalParams, s0: PulseSchedule, cfg: OptimizerConfig
) -> OptimizeResult:
    """Tune the pulse toward theta = pi with minimal leakage.

    Deterministic given cfg and s0.  Candidates whose simulation hits a
    numerical precondition (step size, vanishing survival) are penalized
    rather than fatal.  Returns the best schedule found, flagged
    non-converged when the objective never reached the tolerance within
    ``max_evals`` evaluations; the reported theta/leakage/objective come
    from a fresh evaluation of the returned schedule.
    """
    base = {name: getattr(s0, name) for name in _FREE_PARAMS}
    free = [name for name in cfg.free_params if base[name] != 0.0]
    penalty = cfg.w_theta * (2 * math.pi) ** 2 + cfg.w_leak + 1.0

    n_evals = 0
    best_x: np.ndarray | None = None
    best_obj = math.inf

    def simulate(values: dict[str, float]) -> tuple[float, float, float]:
        nonlocal n_evals
        n_evals += 1
        schedule = _rebuild_schedule(s0, values)
        rec = gate_phases(p, schedule, record_populations=False)
        theta = rec.theta_final
        leak = rec.max_leakage
        obj = cfg.w_theta * (theta - math.pi) ** 2 + cfg.w_leak * leak
        return obj, theta, leak

    def objective(x: np.ndarray) -> float:
        nonlocal best_x, best_obj
        values = dict(base)
        values.update({name: math.exp(v) for name, v in zip(free, x)})
        try:
            obj, _, _ = simulate(values)
        except NumericalPreconditionError:
            return penalty
        if obj < best_obj:
            best_obj = obj
            best_x = np.array(x)
        if best_obj <= cfg.tolerance:
            raise _ToleranceReached
        return obj

    if free:
        x0 = np.array([math.log(base[name]) for name in free])
        step = math.log1p(cfg.simplex_scale)
        simplex = np.vstack([x0] + [x0 + step * e for e in np.eye(len(free))])
        try:
            optimize.minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={
                    "initial_simplex": simplex,
                    "maxfev": cfg.max_evals,
                    "xatol": 1e-10,
                    "fatol": 1e-14,
                },
            )
        except _ToleranceReached:
            pass

    values = dict(base)
    if best_x is not None:
        values.update({name: math.exp(v) for name, v in zip(free, best_x)})
        schedule = _rebuild_schedule(s0, values)
    else:
        schedule = s0
    obj, theta, leak = simulate(values)
    return OptimizeResult(
        schedule=schedule,
        theta=theta,
        max_leakage=leak,
        objective=obj,
        converged=obj <= cfg.tolerance,
        n_evals=n_evals,
    )
