"""Command-line entry point: config-driven runs with deterministic outputs.

The configuration is a flat ``key = value`` text file with dotted keys
('#' starts a comment); unknown keys are rejected.  Every run echoes its
fully resolved configuration into the output header as '#'-prefixed
comments, numbers are always printed with 12 significant digits, and data
files carry no timestamps, so identical configs give byte-identical files.

Commands
--------
mixing       print eps, exact eps, heavy-light splitting for a trap
table        CSV of the exciton selection table
spectrum     CSV of sorted eigenvalues along a Delta/Omega grid
gate         CSV of theta(t) and the four phases; summary line on stdout
populations  CSV of initial-state survival populations
optimize     tune pulse parameters; write a flat key=value result file
lz           print the Landau-Zener estimate (optionally vs simulation)

Exit status: 0 on success, 2 on configuration errors, 3 on numerical
precondition failures (step size, undefined phase, excessive leakage).
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .drive import PhysicalParams, PulseSchedule, spectrum_sweep
from .estimates import (
    LZInput,
    OptimizerConfig,
    lz_probability,
    lz_vs_simulation,
    optimize_pulse,
)
from .foerster import SELECTION_ROWS, ForsterCouplings
from .luttinger import (
    LuttingerParams,
    TrapFrequencies,
    heavy_light_splitting,
    mixing_epsilon,
    mixing_epsilon_exact,
)
from .propagate import NumericalPreconditionError, gate_phases, populations_report


class ConfigError(Exception):
    """Bad or missing configuration; exits with status 2."""


COMMANDS = ("mixing", "table", "spectrum", "gate", "populations", "optimize", "lz")

# key -> (type tag, required-by default?); presence requirements are
# enforced per command below.
KEY_TYPES: dict[str, str] = {
    "command": "str",
    "output_path": "str",
    "threads": "int",
    "luttinger.gamma1": "float",
    "luttinger.gamma2": "float",
    "luttinger.gamma3": "float",
    "trap.omega_x_mev": "float",
    "trap.omega_y_mev": "float",
    "trap.omega_z_mev": "float",
    "physical.delta_mev": "float",
    "physical.eps": "float",
    "physical.eps_tilde": "float",
    "physical.vxx_mev": "float",
    "physical.m_hh_hh_mev": "float",
    "physical.m_lh_lh_mev": "float",
    "physical.m_lh_hh_mev": "float",
    "physical.detuning_offset_a_mev": "float",
    "physical.detuning_offset_b_mev": "float",
    "physical.detuning_sign": "float",
    "pulse.omega0_mev": "float",
    "pulse.tau_omega_ps": "float",
    "pulse.delta0_mev": "float",
    "pulse.tau_delta_ps": "float",
    "pulse.t_start_ps": "float",
    "pulse.t_end_ps": "float",
    "pulse.dt_ps": "float",
    "spectrum.omega_mev": "float",
    "spectrum.ratio_min": "float",
    "spectrum.ratio_max": "float",
    "spectrum.ratio_points": "int",
    "optimizer.w_theta": "float",
    "optimizer.w_leak": "float",
    "optimizer.simplex_scale": "float",
    "optimizer.max_evals": "int",
    "optimizer.tolerance": "float",
    "lz.omega_gap_mev": "float",
    "lz.delta_dot_mev_per_ps": "float",
    "lz.with_simulation": "bool",
}

_REQUIRED: dict[str, tuple[str, ...]] = {
    "mixing": (
        "luttinger.gamma1", "luttinger.gamma2", "luttinger.gamma3",
        "trap.omega_x_mev", "trap.omega_y_mev", "trap.omega_z_mev",
    ),
    "table": (
        "physical.m_hh_hh_mev", "physical.m_lh_lh_mev", "physical.m_lh_hh_mev",
    ),
    "spectrum": (
        "physical.delta_mev", "physical.eps", "physical.vxx_mev",
        "physical.m_hh_hh_mev", "physical.m_lh_lh_mev", "physical.m_lh_hh_mev",
        "spectrum.omega_mev", "spectrum.ratio_min", "spectrum.ratio_max",
        "spectrum.ratio_points",
    ),
    "gate": (
        "physical.delta_mev", "physical.eps", "physical.vxx_mev",
        "physical.m_hh_hh_mev", "physical.m_lh_lh_mev", "physical.m_lh_hh_mev",
        "pulse.omega0_mev", "pulse.tau_omega_ps", "pulse.delta0_mev",
        "pulse.tau_delta_ps",
    ),
}
_REQUIRED["populations"] = _REQUIRED["gate"]
_REQUIRED["optimize"] = _REQUIRED["gate"]
_REQUIRED["lz"] = ()

_NEEDS_OUTPUT = ("table", "spectrum", "gate", "populations", "optimize")


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _cast(key: str, raw: str):
    kind = KEY_TYPES[key]
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "1"):
                return True
            if low in ("false", "no", "0"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r} as {kind}") from None


def parse_config(path: str) -> dict:
    """Read a flat key = value config file; unknown keys are errors."""
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    cfg: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {body!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in KEY_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        if key in cfg:
            raise ConfigError(f"{path}:{lineno}: duplicate config key {key!r}")
        cfg[key] = _cast(key, raw)
    return cfg


def _require(cfg: dict, keys: tuple[str, ...]) -> None:
    missing = [k for k in keys if k not in cfg]
    if missing:
        raise ConfigError("missing config keys: " + ", ".join(sorted(missing)))


def _physical(cfg: dict) -> PhysicalParams:
    couplings = ForsterCouplings(
        m_hh_hh=cfg["physical.m_hh_hh_mev"],
        m_lh_lh=cfg["physical.m_lh_lh_mev"],
        m_lh_hh=cfg["physical.m_lh_hh_mev"],
    )
    try:
        return PhysicalParams(
            delta=cfg["physical.delta_mev"],
            eps=cfg["physical.eps"],
            couplings=couplings,
            vxx=cfg["physical.vxx_mev"],
            eps_tilde=cfg.get("physical.eps_tilde"),
            detuning_offset_a=cfg.get("physical.detuning_offset_a_mev", 0.0),
            detuning_offset_b=cfg.get("physical.detuning_offset_b_mev", 0.0),
            detuning_sign=cfg.get("physical.detuning_sign", 1.0),
        )
    except ValueError as exc:
        raise ConfigError(f"physical.*: {exc}") from None


def _pulse(cfg: dict) -> PulseSchedule:
    tau_o = cfg["pulse.tau_omega_ps"]
    tau_d = cfg["pulse.tau_delta_ps"]
    half = 4.0 * max(tau_o, tau_d)
    try:
        return PulseSchedule(
            omega0=cfg["pulse.omega0_mev"],
            tau_omega=tau_o,
            delta0=cfg["pulse.delta0_mev"],
            tau_delta=tau_d,
            t_start=cfg.get("pulse.t_start_ps", -half),
            t_end=cfg.get("pulse.t_end_ps", half),
            dt=cfg.get("pulse.dt_ps", 1e-3),
        )
    except ValueError as exc:
        raise ConfigError(f"pulse.*: {exc}") from None


def _resolved(cfg: dict, command: str) -> dict:
    """Config with defaults filled in, for the output header echo."""
    out = dict(cfg)
    out["command"] = command
    if command in ("gate", "populations", "optimize"):
        half = 4.0 * max(cfg["pulse.tau_omega_ps"], cfg["pulse.tau_delta_ps"])
        out.setdefault("pulse.t_start_ps", -half)
        out.setdefault("pulse.t_end_ps", half)
        out.setdefault("pulse.dt_ps", 1e-3)
    if command in ("spectrum", "gate", "populations", "optimize") or (
        command == "lz" and cfg.get("lz.with_simulation", False)
    ):
        out.setdefault("physical.eps_tilde", cfg.get("physical.eps"))
        out.setdefault("physical.detuning_offset_a_mev", 0.0)
        out.setdefault("physical.detuning_offset_b_mev", 0.0)
        out.setdefault("physical.detuning_sign", 1.0)
    if command == "optimize":
        out.setdefault("optimizer.w_theta", 1.0)
        out.setdefault("optimizer.w_leak", 1e-3)
        out.setdefault("optimizer.simplex_scale", 0.1)
        out.setdefault("optimizer.max_evals", 200)
        out.setdefault("optimizer.tolerance", 1e-4)
    if command == "lz":
        out.setdefault("lz.with_simulation", False)
    return out


def _header(resolved: dict) -> str:
    return "".join(f"# {k} = {fmt(v)}\n" for k, v in sorted(resolved.items()))


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_rows(columns: list[str], rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _symbolic(channel: str, coef: float) -> str:
    name = {"hh_hh": "M_hh,hh", "lh_lh": "M_lh,lh", "lh_hh": "M_lh,hh"}[channel]
    if coef == 1.0:
        return name
    if abs(coef - 1.0 / 3.0) < 1e-12:
        return f"{name}/3"
    if abs(coef - 4.0 / 3.0) < 1e-12:
        return f"4*{name}/3"
    if abs(coef + 4.0 / 3.0) < 1e-12:
        return f"-4*{name}/3"
    if abs(coef - 1.0 / np.sqrt(3.0)) < 1e-12:
        return f"{name}/sqrt(3)"
    return f"{fmt(coef)}*{name}"  # pragma: no cover


def _cmd_mixing(cfg: dict, resolved: dict) -> tuple[str, str | None]:
    p = LuttingerParams(cfg["luttinger.gamma1"], cfg["luttinger.gamma2"],
                        cfg["luttinger.gamma3"])
    w = TrapFrequencies(cfg["trap.omega_x_mev"], cfg["trap.omega_y_mev"],
                        cfg["trap.omega_z_mev"])
    text = (
        f"epsilon = {fmt(mixing_epsilon(p, w))}\n"
        f"epsilon_exact = {fmt(mixing_epsilon_exact(p, w))}\n"
        f"heavy_light_splitting_mev = {fmt(heavy_light_splitting(p, w))}\n"
    )
    return text, _header(resolved) + text


def _cmd_table(cfg: dict, resolved: dict) -> tuple[str, str]:
    c = ForsterCouplings(cfg["physical.m_hh_hh_mev"], cfg["physical.m_lh_lh_mev"],
                         cfg["physical.m_lh_hh_mev"])
    values = {"hh_hh": c.m_hh_hh, "lh_lh": c.m_lh_lh, "lh_hh": c.m_lh_hh}
    rows = []
    for s1, s2, channel, coef in SELECTION_ROWS:
        rows.append([s1[0], s1[1], s2[0], s2[1], _symbolic(channel, coef),
                     coef * values[channel]])
    body = _csv_rows(
        ["jzh1", "jze1", "jzh2", "jze2", "element_symbolic", "element_value_meV"],
        rows,
    )
    return "", _header(resolved) + body


def _cmd_spectrum(cfg: dict, resolved: dict, threads: int) -> tuple[str, str]:
    p = _physical(cfg)
    n = cfg["spectrum.ratio_points"]
    if n < 1:
        raise ConfigError("spectrum.ratio_points must be >= 1")
    ratios = np.linspace(cfg["spectrum.ratio_min"], cfg["spectrum.ratio_max"], n)
    omega = cfg["spectrum.omega_mev"]
    chunks = np.array_split(ratios, max(1, min(threads, n)))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda c: spectrum_sweep(p, omega, c), chunks))
    evals = np.vstack(parts)
    rows = [[r, *row] for r, row in zip(ratios, evals)]
    body = _csv_rows(["ratio"] + [f"e{i:02d}" for i in range(1, 17)], rows)
    return "", _header(resolved) + body


def _cmd_gate(cfg: dict, resolved: dict) -> tuple[str, str]:
    rec = gate_phases(_physical(cfg), _pulse(cfg), record_populations=False)
    rows = np.column_stack([rec.times, rec.theta_series, rec.phases])
    body = _csv_rows(["t_ps", "theta_rad", "phi00", "phi01", "phi10", "phi11"], rows)
    leak = rec.leakage_by_state()
    summary = f"theta_final_rad = {fmt(rec.theta_final)}; " + "; ".join(
        f"leakage_{k} = {fmt(v)}" for k, v in leak.items()
    )
    return summary + "\n", _header(resolved) + body


def _cmd_populations(cfg: dict, resolved: dict) -> tuple[str, str]:
    rec = populations_report(_physical(cfg), _pulse(cfg))
    rows = np.column_stack([rec.times, rec.survival])
    body = _csv_rows(["t_ps", "p00", "p01", "p10", "p11"], rows)
    return "", _header(resolved) + body


def _cmd_optimize(cfg: dict, resolved: dict) -> tuple[str, str]:
    ocfg = OptimizerConfig(
        w_theta=cfg.get("optimizer.w_theta", 1.0),
        w_leak=cfg.get("optimizer.w_leak", 1e-3),
        simplex_scale=cfg.get("optimizer.simplex_scale", 0.1),
        max_evals=cfg.get("optimizer.max_evals", 200),
        tolerance=cfg.get("optimizer.tolerance", 1e-4),
    )
    res = optimize_pulse(_physical(cfg), _pulse(cfg), ocfg)
    s = res.schedule
    pairs = [
        ("omega0_mev", s.omega0), ("tau_omega_ps", s.tau_omega),
        ("delta0_mev", s.delta0), ("tau_delta_ps", s.tau_delta),
        ("t_start_ps", s.t_start), ("t_end_ps", s.t_end), ("dt_ps", s.dt),
        ("theta_rad", res.theta), ("max_leakage", res.max_leakage),
        ("objective", res.objective), ("converged", res.converged),
        ("n_evals", res.n_evals),
    ]
    body = "".join(f"{k} = {fmt(v)}\n" for k, v in pairs)
    return "", _header(resolved) + body


def _cmd_lz(cfg: dict, resolved: dict) -> tuple[str, str | None]:
    if cfg.get("lz.with_simulation", False):
        _require(cfg, _REQUIRED["gate"])
        cmp = lz_vs_simulation(_physical(cfg), _pulse(cfg))
        text = (
            f"lz_probability = {fmt(cmp.lz_estimate)}\n"
            f"omega_gap_mev = {fmt(cmp.omega_gap)}\n"
            f"delta_dot_mev_per_ps = {fmt(cmp.delta_dot)}\n"
            f"simulated_leakage = {fmt(cmp.simulated_leakage)}\n"
        )
    else:
        _require(cfg, ("lz.omega_gap_mev", "lz.delta_dot_mev_per_ps"))
        try:
            inp = LZInput(cfg["lz.omega_gap_mev"], cfg["lz.delta_dot_mev_per_ps"])
        except ValueError as exc:
            raise ConfigError(f"lz.*: {exc}") from None
        text = f"lz_probability = {fmt(lz_probability(inp))}\n"
    return text, _header(resolved) + text


def run(cfg: dict, threads: int) -> tuple[int, str]:
    """Dispatch one resolved configuration; returns (exit status, stdout text)."""
    command = cfg.get("command")
    if command is None:
        raise ConfigError("no command given (config key 'command' or --command)")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {COMMANDS}")
    _require(cfg, _REQUIRED[command])
    output_path = cfg.get("output_path")
    if command in _NEEDS_OUTPUT and not output_path:
        raise ConfigError(f"command {command!r} requires output_path (or --output)")

    resolved = _resolved(cfg, command)
    if command == "mixing":
        stdout, file_text = _cmd_mixing(cfg, resolved)
    elif command == "table":
        stdout, file_text = _cmd_table(cfg, resolved)
    elif command == "spectrum":
        stdout, file_text = _cmd_spectrum(cfg, resolved, threads)
    elif command == "gate":
        stdout, file_text = _cmd_gate(cfg, resolved)
    elif command == "populations":
        stdout, file_text = _cmd_populations(cfg, resolved)
    elif command == "optimize":
        stdout, file_text = _cmd_optimize(cfg, resolved)
    else:
        stdout, file_text = _cmd_lz(cfg, resolved)

    if output_path and file_text is not None:
        _write(output_path, file_text)
    return 0, stdout


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="triongate",
        description="Two-dot trion gate engine: spectra, gate phases, estimates.",
    )
    parser.add_argument("--config", help="path to a flat key = value config file")
    parser.add_argument("--command", choices=COMMANDS, help="override the config command")
    parser.add_argument("--output", help="override output_path")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker-thread bound for sweeps (default: CPU count)")
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(args.config) if args.config else {}
        if args.command:
            cfg["command"] = args.command
        if args.output:
            cfg["output_path"] = args.output
        threads = args.threads if args.threads is not None else (
            cfg.get("threads") or os.cpu_count() or 1
        )
        if threads < 1:
            raise ConfigError("threads must be >= 1")
        status, stdout = run(cfg, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalPreconditionError as exc:
        print(f"numerical precondition failed: {exc}", file=sys.stderr)
        return 3
    if stdout:
        sys.stdout.write(stdout)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
