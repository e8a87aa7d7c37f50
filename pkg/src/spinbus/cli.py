"""Command-line entry point.

Commands: ``tables``, ``scan``, ``gatecheck``, ``transport``, ``compile``,
``simulate``.  All commands are deterministic given the config file and
seed, and write byte-identical output on repeated runs.  Exit codes:
0 success, 1 validation failure, 2 numerical failure.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import gates as gatelib
from . import interactions, scheduler, transport, traps
from .config import Config, load_config
from .errors import DomainError, NumericalError, SpinBusError
from .units import ATOMIC_MASS, BOHR_RADIUS

EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config file.")
@click.pass_context
def cli(ctx, config_path):
    """Simulator and compiler for the dual-lattice trapped-spin architecture."""
    ctx.obj = {"config_path": config_path}


def _cfg(ctx) -> Config:
    return load_config(ctx.obj["config_path"])


@cli.command()
@click.option("--lattice", type=click.Choice(["red", "blue"]), required=True)
@click.option("--species", "species_filter", default=None, help="Comma-separated species names.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def tables(ctx, lattice, species_filter, fmt, out):
    """Per-species trap parameter table for one lattice."""
    cfg = _cfg(ctx)
    names = [s.strip() for s in species_filter.split(",")] if species_filter else None
    reports = traps.lattice_reports(
        lattice, names, registry=cfg.species, red_spec=cfg.red_lattice, blue_spec=cfg.blue_lattice
    )
    _emit(traps.reports_csv(reports) if fmt == "csv" else traps.reports_json(reports), out)


@cli.command()
@click.option("--z0-min", type=float, required=True, help="Smallest separation, a0.")
@click.option("--z0-max", type=float, required=True)
@click.option("--points", type=int, required=True)
@click.option("--mode", type=click.Choice(["quadrature", "mc"]), default="quadrature")
@click.option("--gamma-mode", type=click.Choice(list(interactions.GAMMA_MODES)), default="calibrated")
@click.option("--samples", type=int, default=None, help="MC samples per point (mc mode).")
@click.option("--seed", type=int, default=None)
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def scan(ctx, z0_min, z0_max, points, mode, gamma_mode, samples, seed, out):
    """Coupling-strength scan over the trap separation.

    Columns: exchange, Gaussian-averaged dipolar, total, plus the point
    dipole reference -2 gamma_e(z0) (the asymptotic 1/z0^3 line).
    """
    cfg = _cfg(ctx)
    if z0_min <= 0 or points < 2:
        raise DomainError("need z0_min > 0 and points >= 2")
    z0s = np.linspace(z0_min, z0_max, points)
    rows = interactions.scan_couplings(
        cfg.geometry,
        cfg.scattering,
        z0s,
        gamma_mode=gamma_mode,
        mc_samples=(samples or cfg.mc_samples) if mode == "mc" else 0,
        seed=seed if seed is not None else cfg.mc_seed,
    )
    pref = interactions.gamma_prefactor_hz_m3(gamma_mode)
    for row in rows:
        row["J_pointdipole_Hz"] = -2.0 * pref / (row["z0_a0"] * BOHR_RADIUS) ** 3
    _emit(interactions.scan_csv(rows, extra_fields=("J_pointdipole_Hz",)), out)


@cli.command()
@click.option("--tolerance", type=float, default=1.0 - 1e-9, help="Identity fidelity threshold.")
@click.option("--rwa-threshold", type=float, default=0.999, help="Required fidelity at the widest scan point.")
@click.option("--out", default=None, type=click.Path())
def gatecheck(tolerance, rwa_threshold, out):
    """Gate identity checks plus the stirring/RWA validity scan; fails nonzero
    if any identity fidelity drops below the threshold."""
    reports = [r.as_dict() for r in gatelib.gate_identity_reports()]
    scan_rows = gatelib.rwa_scan()
    doc = {
        "identities": reports,
        "rwa_scan": scan_rows,
        "tolerance": tolerance,
        "rwa_threshold": rwa_threshold,
    }
    ok = all(r["fidelity"] >= tolerance for r in reports) and scan_rows[0]["fidelity"] >= rwa_threshold
    doc["pass"] = ok
    _emit(_json_text(doc), out)
    if not ok:
        raise NumericalError("gate check failed the fidelity threshold")


@cli.command("transport")
@click.option("--distance-m", type=float, default=traps.CO2_WAVELENGTH_M / 2.0, show_default=True)
@click.option("--nu-trap-hz", type=float, default=None, help="Header trap frequency (default: config).")
@click.option("--mass-amu", type=float, default=None)
@click.option("--budget", type=float, default=None, help="Excitation probability budget.")
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def transport_cmd(ctx, distance_m, nu_trap_hz, mass_amu, budget, out):
    """Plan an adiabatic header translation and report the excitation numbers."""
    cfg = _cfg(ctx)
    nu = nu_trap_hz if nu_trap_hz is not None else cfg.transport_nu_trap_hz
    mass = mass_amu * ATOMIC_MASS if mass_amu is not None else cfg.transport_mass_kg
    p_budget = budget if budget is not None else cfg.transport_p_budget
    _, result = transport.plan_transport(distance_m, 2.0 * math.pi * nu, mass, p_budget)
    _emit(_json_text(result.as_dict()), out)


@cli.command("compile")
@click.argument("circuit_file", type=click.Path(exists=True))
@click.option("--qubits", type=int, default=None, help="Register size (default: fit the circuit).")
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def compile_cmd(ctx, circuit_file, qubits, out):
    """Compile a circuit file into a timed schedule (JSON), with the
    decoherence budget attached."""
    cfg = _cfg(ctx)
    circuit = scheduler.parse_circuit(Path(circuit_file).read_text())
    n_qubits = qubits or (max((q for g in circuit for q in g.qubits), default=0) + 1)
    register = scheduler.Register(n_qubits=n_qubits)
    schedule = scheduler.compile_circuit(circuit, register, cfg.compile_params)
    budget = scheduler.budget(schedule, cfg.rates_hz)
    doc = json.loads(scheduler.schedule_to_json(schedule))
    doc["budget"] = budget.as_dict()
    _emit(_json_text(doc), out)


@cli.command("simulate")
@click.argument("schedule_file", type=click.Path(exists=True))
@click.option("--out", default=None, type=click.Path())
def simulate_cmd(schedule_file, out):
    """Re-simulate a compiled schedule and report fidelity to the logical circuit."""
    schedule = scheduler.schedule_from_json(Path(schedule_file).read_text())
    _emit(_json_text(scheduler.verify_schedule(schedule)), out)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        return EXIT_VALIDATION
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_VALIDATION
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERICAL
    except (DomainError, SpinBusError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
