#!/usr/bin/env python3
import os, json, logging, sys
from dataclasses import dataclass

import click
from dotenv import load_dotenv

from core.errors import ConfigError, LabError
from experiments.config import load_sweep_config, standard_tau_grid
from experiments.report import analyze_results
from experiments.results import emit_csv, write_table
from experiments.studies import (FIXED_DEGREES, HEADERS, average_reduction, budget_table, degree_table,
                                 fixed_degree_errors, qsp_error_table, steady_state_study)
from experiments.sweep import run_sweep
from model.tfim import TfimSpec, build_tfim
from qsp.circuit import build_qsp_circuit
from qsp.phase_file import write_phase_file

# ---------- env & logging ----------
load_dotenv()
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.INFO), format="%(asctime)s | %(levelname)s | %(message)s")
log = logging.getLogger("qsplab")


# ---------- config ----------
def load_config(path="config.json"):
    try:
        with open(path, "r") as f:
            return json.load(f)
    except FileNotFoundError:
        return {"J_Z": 1.0, "J_X": 0.1, "h_x": 0.1, "alpha": 0.14, "grid_points": 1001}
lab_config = load_config()

@dataclass
class Config:
    # --- Model ---
    J_Z: float = float(lab_config.get("J_Z", "1.0"))
    J_X: float = float(lab_config.get("J_X", "0.1"))
    h_x: float = float(lab_config.get("h_x", "0.1"))
    alpha: float = float(lab_config.get("alpha", "0.14"))

    # --- Numerics ---
    grid_points: int = int(os.getenv("QSPLAB_GRID_POINTS", lab_config.get("grid_points", "1001")))
    eps_coeff: float = float(lab_config.get("eps_coeff", "1e-2"))

    # --- Sampling & execution ---
    shots: int = int(lab_config.get("shots", "5000000"))
    seed: int = int(lab_config.get("seed", "0"))
    workers: int = int(os.getenv("QSPLAB_WORKERS", lab_config.get("workers", "1")))

    def tfim(self, N: int) -> TfimSpec:
        return TfimSpec(N=N, J_Z=self.J_Z, J_X=self.J_X, h_x=self.h_x, alpha=self.alpha)

cfg = Config()

EXIT_CONFIG = 1
EXIT_CELL_FAILURE = 2

quiet_option = click.option("--quiet", is_flag=True, help="Hide progress bars.")


def _fail(message: str, code: int = EXIT_CONFIG):
    log.error(message)
    sys.exit(code)


def _write(study: str, rows, out):
    path = write_table(out, HEADERS[study], ([getattr(r, f) for f in HEADERS[study]] for r in rows))
    log.info(f"{study}: wrote {len(rows)} rows to {path}")


# --- Lab Entry Point ---
@click.group()
def cli():
    """QSP Hamiltonian simulation under depolarizing noise, mitigated by zero-noise extrapolation."""


@cli.command()
@click.argument("config_path", type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--out", "output_path", default=None, help="Override the output CSV path.")
@click.option("--shots", type=int, default=None, help="Override the shot count per scale factor.")
@click.option("--workers", type=int, default=None, help="Concurrent sweep cells.")
@quiet_option
def sweep(config_path, seed, output_path, shots, workers, quiet):
    """Run a tau x p x schedule sweep and write one CSV."""
    try:
        sweep_cfg = load_sweep_config(config_path, seed=seed, output_path=output_path, shots=shots, workers=workers)
        spec = cfg.tfim(sweep_cfg.N)
        build_tfim(spec)
    except LabError as e:
        _fail(f"configuration error: {e}")
    # an explicit --workers wins over QSPLAB_WORKERS
    pool = sweep_cfg.workers if workers is not None else max(sweep_cfg.workers, cfg.workers)
    rows = run_sweep(sweep_cfg, spec, cfg.grid_points, workers=pool, progress=not quiet)
    try:
        path = emit_csv(rows, sweep_cfg.output_path)
    except LabError as e:
        _fail(str(e))
    failed = sum(r.failed for r in rows)
    log.info(f"Wrote {len(rows)} rows to {path} ({failed} failed)")
    if failed:
        sys.exit(EXIT_CELL_FAILURE)


@cli.command()
@click.option("--eps", "eps_levels", type=float, multiple=True, default=(1e-5, 1e-3), show_default=True)
@click.option("--rule", type=click.Choice(["order", "strict"]), default="order", show_default=True)
@click.option("--out", default="degrees.csv", show_default=True)
@quiet_option
def degrees(eps_levels, rule, out, quiet):
    """Numeric against analytic QSP degree over the standard tau grid."""
    rows = degree_table(standard_tau_grid(), eps_levels, rule, cfg.grid_points, progress=not quiet)
    for eps, ratio in average_reduction(rows).items():
        log.info(f"eps={eps:g}: analytic bound is on average {ratio:.2f}x the numeric degree")
    _write("degrees", rows, out)


@cli.command("fixed-depth")
@click.option("--degree", "degree_list", type=int, multiple=True, default=FIXED_DEGREES, show_default=True)
@click.option("--out", default="fixed_depth.csv", show_default=True)
def fixed_depth(degree_list, out):
    """Truncation error against tau at fixed polynomial degree."""
    try:
        rows = fixed_degree_errors(standard_tau_grid(), degree_list, cfg.grid_points)
    except ValueError as e:
        _fail(str(e))
    _write("fixed-depth", rows, out)


@cli.command("qsp-error")
@click.option("--N", "n_qubits", type=int, default=4, show_default=True)
@click.option("--eps", "eps_levels", type=float, multiple=True, default=(1e-2, 1e-3, 1e-4, 1e-5), show_default=True)
@click.option("--tau", "taus", type=float, multiple=True, default=(0.1, 1.0, 5.0, 10.0, 20.0), show_default=True)
@click.option("--out", default="qsp_error.csv", show_default=True)
@quiet_option
def qsp_error(n_qubits, eps_levels, taus, out, quiet):
    """Decomposed circuit error against coefficient error."""
    rows = qsp_error_table(n_qubits, taus, eps_levels, cfg.tfim(n_qubits), cfg.grid_points, progress=not quiet)
    _write("qsp-error", rows, out)


@cli.command()
@click.option("--N", "n_qubits", type=int, default=4, show_default=True)
@click.option("--eps", type=float, default=1e-2, show_default=True)
@click.option("--p", "p_levels", type=float, multiple=True, default=(1e-4, 1e-3, 1e-2), show_default=True)
@click.option("--out", default="budgets.csv", show_default=True)
@quiet_option
def budgets(n_qubits, eps, p_levels, out, quiet):
    """Sampling bounds for QSP and Trotter against the fixed shot budget."""
    rows = budget_table(p_levels, standard_tau_grid(), eps, n_qubits, cfg.tfim(n_qubits), cfg.grid_points,
                        progress=not quiet)
    outside = [r for r in rows if not r.within]
    if outside:
        log.warning(f"{len(outside)} configurations where the fixed budget is not between M_s and M_e")
    _write("budgets", rows, out)


@cli.command("steady-state")
@click.option("--N", "n_qubits", type=int, default=4, show_default=True)
@click.option("--tau", "taus", type=float, multiple=True, default=(50.0, 100.0, 150.0, 200.0, 250.0, 300.0), show_default=True)
@click.option("--p", "p_levels", type=float, multiple=True, default=(1e-4, 1e-3, 1e-2), show_default=True)
@click.option("--circuit", type=click.Choice(["auto", "qsp", "echo"]), default="auto", show_default=True)
@click.option("--schedule", default="1,2,3", show_default=True, help="Comma-separated scale factors.")
@click.option("--eps", type=float, default=None, help="Coefficient error for the degree (config default).")
@click.option("--shots", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", default="steady_state.csv", show_default=True)
@quiet_option
def steady_state(n_qubits, taus, p_levels, circuit, schedule, eps, shots, seed, out, quiet):
    """Long-time expectations and extrapolations at the depolarizing fixed point."""
    try:
        factors = tuple(float(c) for c in schedule.split(","))
        rows = steady_state_study(n_qubits, taus, p_levels, factors, shots or cfg.shots,
                                  cfg.seed if seed is None else seed, circuit, eps or cfg.eps_coeff,
                                  cfg.tfim(n_qubits), progress=not quiet)
    except (ValueError, LabError) as e:
        _fail(f"steady-state failed: {e}")
    _write("steady-state", rows, out)


@cli.command()
@click.argument("tau", type=float)
@click.argument("eps", type=float)
@click.option("--N", "n_qubits", type=int, default=4, show_default=True)
@click.option("--rule", type=click.Choice(["strict", "order"]), default="strict", show_default=True)
@click.option("--out", default=None, help="Phase file path (default phases_tau<TAU>_eps<EPS>.txt).")
def phases(tau, eps, n_qubits, rule, out):
    """Synthesise the QSP phase set for one (tau, eps) and write it as text."""
    try:
        circuit, report = build_qsp_circuit(build_tfim(cfg.tfim(n_qubits)), tau, eps, rule, cfg.grid_points)
        path = write_phase_file(out or f"phases_tau{tau:g}_eps{eps:g}.txt", circuit.phases, tau, eps)
    except LabError as e:
        _fail(f"phase synthesis failed: {e}", EXIT_CELL_FAILURE)
    log.info(f"degree {report.n} (linf {report.linf_error:.3e}) written to {path}")


@cli.command()
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
def summarize(csv_path):
    """Best fit per (method, N, p) and the mitigated fraction of tau-points."""
    try:
        summary = analyze_results(csv_path)
    except LabError as e:
        _fail(str(e))
    click.echo(summary.to_string(index=False))


if __name__ == "__main__":
    try:
        cli()
    except ConfigError as e:
        _fail(str(e))
