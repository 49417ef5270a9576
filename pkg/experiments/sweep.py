import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from approximation.jacobi_anger import DEFAULT_GRID_POINTS
from budgets.sampling_cost import BudgetInput, m_s_bound, trotter_budget
from core.errors import LabError
from core.linalg import herm_fn
from experiments.config import SweepConfig
from experiments.results import ResultRow
from mitigation.extrapolation import METHODS
from mitigation.zne import evaluate, scaled_expectations, select_best
from model.tfim import TfimSpec, build_observable, build_tfim, pauli_terms, zero_state
from qsp.circuit import build_qsp_circuit, success_probability
from simulation.density import Circuit, DensityMatrix, plus_state
from simulation.trotter import build_trotter

log = logging.getLogger("qsplab")

NAN = float("nan")


@dataclass(frozen=True)
class Cell:
    """One (method, tau) pair: a single circuit shared by every noise level and schedule."""
    method: str
    tau: float
    index: tuple  # (method idx, tau idx), folded into the per-run seeds


def ideal_expectation(h, observable, tau: float) -> float:
    """<0|e^{i tau H} O e^{-i tau H}|0> from the dense exponential."""
    psi = herm_fn(h, lambda lam: np.exp(-1j * tau * lam))[:, 0]
    return float(np.real(np.vdot(psi, observable @ psi)))


def cell_seed(seed: int, *index) -> int:
    return int(np.random.SeedSequence([seed, *index]).generate_state(1)[0])


@dataclass(frozen=True)
class BuiltCell:
    """Simulator circuit, its degree column, the initial state and the inputs of the shot bound."""
    circuit: Circuit
    degree: int
    rho0: DensityMatrix
    R: int = 0
    p_success: float = 0.5


def _failed_row(cfg, cell, p, schedule, stage, exc, shots, depth=0, degree=0, ideal=NAN, noisy=NAN):
    return ResultRow(cell.method, cfg.N, cell.tau, p, schedule.label, f"failed:{stage}/{type(exc).__name__}",
                     depth, degree, ideal, noisy, NAN, NAN, NAN, NAN, shots, cfg.seed)


def _build(cfg: SweepConfig, cell: Cell, h, spec: TfimSpec, grid_points: int) -> BuiltCell:
    system = zero_state(cfg.N)
    if cell.method == "qsp":
        qsp, report = build_qsp_circuit(h, cell.tau, cfg.eps_target, cfg.degree_rule, grid_points)
        p_success = 0.5
        if cfg.shot_rule == "m_s":
            p_success = success_probability(qsp.phases, qsp.oracle, DensityMatrix(system))
        return BuiltCell(qsp.to_circuit(), report.n, plus_state(system), report.R, p_success)
    terms = pauli_terms(spec)
    circuit = build_trotter(terms, cell.tau, cfg.eps_target)
    return BuiltCell(circuit, circuit.depth // len(terms), DensityMatrix(system))


def shot_count(cfg: SweepConfig, cell: Cell, built: BuiltCell, p: float) -> int:
    """cfg.shots, or the statistical bound M_s rounded up under shot_rule="m_s"."""
    if cfg.shot_rule == "fixed":
        return cfg.shots
    depth = built.circuit.depth
    if cell.method == "qsp":
        bound = m_s_bound(BudgetInput(p, depth, built.degree, built.R, cfg.eps_target, built.p_success))
    else:
        bound = trotter_budget(cell.tau, cfg.eps_target, depth, p)
    return max(1, math.ceil(bound))


def run_cell(cfg: SweepConfig, cell: Cell, spec: TfimSpec, grid_points=DEFAULT_GRID_POINTS) -> list[ResultRow]:
    h = build_tfim(spec)
    observable = build_observable(cfg.N)
    ideal = ideal_expectation(h, observable, cell.tau)
    schedules = cfg.scaling_schedules()

    try:
        built = _build(cfg, cell, h, spec, grid_points)
    except LabError as exc:
        log.warning(f"{cell.method} tau={cell.tau}: circuit build failed ({exc})")
        return [_failed_row(cfg, cell, p, s, "build", exc, cfg.shots, ideal=ideal)
                for p in cfg.p_levels for s in schedules]
    circuit, degree = built.circuit, built.degree

    rows = []
    for ip, p in enumerate(cfg.p_levels):
        shots = shot_count(cfg, cell, built, p)
        if cfg.shot_rule == "m_s":
            log.debug(f"{cell.method} tau={cell.tau} p={p}: M_s = {shots}")
        for js, schedule in enumerate(schedules):
            seed = cell_seed(cfg.seed, *cell.index, ip, js)
            try:
                scaled = scaled_expectations(circuit, built.rho0, p, schedule, shots, seed, observable)
            except LabError as exc:
                log.warning(f"{cell.method} tau={cell.tau} p={p} [{schedule.label}]: measurement failed ({exc})")
                rows.append(_failed_row(cfg, cell, p, schedule, "measure", exc, shots, circuit.depth, degree, ideal))
                continue
            reports = []
            for method in METHODS:
                try:
                    report = evaluate(method, schedule, scaled, ideal, max_gain=cfg.max_gain)
                except LabError as exc:
                    log.warning(f"{cell.method} tau={cell.tau} p={p} [{schedule.label}]: {method} fit failed ({exc})")
                    rows.append(_failed_row(cfg, cell, p, schedule, method, exc, shots, circuit.depth, degree,
                                            ideal, scaled[0].mean))
                    continue
                reports.append(report)
                rows.append(ResultRow(cell.method, cfg.N, cell.tau, p, schedule.label, report.fit, circuit.depth,
                                      degree, ideal, scaled[0].mean, report.estimate, report.variance, report.bias,
                                      report.mse, shots, cfg.seed))
            if reports:
                best = select_best(reports)
                rows.append(next(r for r in rows if r.p == p and r.schedule == schedule.label
                                 and r.fit == best.fit).as_best())
    return rows


def run_sweep(cfg: SweepConfig, spec: TfimSpec | None = None, grid_points=DEFAULT_GRID_POINTS,
              workers: int | None = None, progress: bool = True) -> list[ResultRow]:
    """Every (method, tau, p, schedule) cell; failures become rows, never exceptions."""
    spec = spec or TfimSpec(N=cfg.N)
    if spec.N != cfg.N:
        raise ValueError(f"model has N={spec.N} but the sweep asks for N={cfg.N}")
    workers = workers or cfg.workers
    cells = [Cell(m, tau, (im, it)) for im, m in enumerate(cfg.methods()) for it, tau in enumerate(cfg.tau_grid)]
    log.info(f"sweep: {len(cells)} circuits x {len(cfg.p_levels)} noise levels x {len(cfg.schedules)} schedules, "
             f"shots={cfg.shots if cfg.shot_rule == 'fixed' else 'M_s'}, seed={cfg.seed}, workers={workers}")

    rows = []
    bar = tqdm(total=len(cells), desc="sweep", disable=not progress)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_cell, cfg, cell, spec, grid_points) for cell in cells]
            for future in as_completed(futures):
                rows.extend(future.result())
                bar.update()
    else:
        for cell in cells:
            rows.extend(run_cell(cfg, cell, spec, grid_points))
            bar.update()
    bar.close()

    failed = sum(r.failed for r in rows)
    if failed:
        log.warning(f"sweep finished with {failed} failed rows")
    return sorted(rows, key=ResultRow.sort_key)
