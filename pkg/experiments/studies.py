"""Table generators for the degree, error, budget and steady-state studies.

Each generator is a pure function returning frozen rows; `HEADERS` maps a study
to its CSV header so the CLI can hand rows straight to `write_table`.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from approximation.jacobi_anger import DEFAULT_GRID_POINTS, analytic_degree_bound, build_hs_laurent, linf_circle_error, numeric_degree
from budgets.sampling_cost import FIXED_SHOTS, BudgetInput, fixed_budget_is_feasible, m_e_bound, m_s_bound, trotter_budget
from core.errors import FitNotFound, LabError
from mitigation.extrapolation import METHODS, extrapolate
from mitigation.zne import ScalingSchedule, scaled_expectations
from model.tfim import TfimSpec, build_observable, build_tfim, pauli_terms, zero_state
from qsp.circuit import QspCircuit, build_qsp_circuit, circuit_depth, echo_circuit, qsp_operator_error, success_probability
from simulation.density import DensityMatrix, plus_state
from simulation.sampling import sample_estimate
from simulation.trotter import trotter_steps

log = logging.getLogger("qsplab")

FIXED_DEGREES = (5, 9, 13, 17, 21, 25, 31)
CIRCUITS = ("auto", "qsp", "echo")


@dataclass(frozen=True)
class DegreeRow:
    tau: float
    eps: float
    degree: int
    bound_degree: int
    depth: int
    reduction: float


@dataclass(frozen=True)
class FixedDegreeRow:
    degree: int
    tau: float
    linf_error: float


@dataclass(frozen=True)
class QspErrorRow:
    tau: float
    eps_coeff: float
    degree: int
    eps_qsp: float
    ratio: float
    success_probability: float


@dataclass(frozen=True)
class BudgetRow:
    method: str
    tau: float
    p: float
    depth: int
    degree: int
    R: int
    log10_m_s: float
    m_e_log10: float
    shots_fixed: int
    within: bool


@dataclass(frozen=True)
class SteadyStateRow:
    tau: float
    p: float
    circuit: str
    degree: int
    depth: int
    expectation: float
    variance_proxy: float
    sampled_mean: float
    shot_variance: float
    linear: float | None
    richardson: float | None
    exponential: float | None


HEADERS = {name: [f for f in cls.__dataclass_fields__] for name, cls in {
    "degrees": DegreeRow, "fixed-depth": FixedDegreeRow, "qsp-error": QspErrorRow,
    "budgets": BudgetRow, "steady-state": SteadyStateRow}.items()}


# --- degree and truncation error ---
def degree_table(tau_grid, eps_levels, rule="order", grid_points=DEFAULT_GRID_POINTS, progress=False) -> list[DegreeRow]:
    rows = []
    for eps in eps_levels:
        for tau in tqdm(tau_grid, desc=f"degrees eps={eps:g}", disable=not progress):
            n = numeric_degree(tau, eps, grid_points, rule=rule).n
            bound = 2 * analytic_degree_bound(tau, eps) + 1
            rows.append(DegreeRow(tau, eps, n, bound, circuit_depth(n), bound / n))
    return rows


def average_reduction(rows: list[DegreeRow]) -> dict[float, float]:
    """Mean analytic-to-numeric degree ratio per eps."""
    by_eps = {}
    for r in rows:
        by_eps.setdefault(r.eps, []).append(r.reduction)
    return {eps: float(np.mean(v)) for eps, v in by_eps.items()}


def fixed_degree_errors(tau_grid, degrees=FIXED_DEGREES, grid_points=DEFAULT_GRID_POINTS) -> list[FixedDegreeRow]:
    rows = []
    for n in degrees:
        if n < 1 or n % 2 == 0:
            raise ValueError(f"degree must be odd and positive, got {n}")
        for tau in tau_grid:
            a, b = build_hs_laurent(tau, (n - 1) // 2)
            rows.append(FixedDegreeRow(n, tau, linf_circle_error(a, b, tau, grid_points)))
    return rows


def qsp_error_table(N, tau_grid, eps_levels, spec: TfimSpec | None = None, grid_points=DEFAULT_GRID_POINTS,
                    progress=False) -> list[QspErrorRow]:
    spec = spec or TfimSpec(N=N)
    h = build_tfim(spec)
    rho = DensityMatrix(zero_state(spec.N))
    rows = []
    for eps in eps_levels:
        for tau in tqdm(tau_grid, desc=f"qsp-error eps={eps:g}", disable=not progress):
            try:
                circuit, report = build_qsp_circuit(h, tau, eps, grid_points=grid_points)
            except LabError as exc:
                log.warning(f"qsp-error tau={tau} eps={eps}: {exc}")
                rows.append(QspErrorRow(tau, eps, 0, math.nan, math.nan, math.nan))
                continue
            err = qsp_operator_error(circuit, tau, h)
            rows.append(QspErrorRow(tau, eps, report.n, err, err / eps,
                                    success_probability(circuit.phases, circuit.oracle, rho)))
    return rows


# --- sampling budgets ---
def budget_table(p_levels, tau_grid, eps, N=4, spec: TfimSpec | None = None, grid_points=DEFAULT_GRID_POINTS,
                 progress=False) -> list[BudgetRow]:
    """QSP and Trotter sampling bounds at every (tau, p)."""
    spec = spec or TfimSpec(N=N)
    h = build_tfim(spec)
    rho = DensityMatrix(zero_state(spec.N))
    n_terms = len(pauli_terms(spec))
    rows = []
    for tau in tqdm(tau_grid, desc="budgets", disable=not progress):
        try:
            circuit, report = build_qsp_circuit(h, tau, eps, grid_points=grid_points)
            p_qsp = success_probability(circuit.phases, circuit.oracle, rho)
        except LabError as exc:
            log.warning(f"budgets tau={tau}: QSP circuit unavailable ({exc})")
            circuit = None
        r = trotter_steps(tau, eps)
        for p in p_levels:
            m_e = m_e_bound(p, 1) if p > 0 else math.inf
            if circuit is not None:
                depth = circuit_depth(report.n)
                m_s = m_s_bound(BudgetInput(p, depth, report.n, report.R, eps, p_qsp))
                rows.append(BudgetRow("qsp", tau, p, depth, report.n, report.R, math.log10(m_s), m_e * depth,
                                      FIXED_SHOTS, fixed_budget_is_feasible(m_s, p, depth)))
            depth = r * n_terms
            m_s = trotter_budget(tau, eps, depth, p)
            rows.append(BudgetRow("trotter", tau, p, depth, r, 0, math.log10(m_s), m_e * depth,
                                  FIXED_SHOTS, fixed_budget_is_feasible(m_s, p, depth)))
    return rows


# --- steady state ---
def steady_state_circuit(h, tau, eps, circuit="auto", grid_points=DEFAULT_GRID_POINTS) -> tuple[QspCircuit, str]:
    """Real QSP circuit, or the depth-matched echo when asked for or when synthesis fails."""
    if circuit not in CIRCUITS:
        raise ValueError(f"unknown circuit kind {circuit!r}")
    if circuit != "echo":
        try:
            return build_qsp_circuit(h, tau, eps, grid_points=grid_points)[0], "qsp"
        except LabError as exc:
            if circuit == "qsp":
                raise
            log.warning(f"tau={tau}: QSP synthesis failed ({exc}); using the echo circuit")
    n = numeric_degree(tau, eps, grid_points).n
    return echo_circuit(h, n), "echo"


def steady_state_study(N, tau_grid, p_levels, schedule=(1.0, 2.0, 3.0), shots=FIXED_SHOTS, seed=0,
                       circuit="auto", eps=1e-2, spec: TfimSpec | None = None, progress=False) -> list[SteadyStateRow]:
    """Exact and sampled expectations at long times; fit columns hold estimates on the exact scaled means."""
    spec = spec or TfimSpec(N=N)
    h = build_tfim(spec)
    observable = build_observable(spec.N)
    rho0 = plus_state(zero_state(spec.N))
    scaling = ScalingSchedule(tuple(schedule))
    rows = []
    for it, tau in enumerate(tqdm(tau_grid, desc="steady-state", disable=not progress)):
        qsp, kind = steady_state_circuit(h, tau, eps, circuit)
        layers = qsp.to_circuit()
        for ip, p in enumerate(p_levels):
            scaled = scaled_expectations(layers, rho0, p, scaling, None, seed, observable)
            mean = scaled[0].mean
            sampled = sample_estimate(mean, shots, int(np.random.SeedSequence([seed, it, ip]).generate_state(1)[0]))
            fits = {}
            for method in METHODS:
                try:
                    fits[method] = extrapolate(method, scaling.factors, [s.mean for s in scaled])
                except FitNotFound as exc:
                    log.debug(f"steady-state tau={tau} p={p}: {method} fit not found ({exc.reason})")
                    fits[method] = None
            log.info(f"steady-state tau={tau} p={p} ({kind}, depth {layers.depth}): <O> = {mean:.3e}")
            rows.append(SteadyStateRow(tau, p, kind, qsp.n, layers.depth, mean, 1 - mean**2, sampled.mean,
                                       sampled.variance, fits["linear"], fits["richardson"], fits["exponential"]))
    return rows
