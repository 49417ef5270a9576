import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from core.errors import DegenerateSchedule, LabError
from mitigation.extrapolation import DEFAULT_MAX_GAIN, METHODS, extrapolate, propagate_variance
from simulation.density import MAX_P, Circuit, DensityMatrix, NoiseModel, evolve, expectation, postselect_plus
from simulation.sampling import ShotEstimate, derived_seeds, exact_estimate, sample_estimate

log = logging.getLogger("qsplab")


@dataclass(frozen=True)
class ScalingSchedule:
    factors: tuple

    def __post_init__(self):
        c = tuple(float(f) for f in self.factors)
        if not c or c[0] != 1.0:
            raise DegenerateSchedule(f"schedule must start at 1, got {list(c)}")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise DegenerateSchedule(f"schedule must strictly increase, got {list(c)}")
        object.__setattr__(self, "factors", c)

    @property
    def label(self) -> str:
        return "-".join(f"{f:g}" for f in self.factors)

    def check_noise(self, p: float):
        if p * self.factors[-1] > MAX_P:
            raise DegenerateSchedule(f"p={p} scaled by {self.factors[-1]} exceeds 3/4")


@dataclass(frozen=True)
class ZneReport:
    method: str
    schedule: str
    estimate: float
    variance: float
    bias: float
    mse: float
    scaled_means: tuple = field(default=())
    scaled_variances: tuple = field(default=())
    degree: int = 0

    @property
    def fit(self) -> str:
        return f"richardson{self.degree}" if self.method == "richardson" else self.method


@dataclass(frozen=True)
class BlindEstimate:
    method: str
    estimate: float = float("nan")
    variance: float = float("nan")
    failure: str = ""


# --- stage one: measure at amplified noise ---
def measure(circuit: Circuit, rho0: DensityMatrix, p: float, observable) -> float:
    """Exact expectation after noisy evolution; QSP circuits post-select the ancilla on |+>."""
    rho = evolve(circuit, rho0, NoiseModel(p))
    if circuit.label == "qsp":
        rho, _ = postselect_plus(rho)
    return expectation(observable, rho)


def scaled_expectations(circuit: Circuit, rho0: DensityMatrix, p: float, schedule: ScalingSchedule,
                        M, seed: int, observable, workers: int = 1) -> list[ShotEstimate]:
    """One estimate per scale factor; M=None returns exact means with zero variance."""
    schedule.check_noise(p)
    seeds = derived_seeds(seed, len(schedule.factors))

    def one(k):
        mean = measure(circuit, rho0, p * schedule.factors[k], observable)
        return exact_estimate(mean) if M is None else sample_estimate(mean, M, seeds[k])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(len(schedule.factors))))
    return [one(k) for k in range(len(schedule.factors))]


# --- stage two: extrapolate and score ---
def evaluate(method: str, schedule: ScalingSchedule, scaled: list[ShotEstimate], ideal: float,
             max_gain=DEFAULT_MAX_GAIN) -> ZneReport:
    means = [s.mean for s in scaled]
    variances = [s.variance for s in scaled]
    estimate = extrapolate(method, schedule.factors, means, max_gain)
    variance = propagate_variance(method, schedule.factors, variances, means, max_gain)
    bias = estimate - ideal
    return ZneReport(method, schedule.label, estimate, variance, bias, variance + bias**2,
                     tuple(means), tuple(variances), len(schedule.factors) - 1 if method == "richardson" else 0)


def _tie_key(report: ZneReport):
    first_factors = tuple(float(f) for f in report.schedule.split("-"))
    return report.mse, METHODS.index(report.method), first_factors[-1], first_factors


def select_best(reports: list[ZneReport]) -> ZneReport:
    """Lowest MSE; ties go to exponential, then richardson, then linear, then the smaller schedule."""
    if not reports:
        raise ValueError("select_best needs at least one report")
    return min(reports, key=_tie_key)


def extrapolate_all(schedule: ScalingSchedule, scaled: list[ShotEstimate], max_gain=DEFAULT_MAX_GAIN) -> list[BlindEstimate]:
    """Every extrapolator without reference to an ideal value; failures are reported, not raised."""
    means = [s.mean for s in scaled]
    variances = [s.variance for s in scaled]
    out = []
    for method in METHODS:
        try:
            out.append(BlindEstimate(method, extrapolate(method, schedule.factors, means, max_gain),
                                     propagate_variance(method, schedule.factors, variances, means, max_gain)))
        except LabError as exc:
            log.debug(f"blind {method} fit failed: {exc}")
            out.append(BlindEstimate(method, failure=f"{type(exc).__name__}: {exc}"))
    return out
