"""Zero-noise extrapolators and their variance propagation.

All fits read the scale factor c as abscissa and report the value at c = 0.
Linear and Richardson estimates are fixed weighted sums of the scaled means,
so their variance is sum w_k^2 Var_k. The exponential estimate is nonlinear;
its variance goes through the delta method with a central-difference Jacobian.
"""
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, brentq, curve_fit

from core.errors import DegenerateSchedule, FitNotFound

log = logging.getLogger("qsplab")

MAX_RICHARDSON_DEGREE = 3
DEFAULT_MAX_GAIN = 100.0
FLAT_TOL = 1e-15
METHODS = ("exponential", "richardson", "linear")


@dataclass(frozen=True)
class ExponentialFit:
    """y(c) = offset + amplitude * exp(-rate * c)."""
    offset: float
    amplitude: float
    rate: float

    @property
    def estimate(self) -> float:
        return self.offset + self.amplitude

    def __call__(self, c):
        return self.offset + self.amplitude * np.exp(-self.rate * np.asarray(c, dtype=float))


def _as_arrays(schedule, means):
    c = np.asarray(schedule, dtype=float)
    y = np.asarray(means, dtype=float)
    if c.shape != y.shape:
        raise ValueError(f"{c.size} factors but {y.size} means")
    return c, y


def _check_distinct(c):
    if np.unique(c).size != c.size:
        raise DegenerateSchedule(f"repeated scale factors in {c.tolist()}")


# --- Richardson ---
def richardson_weights(schedule) -> np.ndarray:
    """Lagrange weights at c = 0: beta_k = prod_{i != k} c_i / (c_i - c_k)."""
    c = np.asarray(schedule, dtype=float)
    if c.size < 2:
        raise DegenerateSchedule("Richardson needs at least two scale factors")
    if c.size - 1 > MAX_RICHARDSON_DEGREE:
        raise DegenerateSchedule(f"Richardson degree {c.size - 1} above {MAX_RICHARDSON_DEGREE}")
    _check_distinct(c)
    betas = np.ones(c.size)
    for k in range(c.size):
        for i in range(c.size):
            if i != k:
                betas[k] *= c[i] / (c[i] - c[k])
    return betas


def fit_richardson(schedule, means) -> tuple[float, np.ndarray]:
    c, y = _as_arrays(schedule, means)
    betas = richardson_weights(c)
    return float(betas @ y), betas


# --- linear ---
def linear_weights(schedule) -> np.ndarray:
    """Row of the least-squares pseudo-inverse that yields the intercept."""
    c = np.asarray(schedule, dtype=float)
    if c.size < 2:
        raise DegenerateSchedule("linear fit needs at least two points")
    _check_distinct(c)
    design = np.column_stack([np.ones_like(c), c])
    return np.linalg.pinv(design)[0]


def fit_linear(schedule, means) -> float:
    c, y = _as_arrays(schedule, means)
    return float(linear_weights(c) @ y)


# --- exponential ---
def _rate_from_three(c, y) -> float:
    """Decay rate through three points; closed form when equally spaced."""
    h1, h2 = c[1] - c[0], c[2] - c[1]
    if y[1] == y[0]:
        raise FitNotFound("first two scaled means coincide")
    q = (y[2] - y[1]) / (y[1] - y[0])
    if q <= 0:
        raise FitNotFound(f"non-monotone scaled means {y.tolist()}")
    if abs(h1 - h2) <= 1e-12 * max(h1, h2):
        if abs(q - 1) < 1e-12:
            raise FitNotFound("scaled means lie on a line; rate is unidentifiable")
        return -math.log(q) / h1

    linear_ratio = h2 / h1
    if abs(q - linear_ratio) < 1e-12:
        raise FitNotFound("scaled means lie on a line; rate is unidentifiable")

    def mismatch(a):
        return math.log(math.exp(-a * h1) * math.expm1(-a * h2) / math.expm1(-a * h1)) - math.log(q)

    sign = 1.0 if q < linear_ratio else -1.0
    lo, hi = sign * 1e-9, sign * 1.0
    while mismatch(lo) * mismatch(hi) > 0:
        hi *= 2
        if abs(hi) > 700 / max(h1, h2):
            raise FitNotFound(f"no decay rate reproduces the ratio {q:.6g}")
    return brentq(mismatch, min(lo, hi), max(lo, hi), xtol=1e-15)


def _fit_three(c, y) -> ExponentialFit:
    a = _rate_from_three(c, y)
    amplitude = (y[1] - y[0]) / (math.exp(-a * c[1]) - math.exp(-a * c[0]))
    return ExponentialFit(y[0] - amplitude * math.exp(-a * c[0]), amplitude, a)


def _fit_many(c, y) -> ExponentialFit:
    diffs = np.diff(y)
    if not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise FitNotFound(f"non-monotone scaled means {y.tolist()}")
    mid = c.size // 2
    try:
        guess = _fit_three(c[[0, mid, -1]], y[[0, mid, -1]])
        p0 = (guess.offset, guess.amplitude, guess.rate)
    except FitNotFound:
        p0 = (y[-1], y[0] - y[-1], 1.0)

    def model(x, offset, amplitude, rate):
        return offset + amplitude * np.exp(-rate * x)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", OptimizeWarning)
            params, _ = curve_fit(model, c, y, p0=p0, maxfev=10000)
    except (RuntimeError, OptimizeWarning, ValueError) as exc:
        raise FitNotFound(f"least-squares exponential fit failed: {exc}") from exc
    return ExponentialFit(*map(float, params))


def fit_exponential_model(schedule, means, max_gain=DEFAULT_MAX_GAIN) -> ExponentialFit:
    c, y = _as_arrays(schedule, means)
    if c.size < 3:
        raise FitNotFound("exponential fit needs at least three points")
    _check_distinct(c)
    if np.ptp(y) <= FLAT_TOL * max(1.0, np.max(np.abs(y))):
        raise FitNotFound("constant scaled means; decay rate is unidentifiable")
    fit = _fit_three(c, y) if c.size == 3 else _fit_many(c, y)
    if not all(map(math.isfinite, (fit.offset, fit.amplitude, fit.rate))):
        raise FitNotFound("exponential fit produced non-finite parameters")
    gain = math.exp(fit.rate * c[0]) if fit.rate * c[0] < 700 else math.inf
    if gain > max_gain:
        raise FitNotFound(f"extrapolation gain {gain:.3g} above {max_gain:g} (rate {fit.rate:.4g})")
    return fit


def fit_exponential(schedule, means, max_gain=DEFAULT_MAX_GAIN) -> float:
    return fit_exponential_model(schedule, means, max_gain).estimate


# --- dispatch & variance ---
def extrapolate(method: str, schedule, means, max_gain=DEFAULT_MAX_GAIN) -> float:
    if method == "linear":
        return fit_linear(schedule, means)
    if method == "richardson":
        return fit_richardson(schedule, means)[0]
    if method == "exponential":
        return fit_exponential(schedule, means, max_gain)
    raise ValueError(f"unknown extrapolation method {method!r}")


def propagate_variance(method: str, schedule, scaled_variances, means, max_gain=DEFAULT_MAX_GAIN) -> float:
    var = np.asarray(scaled_variances, dtype=float)
    if np.any(var < 0):
        raise ValueError("scaled variances must be non-negative")
    if method == "linear":
        return float(linear_weights(schedule) ** 2 @ var)
    if method == "richardson":
        return float(richardson_weights(schedule) ** 2 @ var)
    if method != "exponential":
        raise ValueError(f"unknown extrapolation method {method!r}")
    if not np.any(var):
        return 0.0
    y = np.asarray(means, dtype=float)
    grad = np.zeros(y.size)
    for k in range(y.size):
        step = 1e-6 * max(1.0, abs(y[k]))
        up, down = y.copy(), y.copy()
        up[k] += step
        down[k] -= step
        grad[k] = (fit_exponential(schedule, up, max_gain) - fit_exponential(schedule, down, max_gain)) / (2 * step)
    return float(grad**2 @ var)
