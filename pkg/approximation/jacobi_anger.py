import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from approximation.laurent import LaurentPolynomial
from core.errors import NoConvergence, RangeError

log = logging.getLogger("qsplab")

MAX_TAU = 500.0
MIN_DEGREE = 5
DEFAULT_GRID_POINTS = 1001
RULES = ("strict", "order")


@dataclass(frozen=True)
class TruncationReport:
    R: int
    n: int
    eps_coeff: float
    linf_error: float
    rule: str = "strict"

    def __post_init__(self):
        if self.n != 2 * self.R + 1:
            raise ValueError(f"degree {self.n} is not 2R+1 for R={self.R}")
        if self.rule == "strict" and self.linf_error > self.eps_coeff:
            raise ValueError(f"linf error {self.linf_error:.3e} exceeds eps {self.eps_coeff:.1e}")


# --- Bessel coefficients ---
def bessel_j(k: int, tau: float) -> float:
    if k < 0:
        raise ValueError(f"order must be non-negative, got {k}")
    if abs(tau) > MAX_TAU:
        raise RangeError(f"|tau| = {abs(tau)} beyond supported {MAX_TAU}")
    return float(special.jv(k, tau))


def bessel_orders(kmax: int, tau: float) -> np.ndarray:
    """J_0(tau) .. J_kmax(tau)."""
    if abs(tau) > MAX_TAU:
        raise RangeError(f"|tau| = {abs(tau)} beyond supported {MAX_TAU}")
    return special.jv(np.arange(kmax + 1), tau)


# --- degree selection ---
def analytic_degree_bound(tau: float, eps: float) -> int:
    """Upper bound r~(tau, eps) on the truncation order."""
    if tau <= 0 or not 0 < eps < 1:
        raise ValueError(f"need tau > 0 and 0 < eps < 1, got tau={tau}, eps={eps}")
    log_inv = math.log(1 / eps)
    if tau > log_inv / math.e:
        return math.ceil(math.e * tau)
    return math.ceil(4 * log_inv / math.log(math.e + log_inv / tau))


def _signed_terms(tau: float, nmax: int, theta: np.ndarray) -> np.ndarray:
    """Row m holds the z^{±m} contribution of A - iB on the angle grid."""
    j = bessel_orders(nmax, tau)
    m = np.arange(nmax + 1)
    sign = np.where((m // 2) % 2 == 0, 1.0, -1.0)
    phase = np.where(m % 2 == 0, 1.0, -1j)
    weight = np.where(m == 0, 1.0, 2.0) * sign * phase * j / math.sqrt(2)
    return weight[:, None] * np.cos(np.outer(m, theta))


def numeric_degree(tau, eps_coeff, grid_points=DEFAULT_GRID_POINTS, rule="strict", min_degree=MIN_DEGREE) -> TruncationReport:
    """Smallest odd degree whose truncated expansion meets eps_coeff on the x-grid.

    rule="strict" accepts linf <= eps_coeff; rule="order" accepts linf < 10*eps_coeff.
    """
    if not 1e-8 < eps_coeff < 1:
        raise RangeError(f"eps_coeff {eps_coeff} outside (1e-8, 1)")
    if rule not in RULES:
        raise ValueError(f"unknown degree rule {rule!r}")
    nmax = max(2 * analytic_degree_bound(tau, eps_coeff) + 1, max(min_degree, 1) | 1)
    x = np.linspace(-1.0, 1.0, grid_points)
    theta = np.arccos(x)
    target = np.exp(-1j * tau * x) / math.sqrt(2)
    partial = np.cumsum(_signed_terms(tau, nmax, theta), axis=0)
    errors = np.max(np.abs(partial - target), axis=1)
    threshold = eps_coeff if rule == "strict" else 10 * eps_coeff

    for n in range(max(min_degree, 1) | 1, nmax + 1, 2):
        ok = errors[n] <= threshold if rule == "strict" else errors[n] < threshold
        if ok:
            log.debug(f"tau={tau}: degree {n} reaches linf {errors[n]:.3e} (eps {eps_coeff:.0e}, {rule})")
            return TruncationReport((n - 1) // 2, n, eps_coeff, float(errors[n]), rule)
    raise NoConvergence(f"tau={tau}, eps={eps_coeff}: no degree up to {nmax} reaches the target ({rule})")


# --- the Hamiltonian-simulation polynomial ---
def build_hs_laurent(tau: float, R: int) -> tuple[LaurentPolynomial, LaurentPolynomial]:
    """(A, B) with A -> cos(tau cos t)/sqrt2 and B -> sin(tau cos t)/sqrt2 on z = e^{it}."""
    if R < 0:
        raise ValueError(f"R must be non-negative, got {R}")
    n = 2 * R + 1
    j = bessel_orders(n, tau) / math.sqrt(2)
    a = np.zeros(2 * n + 1)
    b = np.zeros(2 * n + 1)
    a[n] = j[0]
    for k in range(1, R + 1):
        a[n + 2 * k] = a[n - 2 * k] = (-1) ** k * j[2 * k]
    for k in range(R + 1):
        b[n + 2 * k + 1] = b[n - 2 * k - 1] = (-1) ** k * j[2 * k + 1]
    return LaurentPolynomial(-n, a), LaurentPolynomial(-n, b)


def linf_circle_error(a: LaurentPolynomial, b: LaurentPolynomial, tau: float, grid_points=DEFAULT_GRID_POINTS) -> float:
    """max over x in [-1, 1] of |P(e^{i arccos x}) - e^{-i tau x}/sqrt2| with P = A - iB."""
    if grid_points < 101:
        raise ValueError(f"grid_points must be >= 101, got {grid_points}")
    x = np.linspace(-1.0, 1.0, grid_points)
    theta = np.arccos(x)
    p = a.on_circle(theta) - 1j * b.on_circle(theta)
    return float(np.max(np.abs(p - np.exp(-1j * tau * x) / math.sqrt(2))))


def tail_bound(tau: float, R: int, terms: int = 50) -> float:
    """2 sum_l |J_{2R+2l+2}| + 2 sum_l |J_{2R+2l+3}|, the truncation tail."""
    j = np.abs(bessel_orders(2 * R + 2 * terms + 3, tau))
    return float(2 * j[2 * R + 2::2].sum() + 2 * j[2 * R + 3::2].sum())
