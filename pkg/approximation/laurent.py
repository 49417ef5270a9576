from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

SYMMETRY_TOL = 1e-14


@dataclass(frozen=True)
class LaurentPolynomial:
    """Real-coefficient Laurent polynomial sum_m c_m z^m, m = min_degree..max_degree."""
    min_degree: int
    coefficients: NDArray[np.float64]

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-D array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def constant(cls, value: float) -> "LaurentPolynomial":
        return cls(0, np.array([value], dtype=float))

    @classmethod
    def from_dict(cls, terms: dict) -> "LaurentPolynomial":
        lo, hi = min(terms), max(terms)
        c = np.zeros(hi - lo + 1)
        for m, v in terms.items():
            c[m - lo] = v
        return cls(lo, c)

    # --- metadata ---
    @property
    def max_degree(self) -> int:
        return self.min_degree + self.coefficients.size - 1

    @property
    def degree(self) -> int:
        return max(abs(self.min_degree), abs(self.max_degree))

    def coefficient(self, m: int) -> float:
        k = m - self.min_degree
        return float(self.coefficients[k]) if 0 <= k < self.coefficients.size else 0.0

    def centered(self, degree=None) -> NDArray[np.float64]:
        """Coefficients on the symmetric window -degree..degree."""
        n = self.degree if degree is None else degree
        return np.array([self.coefficient(m) for m in range(-n, n + 1)])

    @property
    def symmetry(self) -> str:
        c = self.centered()
        if np.all(np.abs(c - c[::-1]) <= SYMMETRY_TOL):
            return "reciprocal"
        if np.all(np.abs(c + c[::-1]) <= SYMMETRY_TOL):
            return "anti-reciprocal"
        return "none"

    @property
    def parity(self) -> str:
        support = {m % 2 for m in range(self.min_degree, self.max_degree + 1) if self.coefficient(m) != 0.0}
        if support == {1}:
            return "odd"
        if support <= {0}:
            return "even"
        return "mixed"

    # --- evaluation & arithmetic ---
    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        powers = np.arange(self.min_degree, self.max_degree + 1)
        return np.power.outer(z, powers) @ self.coefficients

    def on_circle(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        lo = min(self.min_degree, other.min_degree)
        hi = max(self.max_degree, other.max_degree)
        return LaurentPolynomial(lo, np.array([self.coefficient(m) + other.coefficient(m) for m in range(lo, hi + 1)]))

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.min_degree, -self.coefficients)

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPolynomial):
            return LaurentPolynomial(self.min_degree + other.min_degree, np.convolve(self.coefficients, other.coefficients))
        return LaurentPolynomial(self.min_degree, self.coefficients * float(other))

    __rmul__ = __mul__


def circle_grid(points: int = 1001) -> NDArray[np.float64]:
    """Angles theta on [0, pi]; z = e^{i theta} covers x = cos(theta) in [-1, 1]."""
    return np.linspace(0.0, np.pi, points)


def full_circle_grid(points: int = 1001) -> NDArray[np.float64]:
    return np.linspace(0.0, 2 * np.pi, points, endpoint=False)
