"""Complementary polynomials for the QSP embedding.

Given A, B real on the unit circle with A^2 + B^2 <= 1, find C (reciprocal) and
D (anti-reciprocal) with A^2 + B^2 + |C|^2 + |D|^2 = 1 on the circle. Both come
from one spectral factor G~ of W = 1 - A^2 - B^2: C is its reciprocal half and D
its anti-reciprocal half, so |C|^2 + |D|^2 = |G~|^2 = W.

The factor is found from the roots of z^m W(z) (roots inside the disk plus half
of every cluster on the circle). Long polynomials, or a root route that misses
the residual, go through Wilson's Newton iteration instead.
"""
import logging

import numpy as np

from approximation.laurent import LaurentPolynomial, full_circle_grid
from core.errors import CompletionFailure

log = logging.getLogger("qsplab")

RESIDUAL_TOL = 1e-8
TRIM_TOL = 1e-15
CIRCLE_TOL = 1e-5
CLUSTER_TOL = 1e-4
MAX_ROOT_DEGREE = 400
METHODS = ("auto", "roots", "wilson")


def completion_residual(a, b, c, d, grid_points=1001) -> float:
    theta = full_circle_grid(grid_points)
    total = sum(np.abs(p.on_circle(theta)) ** 2 for p in (a, b, c, d))
    return float(np.max(np.abs(total - 1.0)))


def _trimmed_w(a, b):
    n = max(a.degree, b.degree)
    w = (LaurentPolynomial.constant(1.0) - a * a - b * b).centered(2 * n)
    w = 0.5 * (w + w[::-1])
    scale = np.max(np.abs(w))
    if scale < TRIM_TOL:
        return n, None
    significant = np.nonzero(np.abs(w) > TRIM_TOL * scale)[0]
    m = int(np.max(np.abs(significant - 2 * n)))
    return n, w[2 * n - m:2 * n + m + 1]


# --- root route ---
def _polish(coeffs, roots, steps=3):
    deriv = np.polyder(coeffs)
    out = roots.copy()
    for i, r in enumerate(out):
        if abs(abs(r) - 1) <= CIRCLE_TOL:
            continue
        for _ in range(steps):
            slope = np.polyval(deriv, r)
            if slope == 0:
                break
            r = r - np.polyval(coeffs, r) / slope
        out[i] = r
    return out


def _half_circle_clusters(roots):
    """Group near-circle roots by position; keep half of every group on the circle."""
    kept, used = [], np.zeros(roots.size, dtype=bool)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        group = np.nonzero(~used & (np.abs(roots - r) < CLUSTER_TOL))[0]
        used[group] = True
        if group.size % 2:
            raise CompletionFailure(f"odd multiplicity {group.size} root on the unit circle near {r:.6f}")
        kept += [np.exp(1j * np.angle(roots[group].mean()))] * (group.size // 2)
    return kept


def _factor_by_roots(w):
    m = (w.size - 1) // 2
    coeffs = w[::-1]
    roots = _polish(coeffs, np.roots(coeffs))
    radius = np.abs(roots)
    inside = list(roots[radius < 1 - CIRCLE_TOL])
    on_circle = _half_circle_clusters(roots[np.abs(radius - 1) <= CIRCLE_TOL])
    chosen = np.array(inside + on_circle, dtype=complex)
    if chosen.size != m:
        raise CompletionFailure(f"selected {chosen.size} roots for a degree-{m} factor")
    monic = np.poly(chosen) if chosen.size else np.ones(1, dtype=complex)
    if np.max(np.abs(monic.imag)) > 1e-8 * np.max(np.abs(monic)):
        raise CompletionFailure("root selection broke conjugate symmetry")
    monic = monic.real

    theta = full_circle_grid()
    z = np.exp(1j * theta)
    target = (np.power.outer(z, np.arange(-m, m + 1)) @ w).real
    g2 = np.abs(np.polyval(monic, z)) ** 2
    k2 = float(np.sum(target * g2) / np.sum(g2 * g2))
    log.debug(f"root completion: {len(inside)} inside, {len(on_circle)} on circle, K^2={k2:.6e}")
    return np.sqrt(max(k2, 0.0)) * monic[::-1]


# --- Wilson's iteration ---
def _factor_by_wilson(w, max_iter=100, tol=1e-15):
    m = (w.size - 1) // 2
    target = w[m:]
    g = np.zeros(m + 1)
    g[0] = np.sqrt(target[0])
    k, l = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
    for it in range(max_iter):
        padded = np.concatenate([g, np.zeros(m + 1)])
        jac = np.where(l >= k, g[np.clip(l - k, 0, m)], 0.0) + np.where(l + k <= m, padded[l + k], 0.0)
        autocorr = np.correlate(g, g, "full")[m:]
        g_new = np.linalg.solve(jac, target + autocorr)
        step = np.linalg.norm(g_new - g)
        g = g_new
        if step <= tol * max(1.0, np.linalg.norm(g)):
            break
    log.debug(f"wilson completion: {it + 1} iterations, last step {step:.3e}")
    return g


def _split(g_ascending, n):
    """G~ = z^{-m/2} G split into reciprocal and anti-reciprocal halves on -n..n."""
    m = g_ascending.size - 1
    if m % 2:
        raise CompletionFailure(f"spectral factor of odd degree {m} cannot be centred")
    h = m // 2
    if h > n:
        raise CompletionFailure(f"factor degree {h} exceeds input degree {n}")
    g = np.zeros(2 * n + 1)
    g[n - h:n + h + 1] = g_ascending
    c = 0.5 * (g + g[::-1])
    d = 0.5 * (g - g[::-1])
    return LaurentPolynomial(-n, c), LaurentPolynomial(-n, d)


def complete(a: LaurentPolynomial, b: LaurentPolynomial, method="auto", grid_points=1001):
    if method not in METHODS:
        raise ValueError(f"unknown completion method {method!r}")
    n, w = _trimmed_w(a, b)
    if w is None:
        zero = LaurentPolynomial(-n, np.zeros(2 * n + 1))
        return zero, zero

    attempts = []
    if method == "roots" or (method == "auto" and w.size - 1 <= MAX_ROOT_DEGREE):
        attempts.append(("roots", _factor_by_roots))
    if method in ("auto", "wilson"):
        attempts.append(("wilson", _factor_by_wilson))

    best = np.inf
    for name, factor in attempts:
        try:
            c, d = _split(factor(w), n)
        except (CompletionFailure, np.linalg.LinAlgError) as exc:
            log.warning(f"{name} completion failed: {exc}")
            continue
        residual = completion_residual(a, b, c, d, grid_points)
        if residual <= RESIDUAL_TOL:
            log.debug(f"completion by {name}: residual {residual:.3e}")
            return c, d
        log.warning(f"{name} completion residual {residual:.3e} above {RESIDUAL_TOL:.0e}")
        best = min(best, residual)
    raise CompletionFailure("no completion met the circle residual", best)
