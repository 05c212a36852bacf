from __future__ import annotations

import numpy as np

from ..errors import DegenerateAllZero

IMAG_TOL = 1e-9


def trim(coeffs) -> np.ndarray:
    """Drop leading zeros from a highest-degree-first coefficient list."""
    c = np.asarray(coeffs, dtype=float)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise DegenerateAllZero("all polynomial coefficients are zero")
    return c[nz[0]:]


def companion(coeffs) -> np.ndarray:
    c = trim(coeffs)
    n = c.size - 1
    mat = np.zeros((n, n))
    mat[0, :] = -c[1:] / c[0]
    mat[1:, :-1] = np.eye(n - 1)
    return mat


def real_roots(coeffs) -> np.ndarray:
    """Sorted real roots, from companion eigenvalues polished by Newton steps."""
    c = trim(coeffs)
    if c.size == 1:
        return np.empty(0)
    if c.size == 2:
        return np.array([-c[1] / c[0]])
    eig = np.linalg.eigvals(companion(c))
    keep = np.abs(eig.imag) <= IMAG_TOL * np.maximum(1.0, np.abs(eig))
    roots = eig.real[keep]
    dc = np.polyder(c)
    for _ in range(3):
        fv = np.polyval(c, roots)
        fp = np.polyval(dc, roots)
        safe = np.where(fp != 0, fp, 1.0)
        cand = np.where(fp != 0, roots - fv / safe, roots)
        # keep a step only if it improves the residual (guards near-double roots)
        roots = np.where(np.abs(np.polyval(c, cand)) < np.abs(fv), cand, roots)
    return np.sort(roots)


def smallest_positive_root(coeffs, tol: float = 1e-12) -> float | None:
    """Smallest real root greater than ``tol``, or None when there is none.

    Coefficients run from the highest degree down, as for ``numpy.polyval``.
    """
    roots = real_roots(coeffs)
    pos = roots[roots > tol]
    return float(pos[0]) if pos.size else None
