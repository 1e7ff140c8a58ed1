"""Small deterministic linear-algebra kernels.

The symmetric eigensolver is a cyclic Jacobi iteration rather than LAPACK so
that eigenvalue ordering and round-off are reproducible across platforms:
off-diagonal threshold 1e-14 (relative to the Frobenius norm), at most 30
sweeps, eigenvalues returned in descending order.
"""

from __future__ import annotations

import numpy as np

from .errors import NotSPD

JACOBI_OFFDIAG_TOL = 1.0e-14
JACOBI_MAX_SWEEPS = 30


def jacobi_eigh(a):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with ``a @ v[:, k] = w[k] * v[:, k]``,
    eigenvalues sorted in descending order (ties broken by first index).
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("jacobi_eigh expects a symmetric square matrix")
    m = 0.5 * (a + a.T)
    v = np.eye(n)
    scale = np.linalg.norm(m)
    tol = JACOBI_OFFDIAG_TOL * max(scale, 1e-300)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(sum(m[p, q] ** 2 for p in range(n) for q in range(p + 1, n)) * 2.0)
        if off <= tol:
            break
        for p in range(n):
            for q in range(p + 1, n):
                if abs(m[p, q]) <= 0.0:
                    continue
                # classic 2x2 rotation annihilating m[p, q]
                theta = 0.5 * (m[q, q] - m[p, p]) / m[p, q]
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0.0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                m = rot.T @ m @ rot
                m[p, q] = m[q, p] = 0.0
                v = v @ rot
    w = np.diag(m).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def sym_function(a, fn):
    """Apply a scalar function to a symmetric matrix through its spectrum."""
    w, v = jacobi_eigh(a)
    return v @ np.diag(fn(w)) @ v.T


def expm_sym(a):
    """Matrix exponential of a symmetric matrix (spectral)."""
    return sym_function(a, np.exp)


def logm_spd(a):
    """Matrix logarithm of an SPD matrix (spectral)."""
    w, v = jacobi_eigh(a)
    if np.any(w <= 0.0):
        raise NotSPD(f"matrix has non-positive eigenvalue {w.min():g}")
    return v @ np.diag(np.log(w)) @ v.T


def powm_spd(a, exponent):
    """Real matrix power of an SPD matrix (spectral)."""
    w, v = jacobi_eigh(a)
    if np.any(w <= 0.0):
        raise NotSPD(f"matrix has non-positive eigenvalue {w.min():g}")
    return v @ np.diag(w ** exponent) @ v.T


def sqrtm_spd(a):
    return powm_spd(a, 0.5)


def assert_spd(a, name="matrix"):
    w, _ = jacobi_eigh(a)
    if np.any(w <= 0.0):
        raise NotSPD(f"{name} is not SPD (min eigenvalue {w.min():g})")


def pairwise_sum(values):
    """Sum a sequence with a fixed pairwise reduction tree.

    Used for quadrature assembly so that results are bit-reproducible for a
    fixed evaluation order, independent of any parallel point evaluation.
    """
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]
