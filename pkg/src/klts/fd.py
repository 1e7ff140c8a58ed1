"""Central finite-difference helpers for the verification oracles.

These are deliberately simple and kept apart from the analytic kernels: the
library never differentiates numerically on its primary paths, the oracles
here exist so every closed-form derivative can be cross-checked against an
independent route.

Default steps: 1e-5 for geometric/parametric derivatives, 1e-6 * max(1, |C|)
for tensor-component derivatives.
"""

from __future__ import annotations

import numpy as np

PARAMETRIC_STEP = 1.0e-5
COMPONENT_STEP = 1.0e-6


def central_diff(fn, x, h=PARAMETRIC_STEP):
    """d fn / dx at scalar x; fn may return a scalar or an ndarray."""
    return (np.asarray(fn(x + h)) - np.asarray(fn(x - h))) / (2.0 * h)


def central_diff4(fn, x, h=1.0e-4):
    """Fourth-order scalar derivative (five-point stencil)."""
    return (-np.asarray(fn(x + 2 * h)) + 8.0 * np.asarray(fn(x + h))
            - 8.0 * np.asarray(fn(x - h)) + np.asarray(fn(x - 2 * h))) / (12.0 * h)


def partial_diff(fn, x, i, h=PARAMETRIC_STEP):
    """Partial derivative of fn(vector) along coordinate i."""
    xp = np.array(x, dtype=float)
    xm = np.array(x, dtype=float)
    xp[i] += h
    xm[i] -= h
    return (np.asarray(fn(xp)) - np.asarray(fn(xm))) / (2.0 * h)


def partial_diff4(fn, x, i, h=1.0e-4):
    """Fourth-order central partial derivative (five-point stencil).

    Used by residual oracles that must resolve 1e-10: the larger step cuts
    the cancellation floor while the higher order keeps truncation below it.
    """
    def at(delta):
        xs = np.array(x, dtype=float)
        xs[i] += delta
        return np.asarray(fn(xs))

    return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h)


def grad_wrt_matrix(fn, a, h=None, sym=False):
    """Componentwise central-difference gradient of scalar fn wrt matrix a.

    With ``sym=True`` the perturbations keep the argument symmetric and the
    result is the symmetrized gradient (the convention used for derivatives
    with respect to C-like tensors).
    """
    a = np.asarray(a, dtype=float)
    if h is None:
        h = COMPONENT_STEP * max(1.0, np.linalg.norm(a))
    g = np.zeros_like(a)
    n, m = a.shape
    for i in range(n):
        for j in range(m):
            if sym and j < i:
                continue
            ap = a.copy()
            am = a.copy()
            ap[i, j] += h
            am[i, j] -= h
            if sym and i != j:
                ap[j, i] += h
                am[j, i] -= h
            d = (fn(ap) - fn(am)) / (2.0 * h)
            if sym and i != j:
                g[i, j] = g[j, i] = 0.5 * d
            else:
                g[i, j] = d
    return g


def directional_diff_matrix(fn, a, direction, h=None):
    """Directional derivative of fn (any shape output) along a matrix direction."""
    a = np.asarray(a, dtype=float)
    d = np.asarray(direction, dtype=float)
    if h is None:
        h = COMPONENT_STEP * max(1.0, np.linalg.norm(a)) / max(np.linalg.norm(d), 1e-300)
    return (np.asarray(fn(a + h * d)) - np.asarray(fn(a - h * d))) / (2.0 * h)
