"""3D curvilinear charts, Christoffel symbols, deformation measures.

Charts carry exact first and second parametric derivative callbacks; finite
differences appear only in the verification oracles. Time derivatives (F-dot
and friends) are inputs supplied by analytic paths, the library performs no
time stepping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NegativeJacobian, NotSPD, SingularMetric
from .linalg import jacobi_eigh, powm_spd
from .tensor_core import (
    CURRENT,
    INTERMEDIATE,
    REFERENCE,
    BasisTriad,
    Tensor2,
    TwoPointMap,
    axial_vector,
    build_basis,
)

DEFAULT_DOMAIN = np.array([[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]])


@dataclass(frozen=True)
class VolumeChart:
    """Parametric map (xi^1, xi^2, xi^3) -> ambient position.

    ``tangents(xi)`` returns the 3x3 matrix with column i = d x / d xi^i,
    ``second(xi)`` the (3, 3, 3) array with [:, i, j] = d^2 x / d xi^i d xi^j.
    """

    position: Callable[[np.ndarray], np.ndarray]
    tangents: Callable[[np.ndarray], np.ndarray]
    second: Callable[[np.ndarray], np.ndarray]
    domain: np.ndarray = DEFAULT_DOMAIN

    def basis(self, xi, configuration=REFERENCE) -> BasisTriad:
        return build_basis(self.tangents(np.asarray(xi, dtype=float)), configuration)


def affine_volume_chart(matrix=None, offset=None, domain=DEFAULT_DOMAIN) -> VolumeChart:
    a = np.eye(3) if matrix is None else np.asarray(matrix, dtype=float)
    c = np.zeros(3) if offset is None else np.asarray(offset, dtype=float)
    return VolumeChart(
        position=lambda xi: a @ np.asarray(xi, dtype=float) + c,
        tangents=lambda xi: a.copy(),
        second=lambda xi: np.zeros((3, 3, 3)),
        domain=np.asarray(domain, dtype=float),
    )


def cylindrical_chart(domain=((1.0, 2.0), (0.0, 1.2), (-0.5, 0.5))) -> VolumeChart:
    """(r, theta, z) -> (r cos theta, r sin theta, z)."""

    def pos(xi):
        r, th, z = xi
        return np.array([r * np.cos(th), r * np.sin(th), z])

    def tan(xi):
        r, th, _ = xi
        return np.array([
            [np.cos(th), -r * np.sin(th), 0.0],
            [np.sin(th), r * np.cos(th), 0.0],
            [0.0, 0.0, 1.0],
        ])

    def sec(xi):
        r, th, _ = xi
        s = np.zeros((3, 3, 3))
        s[:, 0, 1] = s[:, 1, 0] = [-np.sin(th), np.cos(th), 0.0]
        s[:, 1, 1] = [-r * np.cos(th), -r * np.sin(th), 0.0]
        return s

    return VolumeChart(pos, tan, sec, np.asarray(domain, dtype=float))


# --- polynomial charts (exact derivatives from monomial calculus) ----------

def _poly_value(coeffs, expo, xi, axes=()):
    e = expo.astype(float).copy()
    fac = np.ones(e.shape[0])
    for ax in axes:
        fac *= e[:, ax]
        e[:, ax] -= 1.0
    e = np.maximum(e, 0.0)
    mono = fac * np.prod(np.asarray(xi, dtype=float) ** e, axis=1)
    return coeffs @ mono


def polynomial_volume_chart(coeffs, exponents, domain=DEFAULT_DOMAIN) -> VolumeChart:
    """Chart with components x_i = sum_t coeffs[i, t] * prod_k xi_k^exponents[t, k]."""
    coeffs = np.asarray(coeffs, dtype=float)
    expo = np.asarray(exponents, dtype=int)

    def pos(xi):
        return _poly_value(coeffs, expo, xi)

    def tan(xi):
        return np.column_stack([_poly_value(coeffs, expo, xi, (i,)) for i in range(3)])

    def sec(xi):
        s = np.empty((3, 3, 3))
        for i in range(3):
            for j in range(i, 3):
                s[:, i, j] = s[:, j, i] = _poly_value(coeffs, expo, xi, (i, j))
        return s

    return VolumeChart(pos, tan, sec, np.asarray(domain, dtype=float))


def _cubic_exponents():
    out = []
    for p in range(4):
        for q in range(4 - p):
            for r in range(4 - p - q):
                out.append((p, q, r))
    return np.array(out, dtype=int)


_CUBIC_EXPO = _cubic_exponents()


def random_volume_chart(rng, amplitude=0.05, domain=DEFAULT_DOMAIN) -> VolumeChart:
    """Well-conditioned random chart: affine core + small cubic perturbation."""
    core = random_invertible_matrix(rng)
    coeffs = amplitude * rng.uniform(-1.0, 1.0, size=(3, len(_CUBIC_EXPO)))
    total = np.abs(_CUBIC_EXPO).sum(axis=1)
    coeffs[:, total < 2] = 0.0  # keep the affine part exactly `core`
    lin = np.flatnonzero(total == 1)
    for t in lin:
        axis = int(np.argmax(_CUBIC_EXPO[t]))
        coeffs[:, t] = core[:, axis]
    return polynomial_volume_chart(coeffs, _CUBIC_EXPO, domain)


def combine_volume_charts(base: VolumeChart, bump: VolumeChart, factor: float) -> VolumeChart:
    """Chart with position base + factor * bump (shared parametric domain)."""
    return VolumeChart(
        position=lambda xi: base.position(xi) + factor * bump.position(xi),
        tangents=lambda xi: base.tangents(xi) + factor * bump.tangents(xi),
        second=lambda xi: base.second(xi) + factor * bump.second(xi),
        domain=base.domain,
    )


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0.0:
        q[:, 2] = -q[:, 2]
    return q


def random_invertible_matrix(rng, stretch=(0.75, 1.4)) -> np.ndarray:
    return random_rotation(rng) @ np.diag(rng.uniform(*stretch, size=3)) @ random_rotation(rng)


def random_spd(rng, dim=3, stretch=(0.75, 1.4)) -> np.ndarray:
    q = random_rotation(rng)[:dim, :dim] if dim == 3 else _random_rotation2(rng)
    return q @ np.diag(rng.uniform(*stretch, size=dim)) @ q.T


def _random_rotation2(rng):
    th = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])


# ---------------------------------------------------------------------------
# Christoffel symbols and covariant derivatives

@dataclass(frozen=True)
class ChristoffelField:
    """Second-kind symbols gamma[k, i, j] = g_{i,j} . g^k at one point."""

    gamma: np.ndarray
    configuration: str = REFERENCE


def christoffel(chart: VolumeChart, xi, configuration=REFERENCE) -> ChristoffelField:
    basis = chart.basis(xi, configuration)
    sec = chart.second(np.asarray(xi, dtype=float))
    gamma = np.einsum("mij,mk->kij", sec, basis.duals)
    return ChristoffelField(gamma, configuration)


def covariant_derivative_vector(comp, partial, chris: ChristoffelField, variance="u"):
    """v^i_{||j} (variance 'u') or v_i||j ('d') from components and partials.

    ``partial[i, j]`` holds d comp[i] / d xi^j; the caller chooses whether the
    partials are exact or finite-differenced.
    """
    g = chris.gamma
    comp = np.asarray(comp, dtype=float)
    partial = np.asarray(partial, dtype=float)
    if variance == "u":
        return partial + np.einsum("ikj,k->ij", g, comp)
    if variance == "d":
        return partial - np.einsum("kij,k->ij", g, comp)
    raise ValueError(f"variance must be 'u' or 'd', got {variance!r}")


def covariant_derivative_tensor(comp, partial, chris: ChristoffelField, variance="uu"):
    """T^{ij}_{||k} style covariant derivative; partial[i, j, k] = d comp / d xi^k."""
    g = chris.gamma
    comp = np.asarray(comp, dtype=float)
    out = np.asarray(partial, dtype=float).copy()
    if variance[0] == "u":
        out += np.einsum("ilk,lj->ijk", g, comp)
    else:
        out -= np.einsum("lik,lj->ijk", g, comp)
    if variance[1] == "u":
        out += np.einsum("jlk,il->ijk", g, comp)
    else:
        out -= np.einsum("ljk,il->ijk", g, comp)
    return out


# ---------------------------------------------------------------------------
# deformation gradient and the thermo-elastic split

@dataclass(frozen=True)
class VelocityGradients:
    l: np.ndarray
    d: np.ndarray
    w: np.ndarray
    wbar: np.ndarray
    l_e: np.ndarray
    l_T: np.ndarray


@dataclass(frozen=True)
class VolumeState:
    """F and its thermo-elastic split with derived deformation measures."""

    F: TwoPointMap
    F_T: TwoPointMap
    F_e: TwoPointMap
    C: Tensor2
    C_T: Tensor2
    C_e: Tensor2
    J: float
    J_T: float
    rates: Optional[VelocityGradients] = None


def deformation_gradient(ref: VolumeChart, cur: VolumeChart, xi) -> TwoPointMap:
    """F = g_i otimes G^i mapping reference tangents onto current ones."""
    ref_basis = ref.basis(xi, REFERENCE)
    cur_tan = cur.tangents(np.asarray(xi, dtype=float))
    if abs(np.linalg.det(cur_tan)) < 1e-300:
        raise SingularMetric("current tangent triad is singular")
    f = cur_tan @ ref_basis.duals.T
    if np.linalg.det(f) <= 0.0:
        raise NegativeJacobian(f"det F = {np.linalg.det(f):g} <= 0")
    return TwoPointMap(f, REFERENCE, CURRENT)


def thermo_split(f: TwoPointMap, f_t: TwoPointMap) -> VolumeState:
    """Multiplicative split F = F_e F_T and the full C family."""
    if f_t.det <= 0.0:
        raise NegativeJacobian(f"det F_T = {f_t.det:g} <= 0")
    if f.det <= 0.0:
        raise NegativeJacobian(f"det F = {f.det:g} <= 0")
    fe = TwoPointMap(f.mat @ f_t.inv, INTERMEDIATE, CURRENT)
    c = Tensor2(f.mat.T @ f.mat, "dd", REFERENCE)
    c_t = Tensor2(f_t.mat.T @ f_t.mat, "dd", REFERENCE)
    c_e = Tensor2(fe.mat.T @ fe.mat, "dd", INTERMEDIATE)
    return VolumeState(f, f_t, fe, c, c_t, c_e, f.det, f_t.det)


def velocity_gradient(f: TwoPointMap, f_dot, f_t: TwoPointMap, f_t_dot) -> VelocityGradients:
    """Spatial velocity gradient l = F-dot F^-1 and its thermo-elastic parts."""
    if f.det <= 0.0 or f_t.det <= 0.0:
        raise NegativeJacobian("velocity gradient needs positive-determinant maps")
    f_dot = np.asarray(f_dot, dtype=float)
    f_t_dot = np.asarray(f_t_dot, dtype=float)
    l = f_dot @ f.inv
    d = 0.5 * (l + l.T)
    w = 0.5 * (l - l.T)
    wbar = axial_vector(w)
    fe = f.mat @ f_t.inv
    fe_dot = (f_dot - fe @ f_t_dot) @ f_t.inv
    l_e = fe_dot @ np.linalg.inv(fe)
    l_t = f_t_dot @ f_t.inv
    return VelocityGradients(l, d, w, wbar, l_e, l_t)


def nanson(f: TwoPointMap, direction, area: float) -> np.ndarray:
    """Oriented-area transport: nu ds = J F^-T (N dS)."""
    if f.det <= 0.0:
        raise NegativeJacobian(f"det F = {f.det:g} <= 0")
    return f.det * f.inv.T @ np.asarray(direction, dtype=float) * float(area)


# ---------------------------------------------------------------------------
# generalized strain family

LOG_BRANCH_THRESHOLD = 1.0e-8


@dataclass(frozen=True)
class SethHillStrain:
    order: float
    tensor: Tensor2
    frame: str  # "lagrangian" | "eulerian"


def seth_hill(f: TwoPointMap, order: float, frame="lagrangian") -> SethHillStrain:
    """(U^n - 1)/n from the stretch spectrum; n inside the log threshold gives ln U."""
    fm = f.mat
    if frame == "lagrangian":
        c = fm.T @ fm
        cfg = REFERENCE
    elif frame == "eulerian":
        c = fm @ fm.T
        cfg = CURRENT
    else:
        raise ValueError(f"frame must be 'lagrangian' or 'eulerian', got {frame!r}")
    w, v = jacobi_eigh(c)
    if np.any(w <= 0.0):
        raise NotSPD("stretch tensor is not SPD")
    lam = np.sqrt(w)
    if abs(order) < LOG_BRANCH_THRESHOLD:
        diag = np.log(lam)
    else:
        diag = (lam ** order - 1.0) / order
    mat = v @ np.diag(diag) @ v.T
    return SethHillStrain(float(order), Tensor2(mat, "dd", cfg), frame)


@dataclass(frozen=True)
class HenckyAdditivityEntry:
    order: float
    additive_defect: float
    composition_defect: float


@dataclass(frozen=True)
class HenckyAdditivityReport:
    entries: tuple


def _strain_of(fmat, order):
    return seth_hill(TwoPointMap(fmat, REFERENCE, CURRENT), order).tensor.mat


def hencky_additivity_check(f1, f2, orders: Sequence[float] = (0.0, 2.0)) -> HenckyAdditivityReport:
    """Composition F = F2 F1: additive defect per order plus the exact
    composition rule E = (F1^T)^{n/2} E2 (F1)^{n/2} + E1 for n != 0."""
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    total = f2 @ f1
    entries = []
    for n in orders:
        e_tot = _strain_of(total, n)
        e1 = _strain_of(f1, n)
        e2 = _strain_of(f2, n)
        additive = float(np.linalg.norm(e_tot - e1 - e2))
        if abs(n) < LOG_BRANCH_THRESHOLD:
            composition = additive
        else:
            half = 0.5 * n
            if np.allclose(f1, f1.T, atol=1e-12 * max(1.0, np.abs(f1).max())):
                p_left = powm_spd(f1.T, half)
                p_right = powm_spd(f1, half)
            elif float(half).is_integer() and half > 0:
                p_left = np.linalg.matrix_power(f1.T, int(half))
                p_right = np.linalg.matrix_power(f1, int(half))
            else:
                raise NotSPD("fractional power of a non-symmetric F1 is undefined here")
            composition = float(np.linalg.norm(e_tot - (p_left @ e2 @ p_right + e1)))
        entries.append(HenckyAdditivityEntry(float(n), additive, composition))
    return HenckyAdditivityReport(tuple(entries))
