"""Quadrature evaluation of the volume and shell weak forms, variation
fields, linearization tables for surface objects, and strong-form balance
diagnostics.

No global solves happen here: weak forms are evaluated for prescribed fields
and variations (method of manufactured variations). Assembly reduces
quadrature contributions with a fixed pairwise tree so results are
bit-reproducible for a given point order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NotSPD, QuadratureDomainMismatch, SingularCurvature
from .fd import partial_diff
from .linalg import pairwise_sum
from .surface_geometry import SurfaceChart, SurfacePointFrame, frame as surface_frame
from .tensor_core import PERMUTATION
from .volume_kinematics import VolumeChart

DEFAULT_QUADRATURE_ORDER = 8


# ---------------------------------------------------------------------------
# Gauss-Legendre rules

@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product Gauss-Legendre points/weights over a box or rectangle."""

    points: np.ndarray   # (n, dim)
    weights: np.ndarray  # (n,)
    order: int
    domain: np.ndarray   # (dim, 2)

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def gauss_rule(domain, order: int = DEFAULT_QUADRATURE_ORDER) -> QuadratureRule:
    domain = np.asarray(domain, dtype=float)
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    axes = []
    for lo, hi in domain:
        axes.append((0.5 * (hi - lo) * base_x + 0.5 * (hi + lo), 0.5 * (hi - lo) * base_w))
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    wgrids = np.meshgrid(*[a[1] for a in axes], indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    w = np.ones(pts.shape[0])
    for wg in wgrids:
        w = w * wg.ravel()
    return QuadratureRule(pts, w, order, domain)


def _check_rule(rule: QuadratureRule, domain, dim: int):
    domain = np.asarray(domain, dtype=float)
    if rule.dim != dim or rule.domain.shape != (dim, 2) or not np.allclose(rule.domain, domain):
        raise QuadratureDomainMismatch(
            f"rule on {rule.domain.tolist()} does not match chart domain {domain.tolist()}")


def _face_rules(domain, order):
    """(axis, side, 2D rule over the other axes in cyclic order) for each box face."""
    out = []
    for axis in range(3):
        u, v = (axis + 1) % 3, (axis + 2) % 3
        sub = gauss_rule(np.asarray(domain, dtype=float)[[u, v]], order)
        for side in (0, 1):
            out.append((axis, side, u, v, sub))
    return out


def _edge_rules(domain, order):
    """(axis, side, 1D rule over the other axis) for each rectangle edge."""
    out = []
    for axis in range(2):
        other = 1 - axis
        sub = gauss_rule(np.asarray(domain, dtype=float)[[other]], order)
        for side in (0, 1):
            out.append((axis, side, other, sub))
    return out


# ---------------------------------------------------------------------------
# variation fields

@dataclass(frozen=True)
class VariationField:
    """Admissible variation (delta x, delta theta) with exact parametric
    derivatives; second derivatives are needed for shell curvature terms."""

    value: Callable
    partial: Callable
    second: Optional[Callable] = None
    dtheta: Optional[Callable] = None
    dtheta_partial: Optional[Callable] = None


def translation_variation(direction, dim=3) -> VariationField:
    d = np.asarray(direction, dtype=float)
    return VariationField(
        value=lambda xi: d.copy(),
        partial=lambda xi: np.zeros((3, dim)),
        second=lambda xi: np.zeros((3, dim, dim)),
    )


def rotation_variation(chart, omega) -> VariationField:
    """delta x = omega x position(xi): rigid rotation of the configuration."""
    w = np.asarray(omega, dtype=float)
    return VariationField(
        value=lambda xi: np.cross(w, chart.position(xi)),
        partial=lambda xi: np.cross(w, chart.tangents(xi).T).T,
        second=lambda xi: _rotated_second(w, chart, xi),
    )


def _rotated_second(w, chart, xi):
    sec = chart.second(xi)
    out = np.empty_like(sec)
    for a in range(sec.shape[1]):
        for b in range(sec.shape[2]):
            out[:, a, b] = np.cross(w, sec[:, a, b])
    return out


def chart_variation(bump_chart) -> VariationField:
    """Variation whose value/derivatives come from a chart-like bump field."""
    return VariationField(
        value=bump_chart.position,
        partial=bump_chart.tangents,
        second=bump_chart.second,
    )


def scalar_variation(value, partial) -> VariationField:
    return VariationField(value=None, partial=None, dtheta=value, dtheta_partial=partial)


# ---------------------------------------------------------------------------
# residual bookkeeping

@dataclass(frozen=True)
class ResidualBreakdown:
    g_in: float = 0.0
    g_int: float = 0.0
    g_ext: float = 0.0
    g_int_membrane: float = 0.0
    g_int_bending: float = 0.0
    thermal_storage: float = 0.0
    thermal_conduction: float = 0.0
    thermal_source: float = 0.0
    thermal_boundary: float = 0.0

    @property
    def mechanical_residual(self) -> float:
        return self.g_in + self.g_int - self.g_ext

    @property
    def thermal_residual(self) -> float:
        return self.thermal_storage - self.thermal_conduction - self.thermal_source + self.thermal_boundary


# ---------------------------------------------------------------------------
# 3D weak forms

def assemble_volume_mechanical(cur_chart: VolumeChart, rule: QuadratureRule,
                               variation: VariationField, sigma_at,
                               rho_at=None, accel_at=None, body_force_at=None,
                               traction_from_sigma: bool = False,
                               boundary_order: Optional[int] = None) -> ResidualBreakdown:
    """Virtual-work terms of the momentum balance over the current chart.

    g_int = int grad(delta x) : sigma dv, g_in the inertial term, g_ext the
    body-force term plus (optionally) the boundary term with traction
    t = sigma^T nu manufactured from the stress field itself.
    """
    _check_rule(rule, cur_chart.domain, 3)
    interior, inertia, body = [], [], []
    for xi, w in zip(rule.points, rule.weights):
        tan = cur_chart.tangents(xi)
        det = np.linalg.det(tan)
        duals = np.linalg.inv(tan).T
        dv = w * det
        grad_dx = variation.partial(xi) @ duals.T
        interior.append(dv * float(np.tensordot(grad_dx, sigma_at(xi))))
        if rho_at is not None and accel_at is not None:
            inertia.append(dv * float(rho_at(xi) * (variation.value(xi) @ accel_at(xi))))
        if rho_at is not None and body_force_at is not None:
            body.append(dv * float(rho_at(xi) * (variation.value(xi) @ body_force_at(xi))))
    g_ext = pairwise_sum(body)
    if traction_from_sigma:
        g_ext += _volume_boundary_traction(cur_chart, variation, sigma_at,
                                           boundary_order or rule.order)
    return ResidualBreakdown(
        g_in=pairwise_sum(inertia), g_int=pairwise_sum(interior), g_ext=g_ext)


def _volume_boundary_traction(cur_chart, variation, sigma_at, order) -> float:
    vals = []
    for axis, side, u, v, sub in _face_rules(cur_chart.domain, order):
        fixed = cur_chart.domain[axis][side]
        sign = 1.0 if side == 1 else -1.0
        for p, w in zip(sub.points, sub.weights):
            xi = np.empty(3)
            xi[axis] = fixed
            xi[u], xi[v] = p
            tan = cur_chart.tangents(xi)
            # faces iterate the other axes in cyclic order, so this cross
            # product points along +xi^axis for right-handed charts
            area_vec = sign * np.cross(tan[:, u], tan[:, v])
            vals.append(w * float(variation.value(xi) @ (sigma_at(xi).T @ area_vec)))
    return pairwise_sum(vals)


def assemble_volume_thermal(cur_chart: VolumeChart, rule: QuadratureRule,
                            variation: VariationField, q_at,
                            storage_at=None, source_at=None,
                            boundary_from_q: bool = True,
                            boundary_order: Optional[int] = None) -> ResidualBreakdown:
    """Thermal weak-form terms: int dtheta rho T s-dot dv, int grad(dtheta) . q dv,
    int dtheta rho r dv and the boundary flux integral."""
    _check_rule(rule, cur_chart.domain, 3)
    storage, conduction, source = [], [], []
    for xi, w in zip(rule.points, rule.weights):
        tan = cur_chart.tangents(xi)
        dv = w * np.linalg.det(tan)
        duals = np.linalg.inv(tan).T
        grad_dth = duals @ variation.dtheta_partial(xi)
        conduction.append(dv * float(grad_dth @ q_at(xi)))
        if storage_at is not None:
            storage.append(dv * float(variation.dtheta(xi) * storage_at(xi)))
        if source_at is not None:
            source.append(dv * float(variation.dtheta(xi) * source_at(xi)))
    boundary = 0.0
    if boundary_from_q:
        vals = []
        for axis, side, u, v, sub in _face_rules(cur_chart.domain, boundary_order or rule.order):
            fixed = cur_chart.domain[axis][side]
            sign = 1.0 if side == 1 else -1.0
            for p, w in zip(sub.points, sub.weights):
                xi = np.empty(3)
                xi[axis] = fixed
                xi[u], xi[v] = p
                tan = cur_chart.tangents(xi)
                area_vec = sign * np.cross(tan[:, u], tan[:, v])
                vals.append(w * float(variation.dtheta(xi) * (q_at(xi) @ area_vec)))
        boundary = pairwise_sum(vals)
    return ResidualBreakdown(
        thermal_storage=pairwise_sum(storage),
        thermal_conduction=pairwise_sum(conduction),
        thermal_source=pairwise_sum(source),
        thermal_boundary=boundary,
    )


# ---------------------------------------------------------------------------
# shell variations and weak forms

def shell_variations(fr: SurfacePointFrame, variation: VariationField, u):
    """(delta C, delta b-pull, delta n) covariant components at one point.

    delta C_ab = delta a_a . a_b + a_a . delta a_b and
    delta b_ab = delta n . x_,ab + n . delta x_,ab, with
    delta n = -a^a (n . delta a_a).
    """
    dpar = variation.partial(u)
    dsec = variation.second(u)
    da_dot_a = dpar.T @ fr.a_cov
    delta_c = da_dot_a + da_dot_a.T
    delta_n = -fr.a_dual @ (dpar.T @ fr.normal)
    delta_b = np.empty((2, 2))
    for al in range(2):
        for be in range(2):
            delta_b[al, be] = delta_n @ fr.second[:, al, be] + fr.normal @ dsec[:, al, be]
    delta_b = 0.5 * (delta_b + delta_b.T)
    return delta_c, delta_b, delta_n


@dataclass(frozen=True)
class ShellLoads:
    body_force_at: Optional[Callable] = None   # per unit mass, ambient
    accel_at: Optional[Callable] = None
    traction_at: Optional[Callable] = None     # per unit reference boundary length
    include_moment_term: bool = False


def assemble_shell_mechanical(ref_chart: SurfaceChart, cur_chart: SurfaceChart,
                              rule: QuadratureRule, variation: VariationField,
                              response_at, rho0s: float = 1.0,
                              loads: Optional[ShellLoads] = None,
                              boundary_order: Optional[int] = None) -> ResidualBreakdown:
    """Shell virtual work with the split internal term.

    ``response_at(u)`` returns (sigma_con, M_con) 2x2 component matrices in
    the reference basis. Internal work integrates over the reference area;
    with the reference-density stress definitions this matches the energy
    variation exactly. g_ext collects body force, boundary traction and the
    boundary moment term int delta n . mu^T nu dl (current geometry).
    """
    _check_rule(rule, ref_chart.domain, 2)
    loads = loads or ShellLoads()
    membrane, bending, inertia, body = [], [], [], []
    for u, w in zip(rule.points, rule.weights):
        rfr = surface_frame(ref_chart, u)
        cfr = surface_frame(cur_chart, u, "current")
        sigma_con, m_con = response_at(u)
        delta_c, delta_b, _ = shell_variations(cfr, variation, u)
        da = w * rfr.area_element()
        membrane.append(da * 0.5 * float(np.tensordot(sigma_con, delta_c)))
        bending.append(da * float(np.tensordot(m_con, delta_b)))
        if loads.accel_at is not None:
            inertia.append(da * rho0s * float(variation.value(u) @ loads.accel_at(u)))
        if loads.body_force_at is not None:
            body.append(da * rho0s * float(variation.value(u) @ loads.body_force_at(u)))
    g_ext = pairwise_sum(body)
    if loads.traction_at is not None or loads.include_moment_term:
        g_ext += _shell_boundary_terms(ref_chart, cur_chart, variation, response_at,
                                       loads, boundary_order or rule.order)
    g_membrane = pairwise_sum(membrane)
    g_bending = pairwise_sum(bending)
    return ResidualBreakdown(
        g_in=pairwise_sum(inertia), g_int=g_membrane + g_bending, g_ext=g_ext,
        g_int_membrane=g_membrane, g_int_bending=g_bending)


def _shell_boundary_terms(ref_chart, cur_chart, variation, response_at, loads, order) -> float:
    vals = []
    for axis, side, other, sub in _edge_rules(ref_chart.domain, order):
        fixed = ref_chart.domain[axis][side]
        sign = 1.0 if side == 1 else -1.0
        for p, w in zip(sub.points, sub.weights):
            u = np.empty(2)
            u[axis] = fixed
            u[other] = p[0]
            if loads.traction_at is not None:
                rfr = surface_frame(ref_chart, u)
                dl0 = np.linalg.norm(rfr.a_cov[:, other])
                vals.append(w * dl0 * float(variation.value(u) @ loads.traction_at(u)))
            if loads.include_moment_term:
                cfr = surface_frame(cur_chart, u, "current")
                _, _, delta_n = shell_variations(cfr, variation, u)
                _, m_con = response_at(u)
                mu_amb = -(cfr.a_cov @ m_con @ cfr.a_cov.T)
                nu = sign * cfr.a_dual[:, axis]
                nu = nu / np.linalg.norm(nu)
                dl = np.linalg.norm(cfr.a_cov[:, other])
                vals.append(w * dl * float(delta_n @ mu_amb.T @ nu))
    return pairwise_sum(vals)


def assemble_shell_thermal(cur_chart: SurfaceChart, rule: QuadratureRule,
                           variation: VariationField, q_at,
                           storage_at=None, source_at=None,
                           boundary_from_q: bool = True,
                           boundary_order: Optional[int] = None) -> ResidualBreakdown:
    """In-plane reduced thermal weak form over the current surface."""
    _check_rule(rule, cur_chart.domain, 2)
    storage, conduction, source = [], [], []
    for u, w in zip(rule.points, rule.weights):
        fr = surface_frame(cur_chart, u, "current")
        da = w * fr.area_element()
        grad_dth = fr.a_dual @ variation.dtheta_partial(u)
        conduction.append(da * float(grad_dth @ q_at(u)))
        if storage_at is not None:
            storage.append(da * float(variation.dtheta(u) * storage_at(u)))
        if source_at is not None:
            source.append(da * float(variation.dtheta(u) * source_at(u)))
    boundary = 0.0
    if boundary_from_q:
        vals = []
        for axis, side, other, sub in _edge_rules(cur_chart.domain, boundary_order or rule.order):
            fixed = cur_chart.domain[axis][side]
            sign = 1.0 if side == 1 else -1.0
            for p, w in zip(sub.points, sub.weights):
                u = np.empty(2)
                u[axis] = fixed
                u[other] = p[0]
                fr = surface_frame(cur_chart, u, "current")
                nu = sign * fr.a_dual[:, axis]
                nu = nu / np.linalg.norm(nu)
                dl = np.linalg.norm(fr.a_cov[:, other])
                vals.append(w * dl * float(variation.dtheta(u) * (q_at(u) @ nu)))
        boundary = pairwise_sum(vals)
    return ResidualBreakdown(
        thermal_storage=pairwise_sum(storage),
        thermal_conduction=pairwise_sum(conduction),
        thermal_source=pairwise_sum(source),
        thermal_boundary=boundary,
    )


# ---------------------------------------------------------------------------
# linearization table for surface objects

@dataclass(frozen=True)
class LinearizationTable:
    """Closed-form derivatives of J, C^-1, H, kappa and b-sharp with respect
    to C and to the pulled-back covariant curvature, in an orthonormal
    reference co-basis (plain 2x2 matrix calculus).

    Fourth-order entries are stored in the interleaved arrangement
    D[i,k,l,j] = d A^{ij} / d B_{kl}; ``oplus_apply`` contracts them with a
    symmetric direction.
    """

    J: float
    H: float
    kappa: float
    b_sharp: np.ndarray
    dJ_dC: np.ndarray
    dCinv_dC: np.ndarray        # -(1/2)(Cinv otimes Cinv + Cinv boxtimes Cinv)
    dH_dC: np.ndarray           # -(1/2) b-sharp
    dH_db: np.ndarray           # (1/2) Cinv
    dkappa_dC: np.ndarray       # -kappa Cinv
    dkappa_db: Optional[np.ndarray]  # kappa b^-1; None when b is singular
    dbsharp_dC: np.ndarray
    dbsharp_db: np.ndarray


def _boxtimes(a, b):
    return np.einsum("ik,jl->ijkl", a, b)


def _otimes(a, b):
    return np.einsum("ij,kl->ijkl", a, b)


def oplus_apply(t4, direction) -> np.ndarray:
    """Contract an oplus-arranged 4th-order tensor with a direction matrix."""
    return np.einsum("iklj,kl->ij", t4, np.asarray(direction, dtype=float))


def linearization_table(c, b, require_curvature_inverse: bool = False,
                     curvature_det_guard: float = 1.0e-10) -> LinearizationTable:
    """All linearization entries at one (C, b-pull) state.

    ``c`` must be SPD. The kappa-vs-curvature derivative needs b invertible;
    at flat spots it is None unless ``require_curvature_inverse`` asks for a
    SingularCurvature error instead.
    """
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)
    ev = np.linalg.eigvalsh(0.5 * (c + c.T))
    if ev.min() <= 0.0:
        raise NotSPD(f"C must be SPD, min eigenvalue {ev.min():g}")
    cinv = np.linalg.inv(c)
    j = float(np.sqrt(np.linalg.det(c)))
    h = 0.5 * float(np.tensordot(b, cinv))
    kappa = float(np.linalg.det(b) / np.linalg.det(c))
    b_sharp = cinv @ b @ cinv
    det_b = np.linalg.det(b)
    row = np.linalg.norm(b, axis=1).max()
    b_invertible = row > 0.0 and abs(det_b) >= curvature_det_guard * row ** 2
    if require_curvature_inverse and not b_invertible:
        raise SingularCurvature(f"|det b| = {abs(det_b):g} below guard; flat spot")
    dkappa_db = kappa * np.linalg.inv(b) if b_invertible else None
    # interleaved arrangement: entry [i, k, l, j] holds d A^{ij} / d B_{kl}
    sym_pair = _otimes(cinv, cinv) + _boxtimes(cinv, cinv)
    return LinearizationTable(
        J=j, H=h, kappa=kappa, b_sharp=b_sharp,
        dJ_dC=0.5 * j * cinv,
        dCinv_dC=-0.5 * sym_pair,
        dH_dC=-0.5 * b_sharp,
        dH_db=0.5 * cinv,
        dkappa_dC=-kappa * cinv,
        dkappa_db=dkappa_db,
        dbsharp_dC=-0.5 * (_otimes(cinv, b_sharp) + _boxtimes(cinv, b_sharp)
                           + _otimes(b_sharp, cinv) + _boxtimes(b_sharp, cinv)),
        dbsharp_db=0.5 * sym_pair,
    )


# ---------------------------------------------------------------------------
# strong-form balance diagnostics

@dataclass(frozen=True)
class BalanceReport:
    mass_residual: float = 0.0
    momentum_residual: float = 0.0
    angular_residual: float = 0.0
    resultant_symmetry_residual: float = 0.0
    shear_residual: float = 0.0


def _divergence_second_index(field_at, x, h):
    """(div V)_i = d V_ij / d x_j by central differences over ambient x."""
    out = np.zeros(3)
    for jj in range(3):
        out += partial_diff(field_at, x, jj, h=h)[:, jj]
    return out


def balance_diagnostics(points, sigma_at, rho_at=None, rho0_at=None, J_at=None,
                        body_force_at=None, accel_at=None,
                        moment_at=None, couple_at=None, fd_step=1.0e-6) -> BalanceReport:
    """Pointwise residuals of the local balances for analytic fields of the
    ambient position x: mass rho0 - J rho, momentum div sigma^T + rho f -
    rho a, angular div mu^T + rho c + E : sigma."""
    mass = momentum = angular = 0.0
    for x in np.atleast_2d(np.asarray(points, dtype=float)):
        sig = sigma_at(x)
        if rho_at is not None and rho0_at is not None and J_at is not None:
            mass = max(mass, abs(rho0_at(x) - J_at(x) * rho_at(x)))
        if rho_at is not None:
            res = _divergence_second_index(lambda y: np.asarray(sigma_at(y)).T, x, fd_step)
            if body_force_at is not None:
                res = res + rho_at(x) * np.asarray(body_force_at(x))
            if accel_at is not None:
                res = res - rho_at(x) * np.asarray(accel_at(x))
            momentum = max(momentum, float(np.linalg.norm(res)))
        ang = np.einsum("ijk,jk->i", PERMUTATION, sig)
        if moment_at is not None:
            ang = ang + _divergence_second_index(lambda y: np.asarray(moment_at(y)).T, x, fd_step)
        if couple_at is not None and rho_at is not None:
            ang = ang + rho_at(x) * np.asarray(couple_at(x))
        angular = max(angular, float(np.linalg.norm(ang)))
    return BalanceReport(mass_residual=mass, momentum_residual=momentum,
                         angular_residual=angular)


def shell_resultant_diagnostics(cur_chart: SurfaceChart, points, m_con_at,
                                shear_con_at=None, sigma_con_at=None,
                                fd_step=1.0e-6) -> BalanceReport:
    """Residuals of S^a = -M^{ba}_{;b} and of the symmetry of sigma^{ab}."""
    shear_res = sym_res = 0.0
    for u in np.atleast_2d(np.asarray(points, dtype=float)):
        fr = surface_frame(cur_chart, u, "current")
        m = np.asarray(m_con_at(u), dtype=float)
        div_m = np.zeros(2)
        for be in range(2):
            dm = partial_diff(m_con_at, u, be, h=fd_step)
            for al in range(2):
                div_m[al] += dm[be, al]
                div_m[al] += float(fr.gamma[be, :, be] @ m[:, al])
                div_m[al] += float(fr.gamma[al, :, be] @ m[be, :])
        if shear_con_at is not None:
            shear_res = max(shear_res, float(np.linalg.norm(np.asarray(shear_con_at(u)) + div_m)))
        if sigma_con_at is not None:
            s = np.asarray(sigma_con_at(u), dtype=float)
            sym_res = max(sym_res, float(np.linalg.norm(s - s.T)))
    return BalanceReport(resultant_symmetry_residual=sym_res, shear_residual=shear_res)
