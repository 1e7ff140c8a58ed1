"""Surface deformation gradients, their thermo-elastic split, curvature
change relative to the intermediate configuration, and material rates of
surface objects.

In-plane maps and surface tensors are ambient 3x3 matrices annihilating the
relevant normal; rank-completion with the normals supplies inverses and
surface determinants.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import DegenerateTangents, MalformedThermalMap, NegativeJacobian
from .surface_geometry import SurfacePointFrame
from .tensor_core import embedded_surface_det, inplane_inverse

NORMAL_MIX_TOL = 1.0e-10


@dataclass(frozen=True)
class SurfaceDeformationState:
    """Mid-surface deformation data; split fields are None until
    ``thermo_split_surface`` completes the state."""

    ref: SurfacePointFrame
    cur: SurfacePointFrame
    F_s: np.ndarray            # in-plane a_alpha otimes A^alpha
    F_hat: np.ndarray          # F_s + lam3 n otimes N
    C_s: np.ndarray            # F_s^T F_s
    C_hat: np.ndarray
    J_s: float
    lam3: float
    b_pull_cov: np.ndarray     # covariant components of F_s^T b F_s (= b_ab)
    # populated by the split:
    F_hat_T: Optional[np.ndarray] = None
    F_hat_e: Optional[np.ndarray] = None
    F_sT: Optional[np.ndarray] = None
    F_se: Optional[np.ndarray] = None
    C_hat_T: Optional[np.ndarray] = None
    C_hat_e: Optional[np.ndarray] = None
    C_sT: Optional[np.ndarray] = None
    C_se: Optional[np.ndarray] = None
    lam_T3: Optional[float] = None
    lam_e3: Optional[float] = None
    n_T: Optional[np.ndarray] = None
    J_sT: Optional[float] = None
    J_se: Optional[float] = None
    b_T_pull_cov: Optional[np.ndarray] = None
    kappa_cov: Optional[np.ndarray] = None


def surface_deformation(ref: SurfacePointFrame, cur: SurfacePointFrame,
                        lam3: float = 1.0) -> SurfaceDeformationState:
    """Total surface deformation between two frames at the same (xi^1, xi^2)."""
    if lam3 <= 0.0:
        raise ValueError("lam3 must be positive")
    f_s = cur.a_cov @ ref.a_dual.T
    f_hat = f_s + lam3 * np.outer(cur.normal, ref.normal)
    j_s = embedded_surface_det(f_s, ref.normal, cur.normal)
    if j_s <= 0.0:
        raise NegativeJacobian(f"surface area change J_s = {j_s:g} <= 0")
    c_s = f_s.T @ f_s
    c_hat = f_hat.T @ f_hat
    b_pull = f_s.T @ cur.curvature_ambient @ f_s
    return SurfaceDeformationState(
        ref=ref, cur=cur, F_s=f_s, F_hat=f_hat, C_s=c_s, C_hat=c_hat,
        J_s=float(j_s), lam3=float(lam3),
        b_pull_cov=ref.a_cov.T @ b_pull @ ref.a_cov,
    )


def decompose_surface_thermal_map(f_hat_t, ref: SurfacePointFrame):
    """Split a candidate F^_T into (F_sT, lam_T3, n_T).

    Raises MalformedThermalMap when F^_T N keeps an in-plane component with
    respect to the intermediate tangent plane.
    """
    f_hat_t = np.asarray(f_hat_t, dtype=float)
    a_t = f_hat_t @ ref.a_cov  # intermediate tangents, columns
    raw = np.cross(a_t[:, 0], a_t[:, 1])
    nrm = np.linalg.norm(raw)
    if nrm < 1e-12:
        raise DegenerateTangents("thermal map collapses the tangent plane")
    n_t = raw / nrm
    image_n = f_hat_t @ ref.normal
    lam_t3 = float(n_t @ image_n)
    inplane = image_n - lam_t3 * n_t
    if np.linalg.norm(inplane) > NORMAL_MIX_TOL * max(np.linalg.norm(image_n), 1e-300):
        raise MalformedThermalMap(
            "F^_T N has an in-plane part; expected F_sT + lam_T3 nT otimes N")
    if lam_t3 <= 0.0:
        raise NegativeJacobian(f"lam_T3 = {lam_t3:g} <= 0")
    f_st = f_hat_t - lam_t3 * np.outer(n_t, ref.normal)
    return f_st, lam_t3, n_t


def thermo_split_surface(state: SurfaceDeformationState, f_hat_t,
                         b_t_pull_cov=None) -> SurfaceDeformationState:
    """Complete the state with the multiplicative split F^ = F^_e F^_T.

    ``b_t_pull_cov`` (covariant components of the pulled-back intermediate
    curvature, reference co-basis) fills the curvature change when known.
    """
    ref = state.ref
    f_st, lam_t3, n_t = decompose_surface_thermal_map(f_hat_t, ref)
    f_hat_t = np.asarray(f_hat_t, dtype=float)
    f_hat_e = state.F_hat @ np.linalg.inv(f_hat_t)
    lam_e3 = state.lam3 / lam_t3
    f_se = f_hat_e - lam_e3 * np.outer(state.cur.normal, n_t)
    c_hat_t = f_hat_t.T @ f_hat_t
    c_hat_e = f_hat_e.T @ f_hat_e
    c_st = c_hat_t - lam_t3 ** 2 * np.outer(ref.normal, ref.normal)
    c_se = c_hat_e - lam_e3 ** 2 * np.outer(n_t, n_t)
    j_st = embedded_surface_det(f_st, ref.normal, n_t)
    j_se = embedded_surface_det(f_se, n_t, state.cur.normal)
    if j_st <= 0.0 or j_se <= 0.0:
        raise NegativeJacobian("split produced a non-positive surface determinant")
    kappa = None
    b_t = None
    if b_t_pull_cov is not None:
        b_t = np.asarray(b_t_pull_cov, dtype=float)
        kappa = state.b_pull_cov - b_t
    return replace(
        state, F_hat_T=f_hat_t, F_hat_e=f_hat_e, F_sT=f_st, F_se=f_se,
        C_hat_T=c_hat_t, C_hat_e=c_hat_e, C_sT=c_st, C_se=c_se,
        lam_T3=float(lam_t3), lam_e3=float(lam_e3), n_T=n_t,
        J_sT=float(j_st), J_se=float(j_se),
        b_T_pull_cov=b_t, kappa_cov=kappa,
    )


def curvature_change(cur: SurfacePointFrame, intermediate: SurfacePointFrame,
                     f_s=None, f_st=None) -> np.ndarray:
    """kappa_ab = b_ab - bT_ab in the shared reference co-basis.

    Covariant components are preserved by pull-back, so for compatibly
    parametrized frames the difference of the frames' covariant curvature
    matrices is exactly the pulled-back curvature change. When the in-plane
    maps are supplied the pull-backs are performed explicitly instead.
    """
    if f_s is not None and f_st is not None:
        b_pull = np.asarray(f_s).T @ cur.curvature_ambient @ np.asarray(f_s)
        bt_pull = np.asarray(f_st).T @ intermediate.curvature_ambient @ np.asarray(f_st)
        return b_pull - bt_pull  # ambient; extract with a reference frame
    return cur.b_cov - intermediate.b_cov


def intermediate_curvature_from_map(ref: SurfacePointFrame, f_st_value,
                                    f_st_partial) -> np.ndarray:
    """bT_ab from the thermal-map derivative route.

    ``f_st_value`` is the in-plane thermal map at the point (3x3 ambient) and
    ``f_st_partial`` its parametric derivative, shape (3, 3, 2). Uses
    aT_a,b = F_sT,b A_a + F_sT A_a,b and contracts with the intermediate
    normal.
    """
    f_st = np.asarray(f_st_value, dtype=float)
    df = np.asarray(f_st_partial, dtype=float)
    a_t = f_st @ ref.a_cov
    raw = np.cross(a_t[:, 0], a_t[:, 1])
    nrm = np.linalg.norm(raw)
    if nrm < 1e-12:
        raise DegenerateTangents("thermal map collapses the tangent plane")
    n_t = raw / nrm
    b_t = np.empty((2, 2))
    for al in range(2):
        for be in range(2):
            a_t_deriv = df[:, :, be] @ ref.a_cov[:, al] + f_st @ ref.second[:, al, be]
            b_t[al, be] = n_t @ a_t_deriv
    return 0.5 * (b_t + b_t.T)


# ---------------------------------------------------------------------------
# material rates of surface objects

@dataclass(frozen=True)
class SurfaceRates:
    v_con: np.ndarray       # tangential velocity components v^alpha
    v_normal: float         # normal velocity component
    w_mix: np.ndarray       # (2, 2) [a, b] = w_a^b
    w_cov: np.ndarray       # (2, 2) w_ab
    w_normal: np.ndarray    # (2,) w_a
    a_dot_cov: np.ndarray   # (2, 2) rate of the covariant metric
    b_dot_cov: np.ndarray   # (2, 2) rate of the covariant curvature
    n_dot: np.ndarray       # (3,) rate of the unit normal
    l_s: np.ndarray         # (3, 3) mid-surface velocity gradient


def surface_rates(fr: SurfacePointFrame, velocity, velocity_partial,
                  velocity_second, lam3: float = 1.0, lam3_dot: float = 0.0) -> SurfaceRates:
    """Rates of a_ab, b_ab and n for a velocity field on the surface.

    ``velocity`` is the ambient velocity at the point, ``velocity_partial``
    its parametric derivatives (3, 2) and ``velocity_second`` the second
    parametric derivatives (3, 2, 2).
    """
    v = np.asarray(velocity, dtype=float)
    dv = np.asarray(velocity_partial, dtype=float)
    ddv = np.asarray(velocity_second, dtype=float)
    n = fr.normal
    w_cov = dv.T @ fr.a_cov              # [a, b] = a-dot_a . a_b
    w_normal = dv.T @ n
    w_mix = w_cov @ fr.metric_con
    a_dot = w_cov + w_cov.T
    n_dot = -fr.a_dual @ w_normal
    b_dot = np.empty((2, 2))
    for al in range(2):
        for be in range(2):
            cov_second = ddv[:, al, be] - dv @ fr.gamma[:, al, be]
            b_dot[al, be] = n @ cov_second
    l_s = dv @ fr.a_dual.T + np.outer(n_dot, n) + (lam3_dot / lam3) * np.outer(n, n)
    return SurfaceRates(
        v_con=fr.a_dual.T @ v, v_normal=float(n @ v),
        w_mix=w_mix, w_cov=w_cov, w_normal=w_normal,
        a_dot_cov=0.5 * (a_dot + a_dot.T), b_dot_cov=0.5 * (b_dot + b_dot.T),
        n_dot=n_dot, l_s=l_s,
    )


def velocity_gradient_decomposed(fr: SurfacePointFrame, rates: SurfaceRates,
                                 lam3: float = 1.0, lam3_dot: float = 0.0) -> np.ndarray:
    """l_s = w_ab a^b otimes a^a - n otimes n-dot + n-dot otimes n + (lam3-dot/lam3) n otimes n."""
    n = fr.normal
    term = fr.a_dual @ rates.w_cov.T @ fr.a_dual.T
    return (term - np.outer(n, rates.n_dot) + np.outer(rates.n_dot, n)
            + (lam3_dot / lam3) * np.outer(n, n))


def in_plane_inverse_map(m, domain_normal, codomain_normal) -> np.ndarray:
    """Public wrapper so callers can invert in-plane maps without tensor_core."""
    return inplane_inverse(m, domain_normal, codomain_normal)
