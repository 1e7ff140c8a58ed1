"""Thermal expansion maps, example Helmholtz energies, stress/entropy laws
for volume and shell, heat-flux laws, entropy production, structural tensors.

Energy bookkeeping: the closed forms below work with energy densities per
unit reference volume (W = rho0 * psi) and per unit reference area
(W_s = rho0s * psi_s); responses convert back to per-mass quantities where
the interfaces require them. SI units throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NegativeJacobian, NonpositiveTemperature, NotSPD
from .fd import central_diff
from .linalg import expm_sym, jacobi_eigh
from .surface_geometry import SurfaceChart, SurfacePointFrame, frame as surface_frame, scaled_surface_chart
from .surface_kinematics import SurfaceDeformationState
from .tensor_core import (
    INTERMEDIATE,
    REFERENCE,
    TwoPointMap,
    inplane_defect,
    inplane_inverse,
    embedded_surface_det,
    surface_identity,
)

STEFAN_BOLTZMANN = 5.670374419e-8  # W / (m^2 K^4)

TEMPERATURE_FD_REL_STEP = 1.0e-5   # for b_T-pull-back temperature derivatives


def _require_positive_temperature(t):
    if t <= 0.0:
        raise NonpositiveTemperature(f"absolute temperature must be > 0, got {t!r}")


# ---------------------------------------------------------------------------
# thermal expansion

@dataclass(frozen=True)
class ThermalExpansionModel:
    """Volumetric thermal map F_T(T) = exp(alpha (T - theta0)).

    ``alpha`` is the symmetric expansion tensor [1/K]; the exponential is
    evaluated spectrally, so F_T is SPD and F_T(theta0) = 1.
    """

    alpha: np.ndarray
    theta0: float

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=float)
        if not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max())):
            raise ValueError("expansion tensor must be symmetric")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    def deformation(self, temperature: float) -> np.ndarray:
        return expm_sym(self.alpha * (temperature - self.theta0))

    def deformation_map(self, temperature: float) -> TwoPointMap:
        return TwoPointMap(self.deformation(temperature), REFERENCE, INTERMEDIATE)

    def temperature_derivative(self, temperature: float) -> np.ndarray:
        """dF_T/dT = alpha F_T (alpha temperature-independent)."""
        return self.alpha @ self.deformation(temperature)

    def rate(self, temperature: float, temperature_rate: float) -> np.ndarray:
        """F_T-dot = T-dot alpha F_T (= T-dot F_T alpha by coaxiality)."""
        return temperature_rate * self.temperature_derivative(temperature)


def thermal_deformation(model: ThermalExpansionModel, temperature: float) -> TwoPointMap:
    return model.deformation_map(temperature)


def thermal_rate(model: ThermalExpansionModel, temperature: float,
                 temperature_rate: float) -> np.ndarray:
    return model.rate(temperature, temperature_rate)


@dataclass(frozen=True)
class SurfaceThermalExpansionModel:
    """Shell thermal map: isotropic in-plane expansion plus a scalar
    out-of-plane stretch law.

    In-plane stretch beta(T) = exp(alpha_inplane (T - theta0)) realizes the
    intermediate configuration as the uniformly scaled reference chart, so
    the intermediate curvature is available from geometry. lam_T3(T) follows
    a separate scalar exponential (the formulation fixes no out-of-plane
    thermal law, default alpha_normal = alpha_inplane).
    """

    alpha_inplane: float
    theta0: float
    alpha_normal: Optional[float] = None

    @property
    def _alpha_n(self) -> float:
        return self.alpha_inplane if self.alpha_normal is None else self.alpha_normal

    def inplane_stretch(self, temperature: float) -> float:
        return float(np.exp(self.alpha_inplane * (temperature - self.theta0)))

    def lam_T3(self, temperature: float) -> float:
        return float(np.exp(self._alpha_n * (temperature - self.theta0)))

    def map_at(self, ref: SurfacePointFrame, temperature: float) -> np.ndarray:
        """F^_T = beta I_s + lam_T3 N otimes N at a reference frame."""
        beta = self.inplane_stretch(temperature)
        return beta * surface_identity(ref.normal) + self.lam_T3(temperature) * np.outer(ref.normal, ref.normal)

    def inplane_map(self, ref: SurfacePointFrame, temperature: float) -> np.ndarray:
        return self.inplane_stretch(temperature) * surface_identity(ref.normal)

    def intermediate_chart(self, ref_chart: SurfaceChart, temperature: float) -> SurfaceChart:
        return scaled_surface_chart(ref_chart, self.inplane_stretch(temperature))

    def b_t_pull_cov(self, ref_chart: SurfaceChart, u, temperature: float) -> np.ndarray:
        """Covariant components of the pulled-back intermediate curvature.

        Pull-back preserves covariant components, so these are the scaled
        chart's curvature components at the same parametric point.
        """
        fr = surface_frame(self.intermediate_chart(ref_chart, temperature), u, INTERMEDIATE)
        return fr.b_cov

    def b_t_pull_cov_dT(self, ref_chart: SurfaceChart, u, temperature: float) -> np.ndarray:
        """Temperature derivative of the pulled-back intermediate curvature,
        by central differences with step 1e-5 * theta0 (no closed form is
        assumed for general thermal families)."""
        h = TEMPERATURE_FD_REL_STEP * self.theta0
        return central_diff(lambda t: self.b_t_pull_cov(ref_chart, u, t), temperature, h=h)


# ---------------------------------------------------------------------------
# material parameter records

@dataclass(frozen=True)
class VolumeMaterialParams:
    """Neo-Hookean style volume material with temperature-softening shear."""

    mu0: float          # shear modulus at T_ref [Pa]
    lam: float          # second Lame parameter [Pa]
    c1: float           # volumetric heat-capacity scale [J/(m^3 K)]
    c2: float           # shear softening exponent [1/K]
    T_ref: float        # softening reference temperature [K]
    T0: float           # thermal reference temperature [K]
    rho0: float         # reference density [kg/m^3]

    def __post_init__(self):
        if self.mu0 <= 0.0 or self.rho0 <= 0.0 or self.T0 <= 0.0:
            raise ValueError("need mu0 > 0, rho0 > 0, T0 > 0")

    def mu(self, temperature: float) -> float:
        return self.mu0 * float(np.exp(-self.c2 * (temperature - self.T_ref)))

    def mu_dT(self, temperature: float) -> float:
        return -self.c2 * self.mu(temperature)


@dataclass(frozen=True)
class SurfaceMaterialParams:
    """Shell material: area dilatation + deviatoric membrane + quadratic bending."""

    K: float            # area bulk modulus [N/m]
    mu_s: float         # surface shear modulus [N/m]
    c1: float           # surface heat-capacity scale [J/(m^2 K)]
    c3: float           # bending modulus [N m]
    rho0s: float        # reference areal density [kg/m^2]
    t0: float           # reference thickness [m]

    def __post_init__(self):
        if self.K <= 0.0 or self.mu_s <= 0.0 or self.rho0s <= 0.0:
            raise ValueError("need K > 0, mu_s > 0, rho0s > 0")


@dataclass(frozen=True)
class HeatLawParams:
    """Fourier conductivity plus boundary radiation/convection data."""

    k: np.ndarray                 # conductivity [W/(m K)]
    emissivity: float = 0.0       # in [0, 1]
    geometry_factor: float = 1.0
    transfer_coeff: float = 0.0   # [W/(m^2 K)]
    T_env: float = 293.15         # environment / radiation reference [K]
    sigma_sb: float = STEFAN_BOLTZMANN

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float)
        sym = 0.5 * (k + k.T)
        w, _ = jacobi_eigh(sym)
        if w.min() < -1e-12 * max(1.0, abs(w).max()):
            raise ValueError("sym(k) must be positive semidefinite")
        if not 0.0 <= self.emissivity <= 1.0:
            raise ValueError("emissivity must lie in [0, 1]")
        if abs(self.sigma_sb - STEFAN_BOLTZMANN) > 1e-18:
            raise ValueError("sigma_sb is a physical constant, 5.670374419e-8 W/(m^2 K^4)")
        k = k.copy()
        k.setflags(write=False)
        object.__setattr__(self, "k", k)


# ---------------------------------------------------------------------------
# volume energy and response

def volume_energy_density(c_e, temperature, params: VolumeMaterialParams):
    """W(C_e, T) = rho0 psi and its closed-form derivatives.

    Returns (W, dW/dC_e, dW/dT). The elastic part vanishes together with its
    C_e gradient at C_e = 1, which is what makes purely thermal deformations
    stress free.
    """
    _require_positive_temperature(temperature)
    c_e = np.asarray(c_e, dtype=float)
    det = np.linalg.det(c_e)
    if det <= 0.0:
        raise NotSPD("C_e must be SPD")
    ce_inv = np.linalg.inv(c_e)
    ln_je = 0.5 * np.log(det)
    tr = np.trace(c_e)
    mu = params.mu(temperature)
    mu_dt = params.mu_dT(temperature)
    w_el = 0.5 * mu * (tr - 3.0) - mu * ln_je + 0.5 * params.lam * ln_je ** 2
    w_th = params.c1 * ((temperature - params.T0)
                        - temperature * np.log(temperature / params.T0))
    dw_dce = 0.5 * mu * np.eye(3) + (0.5 * params.lam * ln_je - 0.5 * mu) * ce_inv
    dw_dt = (mu_dt * (0.5 * (tr - 3.0) - ln_je)
             - params.c1 * np.log(temperature / params.T0))
    return w_el + w_th, dw_dce, dw_dt


def volume_energy_from_C(c, temperature, model: ThermalExpansionModel,
                         params: VolumeMaterialParams) -> float:
    """W as a function of the total C (through C_e = F_T^-T C F_T^-1).

    This is the scalar route the finite-difference oracles differentiate.
    """
    f_t = model.deformation(temperature)
    f_t_inv = np.linalg.inv(f_t)
    c_e = f_t_inv.T @ np.asarray(c, dtype=float) @ f_t_inv
    w, _, _ = volume_energy_density(c_e, temperature, params)
    return float(w)


def thermal_coupling_from_table(c, f_t_of_temperature, temperature,
                                step=None) -> np.ndarray:
    """H for a thermal map given only as a callable/table of T.

    Central-differences the map in temperature (step 1e-5 * T by default)
    and feeds the closed-form assembly; the exponential model never needs
    this, user-supplied tables do.
    """
    h = (TEMPERATURE_FD_REL_STEP * abs(temperature)) if step is None else step
    f_t = np.asarray(f_t_of_temperature(temperature), dtype=float)
    df = central_diff(f_t_of_temperature, temperature, h=h)
    return h_tensor(c, f_t, df)


def h_tensor(c, f_t, df_t_dt) -> np.ndarray:
    """H = (F_T^-T)_,T C F_T^-1; (H + H^T) T-dot is the thermal part of C_e-dot."""
    f_t_inv = np.linalg.inv(np.asarray(f_t, dtype=float))
    d_inv_t = -(f_t_inv.T @ np.asarray(df_t_dt, dtype=float).T @ f_t_inv.T)
    return d_inv_t @ np.asarray(c, dtype=float) @ f_t_inv


@dataclass(frozen=True)
class VolumeResponse:
    psi: float                  # Helmholtz energy per mass
    internal_energy: float      # u = psi + T s, per mass
    entropy: float              # s, per mass
    S: np.ndarray               # second Piola-Kirchhoff
    P: np.ndarray               # first Piola-Kirchhoff (S F^T layout)
    sigma: np.ndarray           # Cauchy
    S_T: np.ndarray             # Mandel-type stress in the intermediate configuration
    h_tensor: np.ndarray
    C_e: np.ndarray
    J: float
    J_T: float
    q: Optional[np.ndarray] = None
    gamma_con: Optional[float] = None
    gamma_loc: Optional[float] = None


def volume_response(f, temperature, model: ThermalExpansionModel,
                    params: VolumeMaterialParams,
                    grad_temperature=None, heat: Optional[HeatLawParams] = None,
                    entropy_rate=None, heat_source=0.0, div_q=None) -> VolumeResponse:
    """Stress, entropy and energetics at one material point.

    ``f`` is the deformation gradient (TwoPointMap or matrix). Heat-flux and
    entropy-production fields are filled when gradient/conductivity data are
    supplied.
    """
    _require_positive_temperature(temperature)
    f_mat = f.mat if isinstance(f, TwoPointMap) else np.asarray(f, dtype=float)
    j = float(np.linalg.det(f_mat))
    if j <= 0.0:
        raise NegativeJacobian(f"det F = {j:g} <= 0")
    f_t = model.deformation(temperature)
    f_t_inv = np.linalg.inv(f_t)
    j_t = float(np.linalg.det(f_t))
    c = f_mat.T @ f_mat
    c_e = f_t_inv.T @ c @ f_t_inv
    w, dw_dce, dw_dt = volume_energy_density(c_e, temperature, params)
    s_pk2 = 2.0 * f_t_inv @ dw_dce @ f_t_inv.T
    h = h_tensor(c, f_t, model.temperature_derivative(temperature))
    entropy = (-dw_dt - np.tensordot(dw_dce, h + h.T)) / params.rho0
    psi = w / params.rho0
    sigma = f_mat @ s_pk2 @ f_mat.T / j
    s_mandel = f_t @ s_pk2 @ f_t.T / j_t
    q = gamma_con = None
    if grad_temperature is not None and heat is not None:
        q = fourier_flux(heat.k, grad_temperature)
        gamma_con = conductive_entropy_production(temperature, grad_temperature, q)
    gamma_loc = None
    if entropy_rate is not None:
        rho = params.rho0 / j
        gamma_loc = local_entropy_production(
            temperature, rho, entropy_rate, heat_source, 0.0 if div_q is None else div_q)
    return VolumeResponse(
        psi=float(psi), internal_energy=float(psi + temperature * entropy),
        entropy=float(entropy), S=s_pk2, P=s_pk2 @ f_mat.T, sigma=sigma,
        S_T=s_mandel, h_tensor=h, C_e=c_e, J=j, J_T=j_t,
        q=q, gamma_con=gamma_con, gamma_loc=gamma_loc,
    )


# ---------------------------------------------------------------------------
# shell energy and response

def surface_energy_density(c_se, n_t, kappa_ambient, temperature,
                           params: SurfaceMaterialParams, theta0: float):
    """W_s = rho0s psi_s per unit reference area, with derivatives.

    Membrane part: (K/4)(J_se^2 - 1 - 2 ln J_se) + (mu_s/2)(tr C_se / J_se - 2)
    with J_se = sqrt(det_s C_se); bending part: c3 kappa : kappa; thermal
    part: c1 [(T - T0) - T ln(T/T0)] with T0 the thermal model reference.

    Returns (W_s, dW/dC_se, dW/dkappa, dW/dT); tensor derivatives are
    ambient in-plane matrices.
    """
    _require_positive_temperature(temperature)
    c_se = np.asarray(c_se, dtype=float)
    n_t = np.asarray(n_t, dtype=float)
    if inplane_defect(c_se, n_t) > 1e-8 * max(1.0, float(np.linalg.norm(c_se))):
        raise NotSPD("C_se must annihilate the intermediate normal (in-plane tensor)")
    det_s = embedded_surface_det(c_se, n_t)
    if det_s <= 0.0:
        raise NotSPD("C_se must be SPD in the in-plane sense")
    j_se = float(np.sqrt(det_s))
    tr = float(np.trace(c_se))
    i_t = surface_identity(n_t)
    cse_inv = inplane_inverse(c_se, n_t, n_t)
    kap = np.asarray(kappa_ambient, dtype=float)
    w_memb = 0.25 * params.K * (j_se ** 2 - 1.0 - 2.0 * np.log(j_se)) \
        + 0.5 * params.mu_s * (tr / j_se - 2.0)
    w_bend = params.c3 * float(np.tensordot(kap, kap))
    w_th = params.c1 * ((temperature - theta0) - temperature * np.log(temperature / theta0))
    dw_dcse = (0.25 * params.K * (j_se ** 2 - 1.0) * cse_inv
               + 0.5 * params.mu_s * (i_t / j_se - 0.5 * tr / j_se * cse_inv))
    dw_dkappa = 2.0 * params.c3 * kap
    dw_dt = -params.c1 * np.log(temperature / theta0)
    return w_memb + w_bend + w_th, dw_dcse, dw_dkappa, float(dw_dt)


@dataclass(frozen=True)
class ShellResponse:
    sigma_pull: np.ndarray      # pulled-back membrane stress, ambient
    mu_pull: np.ndarray         # pulled-back moment tensor, ambient
    entropy: float              # s_s per unit mass
    psi: float                  # psi_s per unit mass
    h_tensor: np.ndarray
    sigma_con: np.ndarray       # (2, 2) sigma^{ab} in the reference basis
    M_con: np.ndarray           # (2, 2) M^{ab}
    N_con: np.ndarray           # (2, 2) N^{ab} = sigma^{ab} + b^b_g M^{ga}
    tau_con: np.ndarray         # (2, 2) J_s sigma^{ab}
    kappa_cov: np.ndarray
    shear_con: Optional[np.ndarray] = None  # S^a, needs field derivatives of M

    def sigma_kl(self, cur: SurfacePointFrame) -> np.ndarray:
        """sigma_KL = N^{ab} a_a otimes a_b (+ S^a a_a otimes n when known)."""
        out = cur.a_cov @ self.N_con @ cur.a_cov.T
        if self.shear_con is not None:
            out += np.outer(cur.a_cov @ self.shear_con, cur.normal)
        return out

    def boundary_moments(self, cur: SurfacePointFrame, nu, tau):
        """(m_nu, m_tau) for boundary directions nu (conormal) and tau (tangent)."""
        nu_cov = cur.a_cov.T @ np.asarray(nu, dtype=float)
        tau_cov = cur.a_cov.T @ np.asarray(tau, dtype=float)
        m_nu = float(nu_cov @ self.M_con @ tau_cov)
        m_tau = -float(nu_cov @ self.M_con @ nu_cov)
        return m_nu, m_tau


def shell_response(state: SurfaceDeformationState, temperature,
                   surf_model: SurfaceThermalExpansionModel,
                   params: SurfaceMaterialParams,
                   b_t_pull_cov_dT=None) -> ShellResponse:
    """Membrane stress, bending moment and entropy from a completed split state.

    ``b_t_pull_cov_dT`` carries the temperature derivative of the pulled-back
    intermediate curvature (2x2 covariant components); omit it to drop the
    curvature term from the entropy (valid for flat or
    temperature-independent intermediate states).
    """
    _require_positive_temperature(temperature)
    if state.C_se is None or state.kappa_cov is None:
        raise ValueError("state must be completed by thermo_split_surface with curvature data")
    ref = state.ref
    kappa_amb = ref.from_cov_components(state.kappa_cov)
    w_s, dw_dcse, dw_dkappa, dw_dt = surface_energy_density(
        state.C_se, state.n_T, kappa_amb, temperature, params, surf_model.theta0)
    f_st_inv = inplane_inverse(state.F_sT, ref.normal, state.n_T)
    sigma_pull = 2.0 * f_st_inv @ dw_dcse @ f_st_inv.T
    mu_pull = -dw_dkappa
    # H_s from the in-plane thermal map derivative
    beta = surf_model.inplane_stretch(temperature)
    df_st_dt = surf_model.alpha_inplane * beta * surface_identity(ref.normal)
    d_inv_t = -(f_st_inv @ df_st_dt @ f_st_inv)
    h_s = d_inv_t.T @ state.C_s @ f_st_inv
    entropy_density = -float(np.tensordot(dw_dcse, h_s + h_s.T)) - dw_dt
    if b_t_pull_cov_dT is not None:
        db_t_amb = ref.from_cov_components(np.asarray(b_t_pull_cov_dT, dtype=float))
        entropy_density += float(np.tensordot(dw_dkappa, db_t_amb))
    entropy = entropy_density / params.rho0s
    sigma_con = ref.a_dual.T @ sigma_pull @ ref.a_dual
    m_con = -(ref.a_dual.T @ mu_pull @ ref.a_dual)
    # N^{ab} = sigma^{ab} + b^b_g M^{ga}; b^b_g = b_mix[g, b] by symmetry of b
    n_con = sigma_con + np.einsum("gb,ga->ab", state.cur.b_mix, m_con)
    return ShellResponse(
        sigma_pull=sigma_pull, mu_pull=mu_pull, entropy=float(entropy),
        psi=float(w_s / params.rho0s), h_tensor=h_s,
        sigma_con=sigma_con, M_con=m_con, N_con=n_con,
        tau_con=state.J_s * sigma_con, kappa_cov=state.kappa_cov,
    )


def surface_energy_from_state(c_s_cov, b_pull_cov, temperature,
                              ref: SurfacePointFrame,
                              surf_model: SurfaceThermalExpansionModel,
                              params: SurfaceMaterialParams,
                              b_t_pull_cov) -> float:
    """W_s as a scalar function of (C_s, b-pull) covariant components.

    The finite-difference oracles perturb the covariant components directly
    and differentiate this routine.
    """
    c_s = ref.from_cov_components(np.asarray(c_s_cov, dtype=float))
    beta = surf_model.inplane_stretch(temperature)
    f_st_inv = inplane_inverse(beta * surface_identity(ref.normal), ref.normal, ref.normal)
    c_se = f_st_inv.T @ c_s @ f_st_inv
    kappa_cov = np.asarray(b_pull_cov, dtype=float) - np.asarray(b_t_pull_cov, dtype=float)
    kappa_amb = ref.from_cov_components(kappa_cov)
    w_s, _, _, _ = surface_energy_density(
        c_se, ref.normal, kappa_amb, temperature, params, surf_model.theta0)
    return float(w_s)


# ---------------------------------------------------------------------------
# heat-flux laws and entropy production

def fourier_flux(k, grad_temperature) -> np.ndarray:
    """q = -k grad T."""
    return -np.asarray(k, dtype=float) @ np.asarray(grad_temperature, dtype=float)


def radiation_flux(heat: HeatLawParams, surface_temperature: float) -> float:
    """Net outward radiation flux q_r . nu (negative = energy leaving)."""
    _require_positive_temperature(surface_temperature)
    eps_sig = heat.emissivity * heat.sigma_sb
    return float(-eps_sig * surface_temperature ** 4
                 + heat.geometry_factor * eps_sig * heat.T_env ** 4)


def convection_flux(heat: HeatLawParams, temperature: float) -> float:
    """q_h . nu = -h (T - T_env)."""
    _require_positive_temperature(temperature)
    return float(-heat.transfer_coeff * (temperature - heat.T_env))


def conductive_entropy_production(temperature, grad_temperature, q) -> float:
    """gamma_con = -(1/T^2) q . grad T; >= 0 for Fourier flux with psd sym(k)."""
    _require_positive_temperature(temperature)
    g = np.asarray(grad_temperature, dtype=float)
    return float(-(np.asarray(q, dtype=float) @ g) / temperature ** 2)


def local_entropy_production(temperature, rho, entropy_rate, heat_source, div_q) -> float:
    """gamma_loc = rho s-dot - rho r / T + div(q) / T, from supplied rates."""
    _require_positive_temperature(temperature)
    return float(rho * entropy_rate - rho * heat_source / temperature + div_q / temperature)


def entropy_production(temperature, grad_temperature=None, q=None, k=None,
                       rho=None, entropy_rate=None, heat_source=0.0, div_q=None):
    """(gamma_loc, gamma_con); either may be None if its inputs are missing."""
    gamma_con = None
    if grad_temperature is not None:
        if q is None:
            if k is None:
                raise ValueError("need q or a conductivity k")
            q = fourier_flux(k, grad_temperature)
        gamma_con = conductive_entropy_production(temperature, grad_temperature, q)
    gamma_loc = None
    if entropy_rate is not None and rho is not None and div_q is not None:
        gamma_loc = local_entropy_production(temperature, rho, entropy_rate, heat_source, div_q)
    return gamma_loc, gamma_con


# ---------------------------------------------------------------------------
# structural tensors

@dataclass(frozen=True)
class StructuralTensor:
    y0: np.ndarray
    y_T: np.ndarray
    L0: np.ndarray
    L_T: np.ndarray
    push_con: np.ndarray   # F_T L0 F_T^T
    push_cov: np.ndarray   # F_T^-T L0 F_T^-1
    push_mix: np.ndarray   # F_T L0 F_T^-1


def structural_update(y0, f_t) -> StructuralTensor:
    """Transport a unit preferred direction to the intermediate configuration."""
    y0 = np.asarray(y0, dtype=float)
    if abs(np.linalg.norm(y0) - 1.0) > 1e-10:
        raise ValueError("preferred direction must be a unit vector")
    f_t_mat = f_t.mat if isinstance(f_t, TwoPointMap) else np.asarray(f_t, dtype=float)
    det = np.linalg.det(f_t_mat)
    if det <= 0.0:
        raise NegativeJacobian(f"det F_T = {det:g} <= 0")
    mapped = f_t_mat @ y0
    y_t = mapped / np.linalg.norm(mapped)
    l0 = np.outer(y0, y0)
    f_t_inv = np.linalg.inv(f_t_mat)
    return StructuralTensor(
        y0=y0, y_T=y_t, L0=l0, L_T=np.outer(y_t, y_t),
        push_con=f_t_mat @ l0 @ f_t_mat.T,
        push_cov=f_t_inv.T @ l0 @ f_t_inv,
        push_mix=f_t_mat @ l0 @ f_t_inv,
    )
