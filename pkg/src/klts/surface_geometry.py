"""Parametric surface charts: frames, curvature, Kirchhoff-Love layers.

Normal orientation follows n = (a1 x a2)/|a1 x a2|; curvature signs are
inherited from the chart orientation, so benchmark comparisons use |H|
unless a scenario pins the orientation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateTangents, SingularCurvature
from .tensor_core import REFERENCE, surface_identity

DEFAULT_RECT = np.array([[-0.5, 0.5], [-0.5, 0.5]])

PRINCIPAL_DISC_GUARD = -1.0e-12


@dataclass(frozen=True)
class SurfaceChart:
    """Parametric map (xi^1, xi^2) -> ambient position with exact derivatives.

    ``tangents(u)`` returns (3, 2) with column a = d x / d xi^a and
    ``second(u)`` returns (3, 2, 2) with [:, a, b] = d^2 x / d xi^a d xi^b.
    """

    position: Callable[[np.ndarray], np.ndarray]
    tangents: Callable[[np.ndarray], np.ndarray]
    second: Callable[[np.ndarray], np.ndarray]
    domain: np.ndarray = DEFAULT_RECT


@dataclass(frozen=True)
class SurfacePointFrame:
    """Tangent frame, metrics, normal and curvature at one surface point."""

    a_cov: np.ndarray          # (3, 2), columns a_alpha
    a_dual: np.ndarray         # (3, 2), columns a^alpha
    metric_cov: np.ndarray     # (2, 2) a_{ab}
    metric_con: np.ndarray     # (2, 2) a^{ab}
    normal: np.ndarray         # unit normal
    normal_partial: np.ndarray  # (3, 2), n_,a
    b_cov: np.ndarray          # (2, 2) b_{ab} = n . x_,ab
    b_mix: np.ndarray          # (2, 2) [a, b] = b_a^b
    b_con: np.ndarray          # (2, 2) b^{ab}
    mean_curvature: float
    gauss_curvature: float
    principal_curvatures: tuple
    gamma: np.ndarray          # (2, 2, 2) [g, a, b] = Gamma^g_{ab}
    second: np.ndarray         # (3, 2, 2) x_,ab (kept for layer/variation work)
    configuration: str = REFERENCE

    @property
    def identity_inplane(self) -> np.ndarray:
        return surface_identity(self.normal)

    @property
    def curvature_ambient(self) -> np.ndarray:
        """b = b_{ab} a^a otimes a^b = -grad_s n as an ambient matrix."""
        return self.a_dual @ self.b_cov @ self.a_dual.T

    def area_element(self) -> float:
        return float(np.sqrt(np.linalg.det(self.metric_cov)))

    def cov_components(self, ambient) -> np.ndarray:
        return self.a_cov.T @ np.asarray(ambient, dtype=float) @ self.a_cov

    def con_components(self, ambient) -> np.ndarray:
        return self.a_dual.T @ np.asarray(ambient, dtype=float) @ self.a_dual

    def from_cov_components(self, comp) -> np.ndarray:
        return self.a_dual @ np.asarray(comp, dtype=float) @ self.a_dual.T

    def from_con_components(self, comp) -> np.ndarray:
        return self.a_cov @ np.asarray(comp, dtype=float) @ self.a_cov.T


def frame(chart: SurfaceChart, u, configuration=REFERENCE) -> SurfacePointFrame:
    """Full first/second-fundamental-form frame at parametric point ``u``."""
    u = np.asarray(u, dtype=float)
    a = chart.tangents(u)
    sec = chart.second(u)
    raw_normal = np.cross(a[:, 0], a[:, 1])
    nrm = np.linalg.norm(raw_normal)
    if nrm < 1e-12 * max(np.linalg.norm(a[:, 0]) * np.linalg.norm(a[:, 1]), 1e-300):
        raise DegenerateTangents("a1 x a2 vanishes; tangents do not span a plane")
    n = raw_normal / nrm
    metric_cov = a.T @ a
    metric_con = np.linalg.inv(metric_cov)
    dual = a @ metric_con
    b_cov = np.einsum("m,mab->ab", n, sec)
    b_mix = b_cov @ metric_con          # [a, b] = b_a^b
    b_con = metric_con @ b_cov @ metric_con
    mean = 0.5 * float(np.trace(b_mix))
    gauss = float(np.linalg.det(b_cov) / np.linalg.det(metric_cov))
    disc = mean * mean - gauss
    if disc < PRINCIPAL_DISC_GUARD:
        raise SingularCurvature(f"complex principal-curvature pair, disc={disc:g}")
    root = np.sqrt(max(disc, 0.0))
    k1, k2 = mean + root, mean - root
    gamma = np.einsum("mab,mg->gab", sec, dual)
    # n_,a from the quotient rule, projected off the normal
    raw_partial = np.stack(
        [np.cross(sec[:, 0, i], a[:, 1]) + np.cross(a[:, 0], sec[:, 1, i]) for i in range(2)],
        axis=1,
    )
    n_partial = (np.eye(3) - np.outer(n, n)) @ raw_partial / nrm
    return SurfacePointFrame(
        a_cov=a, a_dual=dual, metric_cov=metric_cov, metric_con=metric_con,
        normal=n, normal_partial=n_partial, b_cov=b_cov, b_mix=b_mix, b_con=b_con,
        mean_curvature=mean, gauss_curvature=gauss,
        principal_curvatures=(float(k1), float(k2)),
        gamma=gamma, second=sec, configuration=configuration,
    )


def gauss_weingarten_residuals(fr: SurfacePointFrame):
    """Residual norms of a_{a;b} = b_{ab} n and n_,a = -b_a^b a_b."""
    gauss = 0.0
    for al in range(2):
        for be in range(2):
            cov = fr.second[:, al, be] - fr.a_cov @ fr.gamma[:, al, be]
            gauss = max(gauss, float(np.linalg.norm(cov - fr.b_cov[al, be] * fr.normal)))
    weingarten = 0.0
    for al in range(2):
        res = fr.normal_partial[:, al] + fr.a_cov @ fr.b_mix[al, :]
        weingarten = max(weingarten, float(np.linalg.norm(res)))
    return gauss, weingarten


# ---------------------------------------------------------------------------
# Kirchhoff-Love layer geometry

@dataclass(frozen=True)
class ShellLayerFrame:
    """Through-thickness layer data at offset xi from the mid-surface."""

    xi: float
    lam3: float
    tangents: np.ndarray            # (3, 2) exact layer tangents g^_a
    metric_exact: np.ndarray        # (2, 2)
    metric_first_order: np.ndarray  # a_{ab} - 2 xi b_{ab}
    thickness: Optional[float] = None
    thickness_ref: Optional[float] = None


def layer_frame(mid: SurfacePointFrame, xi: float, lam3: float = 1.0,
                thickness_ref: Optional[float] = None) -> ShellLayerFrame:
    """Layer tangents g^_a = a_a - xi lam3 b_a^g a_g and both metrics.

    The first-order metric additionally assumes lam3 ~ 1, so its defect is
    O(xi^2) only near unit thickness stretch.
    """
    if lam3 <= 0.0:
        raise ValueError("lam3 must be positive")
    t = None if thickness_ref is None else lam3 * thickness_ref
    if t is not None and abs(xi) > 0.5 * t + 1e-15:
        raise ValueError(f"|xi|={abs(xi):g} outside the shell thickness t/2={0.5 * t:g}")
    g = mid.a_cov - xi * lam3 * (mid.a_cov @ mid.b_mix.T)
    return ShellLayerFrame(
        xi=float(xi), lam3=float(lam3), tangents=g,
        metric_exact=g.T @ g,
        metric_first_order=mid.metric_cov - 2.0 * xi * mid.b_cov,
        thickness=t, thickness_ref=thickness_ref,
    )


# ---------------------------------------------------------------------------
# surface gradient / divergence and Ricci residuals

def surface_gradient_scalar(fr: SurfacePointFrame, dphi) -> np.ndarray:
    """grad_s phi = phi_,a a^a for given parametric derivatives dphi (2,)."""
    return fr.a_dual @ np.asarray(dphi, dtype=float)


def surface_gradient_vector(fr: SurfacePointFrame, v_partial) -> np.ndarray:
    """grad_s v = v_,b otimes a^b for an ambient field with partials (3, 2)."""
    return np.asarray(v_partial, dtype=float) @ fr.a_dual.T


def surface_divergence_vector(fr: SurfacePointFrame, v_partial) -> float:
    return float(np.trace(surface_gradient_vector(fr, v_partial)))


def covariant_derivative_surface_vector(comp, partial, fr: SurfacePointFrame, variance="u"):
    """v^a_{;b} (or v_{a;b}) from contra (co) components and their partials."""
    comp = np.asarray(comp, dtype=float)
    partial = np.asarray(partial, dtype=float)
    if variance == "u":
        return partial + np.einsum("agb,g->ab", fr.gamma, comp)
    if variance == "d":
        return partial - np.einsum("gab,g->ab", fr.gamma, comp)
    raise ValueError("variance must be 'u' or 'd'")


def surface_metric_cov_derivative(metric_partial, fr: SurfacePointFrame) -> np.ndarray:
    """a_{ab;g} given parametric derivatives of the covariant metric.

    Vanishes identically (Ricci); used with finite-differenced partials as a
    verification residual.
    """
    out = np.asarray(metric_partial, dtype=float).copy()
    out -= np.einsum("dag,db->abg", fr.gamma, fr.metric_cov)
    out -= np.einsum("dbg,ad->abg", fr.gamma, fr.metric_cov)
    return out


# ---------------------------------------------------------------------------
# chart catalog

def plane_chart(domain=DEFAULT_RECT) -> SurfaceChart:
    return SurfaceChart(
        position=lambda u: np.array([u[0], u[1], 0.0]),
        tangents=lambda u: np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]),
        second=lambda u: np.zeros((3, 2, 2)),
        domain=np.asarray(domain, dtype=float),
    )


def cylinder_chart(radius: float, domain=((0.2, 1.4), (-0.5, 0.5))) -> SurfaceChart:
    """(theta, z) -> (R cos theta, R sin theta, z)."""

    def pos(u):
        return np.array([radius * np.cos(u[0]), radius * np.sin(u[0]), u[1]])

    def tan(u):
        return np.array([
            [-radius * np.sin(u[0]), 0.0],
            [radius * np.cos(u[0]), 0.0],
            [0.0, 1.0],
        ])

    def sec(u):
        s = np.zeros((3, 2, 2))
        s[:, 0, 0] = [-radius * np.cos(u[0]), -radius * np.sin(u[0]), 0.0]
        return s

    return SurfaceChart(pos, tan, sec, np.asarray(domain, dtype=float))


def sphere_chart(radius: float, domain=((0.7, 2.2), (0.1, 1.4))) -> SurfaceChart:
    """(theta, phi) polar/azimuth patch away from the poles."""

    def pos(u):
        th, ph = u
        return radius * np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])

    def tan(u):
        th, ph = u
        return radius * np.array([
            [np.cos(th) * np.cos(ph), -np.sin(th) * np.sin(ph)],
            [np.cos(th) * np.sin(ph), np.sin(th) * np.cos(ph)],
            [-np.sin(th), 0.0],
        ])

    def sec(u):
        th, ph = u
        s = np.empty((3, 2, 2))
        s[:, 0, 0] = -radius * np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        s[:, 0, 1] = s[:, 1, 0] = radius * np.array(
            [-np.cos(th) * np.sin(ph), np.cos(th) * np.cos(ph), 0.0])
        s[:, 1, 1] = radius * np.array([-np.sin(th) * np.cos(ph), -np.sin(th) * np.sin(ph), 0.0])
        return s

    return SurfaceChart(pos, tan, sec, np.asarray(domain, dtype=float))


def torus_chart(major: float, minor: float, domain=((0.2, 1.4), (0.3, 1.5))) -> SurfaceChart:
    """(u, v) -> ((R + r cos v) cos u, (R + r cos v) sin u, r sin v)."""

    def pos(uv):
        u, v = uv
        w = major + minor * np.cos(v)
        return np.array([w * np.cos(u), w * np.sin(u), minor * np.sin(v)])

    def tan(uv):
        u, v = uv
        w = major + minor * np.cos(v)
        return np.array([
            [-w * np.sin(u), -minor * np.sin(v) * np.cos(u)],
            [w * np.cos(u), -minor * np.sin(v) * np.sin(u)],
            [0.0, minor * np.cos(v)],
        ])

    def sec(uv):
        u, v = uv
        w = major + minor * np.cos(v)
        s = np.empty((3, 2, 2))
        s[:, 0, 0] = [-w * np.cos(u), -w * np.sin(u), 0.0]
        s[:, 0, 1] = s[:, 1, 0] = [minor * np.sin(v) * np.sin(u), -minor * np.sin(v) * np.cos(u), 0.0]
        s[:, 1, 1] = [-minor * np.cos(v) * np.cos(u), -minor * np.cos(v) * np.sin(u), -minor * np.sin(v)]
        return s

    return SurfaceChart(pos, tan, sec, np.asarray(domain, dtype=float))


def _poly2_value(coeffs, expo, u, axes=()):
    e = expo.astype(float).copy()
    fac = np.ones(e.shape[0])
    for ax in axes:
        fac *= e[:, ax]
        e[:, ax] -= 1.0
    e = np.maximum(e, 0.0)
    mono = fac * np.prod(np.asarray(u, dtype=float) ** e, axis=1)
    return coeffs @ mono


def polynomial_surface_chart(coeffs, exponents, domain=DEFAULT_RECT) -> SurfaceChart:
    """x_i(u) = sum_t coeffs[i, t] u1^expo[t,0] u2^expo[t,1] with exact derivatives."""
    coeffs = np.asarray(coeffs, dtype=float)
    expo = np.asarray(exponents, dtype=int)

    def pos(u):
        return _poly2_value(coeffs, expo, u)

    def tan(u):
        return np.column_stack([_poly2_value(coeffs, expo, u, (i,)) for i in range(2)])

    def sec(u):
        s = np.empty((3, 2, 2))
        for i in range(2):
            for j in range(i, 2):
                s[:, i, j] = s[:, j, i] = _poly2_value(coeffs, expo, u, (i, j))
        return s

    return SurfaceChart(pos, tan, sec, np.asarray(domain, dtype=float))


def _quartic_exponents2():
    return np.array([(p, q) for p in range(5) for q in range(5 - p)], dtype=int)


_QUARTIC_EXPO2 = _quartic_exponents2()


def monge_chart(height_coeffs, height_exponents=None, domain=DEFAULT_RECT) -> SurfaceChart:
    """Graph chart x = (u1, u2, h(u)) from polynomial height coefficients."""
    hc = np.asarray(height_coeffs, dtype=float)
    expo = _QUARTIC_EXPO2[: hc.size] if height_exponents is None else np.asarray(height_exponents, int)
    coeffs = np.zeros((3, len(expo) + 2))
    full_expo = np.vstack([[[1, 0], [0, 1]], expo])
    coeffs[0, 0] = 1.0
    coeffs[1, 1] = 1.0
    coeffs[2, 2:] = hc
    return polynomial_surface_chart(coeffs, full_expo, domain)


def random_surface_chart(rng, amplitude=0.06, domain=DEFAULT_RECT) -> SurfaceChart:
    """Gently curved random polynomial patch with well-conditioned tangents."""
    from .volume_kinematics import random_rotation

    expo = _QUARTIC_EXPO2
    coeffs = amplitude * rng.uniform(-1.0, 1.0, size=(3, len(expo)))
    total = expo.sum(axis=1)
    coeffs[:, total < 2] = 0.0
    core = random_rotation(rng) @ np.vstack([np.diag(rng.uniform(0.8, 1.3, size=2)), np.zeros((1, 2))])
    for t in np.flatnonzero(total == 1):
        axis = int(np.argmax(expo[t]))
        coeffs[:, t] = core[:, axis]
    return polynomial_surface_chart(coeffs, expo, domain)


def scaled_surface_chart(base: SurfaceChart, factor: float) -> SurfaceChart:
    """Uniform ambient scaling x -> factor * x (thermal intermediate charts)."""
    return SurfaceChart(
        position=lambda u: factor * base.position(u),
        tangents=lambda u: factor * base.tangents(u),
        second=lambda u: factor * base.second(u),
        domain=base.domain,
    )


def combine_surface_charts(base: SurfaceChart, bump: SurfaceChart, factor: float) -> SurfaceChart:
    """Chart with position base + factor * bump over the shared domain."""
    return SurfaceChart(
        position=lambda u: base.position(u) + factor * bump.position(u),
        tangents=lambda u: base.tangents(u) + factor * bump.tangents(u),
        second=lambda u: base.second(u) + factor * bump.second(u),
        domain=base.domain,
    )


def displacement_surface_chart(pos, tan, sec, domain=DEFAULT_RECT) -> SurfaceChart:
    """Wrap raw displacement callbacks as a chart-like object for combination."""
    return SurfaceChart(pos, tan, sec, np.asarray(domain, dtype=float))


CHART_CATALOG = {
    "plane": lambda params: plane_chart(**params),
    "cylinder": lambda params: cylinder_chart(**params),
    "sphere": lambda params: sphere_chart(**params),
    "torus": lambda params: torus_chart(**params),
    "monge": lambda params: monge_chart(**params),
}


def chart_from_config(name: str, params: Optional[dict] = None) -> SurfaceChart:
    """Instantiate a catalog chart by name + parameter dict (scenario files)."""
    if name not in CHART_CATALOG:
        raise KeyError(f"unknown chart {name!r}; catalog: {sorted(CHART_CATALOG)}")
    params = dict(params or {})
    if "domain" in params:
        params["domain"] = np.asarray(params["domain"], dtype=float)
    return CHART_CATALOG[name](params)
