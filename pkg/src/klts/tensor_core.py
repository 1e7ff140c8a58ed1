"""Variance-aware curvilinear tensor algebra.

Conventions
-----------
All geometric objects are stored through their ambient Cartesian matrices; a
tensor and its raised/lowered forms are the same ambient object, so volume
and surface algebra share one code path (surface tensors are ambient 3x3
matrices annihilating the surface normal). What distinguishes the four forms
is (a) which components are reported against a basis and (b) how the object
transports between configurations:

========  =======================  =====================  ====================
variance  basis expansion          push forward           pull back
========  =======================  =====================  ====================
``uu``    T^ij  G_i  o G_j          F T F^T                F^-1 T F^-T
``dd``    T_ij  G^i o G^j          F^-T T F^-1            F^T T F
``ud``    T^i_j G_i  o G^j          F T F^-1               F^-1 T F
``du``    T_i^j G^i o G_j          F^-T T F^T             F^T T F^-T
========  =======================  =====================  ====================

The four transports differ as ambient maps but each preserves its own
component matrix, which is the content of the transformation table above and
is enforced by the verification suite.

Basis triads hold the covariant tangents G_i (columns), their duals G^i,
and both metrics; ``build_basis`` guards the inversion with
|det| < det_guard_factor * (max row norm)^3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    ConfigurationMismatch,
    DegenerateProbes,
    NotSkew,
    SingularMetric,
)

REFERENCE = "reference"
INTERMEDIATE = "intermediate"
CURRENT = "current"
CONFIGURATIONS = (REFERENCE, INTERMEDIATE, CURRENT)

VARIANCES = ("uu", "dd", "ud", "du")

# Levi-Civita components, epsilon[i, j, k]
PERMUTATION = np.zeros((3, 3, 3))
for _i, _j, _k, _s in ((0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0),
                       (0, 2, 1, -1.0), (2, 1, 0, -1.0), (1, 0, 2, -1.0)):
    PERMUTATION[_i, _j, _k] = _s
PERMUTATION.setflags(write=False)


def _check_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")


def singularity_threshold(mat, tol: Tolerances = DEFAULT_TOLERANCES):
    row_norms = np.linalg.norm(mat, axis=1)
    return tol.det_guard_factor * max(row_norms.max(), 1e-300) ** 3


def guarded_inverse(mat, tol: Tolerances = DEFAULT_TOLERANCES, what="matrix"):
    det = np.linalg.det(mat)
    if abs(det) < singularity_threshold(mat, tol):
        raise SingularMetric(f"{what} is numerically singular (det={det:g})")
    return np.linalg.inv(mat), det


@dataclass(frozen=True)
class BasisTriad:
    """Covariant/contravariant basis and metrics at one material point.

    ``tangents``/``duals`` store the vectors as columns: tangents[:, i] = G_i.
    """

    tangents: np.ndarray
    duals: np.ndarray
    metric_cov: np.ndarray
    metric_con: np.ndarray
    det_metric: float
    configuration: str = REFERENCE


def build_basis(tangents, configuration=REFERENCE, tol: Tolerances = DEFAULT_TOLERANCES) -> BasisTriad:
    """Build a BasisTriad from three covariant tangent vectors (columns).

    Raises SingularMetric when the tangents are (numerically) dependent.
    """
    t = np.asarray(tangents, dtype=float)
    if t.shape == (3, 3):
        cols = t
    else:
        cols = np.column_stack([np.asarray(v, dtype=float) for v in tangents])
    _check_finite(cols, "tangents")
    metric_cov = cols.T @ cols
    det_metric = np.linalg.det(metric_cov)
    if det_metric < singularity_threshold(metric_cov, tol):
        raise SingularMetric(f"tangent metric is singular (det={det_metric:g})")
    metric_con = np.linalg.inv(metric_cov)
    duals = cols @ metric_con  # G^i = G^{ij} G_j, column-wise
    return BasisTriad(cols, duals, metric_cov, metric_con, float(det_metric), configuration)


@dataclass(frozen=True)
class Tensor2:
    """Second-order tensor: ambient 3x3 matrix + variance + configuration."""

    mat: np.ndarray
    variance: str
    configuration: str

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        _check_finite(m, "Tensor2")
        if self.variance not in VARIANCES:
            raise ValueError(f"unknown variance {self.variance!r}")
        if self.configuration not in CONFIGURATIONS:
            raise ValueError(f"unknown configuration {self.configuration!r}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)


@dataclass(frozen=True)
class TwoPointMap:
    """Invertible map between configurations (F-like object)."""

    mat: np.ndarray
    domain: str
    codomain: str
    inv: np.ndarray = field(init=False)
    det: float = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        _check_finite(m, "TwoPointMap")
        inv, det = guarded_inverse(m, what="two-point map")
        m = m.copy()
        m.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "inv", inv)
        object.__setattr__(self, "det", float(det))


@dataclass(frozen=True)
class Tensor4:
    """Fourth-order tensor as an ambient (3,3,3,3) component array."""

    comp: np.ndarray
    configuration: str = REFERENCE

    def __post_init__(self):
        c = np.asarray(self.comp, dtype=float)
        _check_finite(c, "Tensor4")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "comp", c)


# ---------------------------------------------------------------------------
# components against a basis


def components(t: Tensor2, basis: BasisTriad, variance=None) -> np.ndarray:
    """Component matrix of ``t`` against ``basis`` for the given variance.

    Contracting with tangents gives covariant components, with duals gives
    contravariant ones; mixed forms use one of each.
    """
    if basis.configuration != t.configuration:
        raise ConfigurationMismatch(
            f"tensor in {t.configuration!r}, basis in {basis.configuration!r}")
    v = variance or t.variance
    left = {"u": basis.duals, "d": basis.tangents}
    return left[v[0]].T @ t.mat @ left[v[1]]


def tensor_from_components(comp, variance, basis: BasisTriad, configuration=None) -> Tensor2:
    """Assemble the ambient tensor whose ``variance`` components are ``comp``."""
    comp = np.asarray(comp, dtype=float)
    cfg = configuration or basis.configuration
    right = {"u": basis.tangents, "d": basis.duals}
    mat = right[variance[0]] @ comp @ right[variance[1]].T
    return Tensor2(mat, variance, cfg)


def transform_variance(t: Tensor2, basis: BasisTriad, target: str) -> Tensor2:
    """Re-tag ``t`` with ``target`` variance (metric raise/lower of components).

    The ambient object is unchanged; only the reported components and the
    transport rule change. Round trips restore the input exactly.
    """
    if target not in VARIANCES:
        raise ValueError(f"unknown variance {target!r}")
    if basis.configuration != t.configuration:
        raise ConfigurationMismatch(
            f"tensor in {t.configuration!r}, basis in {basis.configuration!r}")
    return Tensor2(t.mat, target, t.configuration)


def raise_lower_components(comp, variance, target, basis: BasisTriad) -> np.ndarray:
    """Metric-contraction route between component matrices (oracle path)."""
    comp = np.asarray(comp, dtype=float)
    ops = {("u", "d"): basis.metric_cov, ("d", "u"): basis.metric_con}
    left = comp if variance[0] == target[0] else ops[(variance[0], target[0])] @ comp
    return left if variance[1] == target[1] else left @ ops[(variance[1], target[1])]


# ---------------------------------------------------------------------------
# push forward / pull back

_PUSH = {
    "uu": lambda t, f, fi: f @ t @ f.T,
    "dd": lambda t, f, fi: fi.T @ t @ fi,
    "ud": lambda t, f, fi: f @ t @ fi,
    "du": lambda t, f, fi: fi.T @ t @ f.T,
}
_PULL = {
    "uu": lambda t, f, fi: fi @ t @ fi.T,
    "dd": lambda t, f, fi: f.T @ t @ f,
    "ud": lambda t, f, fi: fi @ t @ f,
    "du": lambda t, f, fi: f.T @ t @ fi.T,
}


def push_forward(t: Tensor2, f: TwoPointMap) -> Tensor2:
    """Transport ``t`` from f.domain to f.codomain by its variance rule."""
    if t.configuration != f.domain:
        raise ConfigurationMismatch(
            f"push forward needs tensor in {f.domain!r}, got {t.configuration!r}")
    return Tensor2(_PUSH[t.variance](t.mat, f.mat, f.inv), t.variance, f.codomain)


def pull_back(t: Tensor2, f: TwoPointMap) -> Tensor2:
    """Transport ``t`` from f.codomain back to f.domain by its variance rule."""
    if t.configuration != f.codomain:
        raise ConfigurationMismatch(
            f"pull back needs tensor in {f.codomain!r}, got {t.configuration!r}")
    return Tensor2(_PULL[t.variance](t.mat, f.mat, f.inv), t.variance, f.domain)


# ---------------------------------------------------------------------------
# the three products and the rearrangement pair

OTIMES = "otimes"
OPLUS = "oplus"
BOXTIMES = "boxtimes"


def tensor_product(a: Tensor2, b: Tensor2, kind: str) -> Tensor4:
    """Fourth-order product of two second-order tensors.

    Component layouts (ambient indices):
      otimes   D[i,j,k,l] = A[i,j] B[k,l]
      oplus    D[i,j,k,l] = A[i,l] B[j,k]
      boxtimes D[i,j,k,l] = A[i,k] B[j,l]
    """
    if a.configuration != b.configuration:
        raise ConfigurationMismatch("product operands live in different configurations")
    if a.variance != b.variance:
        raise ConfigurationMismatch("product operands carry different variances")
    am, bm = a.mat, b.mat
    if kind == OTIMES:
        comp = np.einsum("ij,kl->ijkl", am, bm)
    elif kind == OPLUS:
        comp = np.einsum("il,jk->ijkl", am, bm)
    elif kind == BOXTIMES:
        comp = np.einsum("ik,jl->ijkl", am, bm)
    else:
        raise ValueError(f"unknown product kind {kind!r}")
    return Tensor4(comp, a.configuration)


def rearrange(c: Tensor4, direction: str) -> Tensor4:
    """Index rearrangement: R maps [i,j,k,l] -> old [i,k,l,j]; L inverts it."""
    if direction == "R":
        comp = np.transpose(c.comp, (0, 3, 1, 2))
    elif direction == "L":
        comp = np.transpose(c.comp, (0, 2, 3, 1))
    else:
        raise ValueError(f"direction must be 'R' or 'L', got {direction!r}")
    return Tensor4(comp, c.configuration)


def ddot42(c: Tensor4, x) -> np.ndarray:
    """Double contraction (C : X)_ij = C[i,j,k,l] X[k,l]."""
    xm = x.mat if isinstance(x, Tensor2) else np.asarray(x, dtype=float)
    return np.einsum("ijkl,kl->ij", c.comp, xm)


# ---------------------------------------------------------------------------
# permutation-tensor utilities

def eps_ddot(m) -> np.ndarray:
    """(E : M)_i = epsilon_ijk M_jk; gives u x v for M = u otimes v."""
    return np.einsum("ijk,jk->i", PERMUTATION, np.asarray(m, dtype=float))


def axial_vector(w, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Axial vector of a skew tensor, w_bar = (1/2) E : W^T.

    Raises NotSkew when the symmetric part of ``w`` is not negligible.
    """
    wm = np.asarray(w, dtype=float)
    sym = 0.5 * (wm + wm.T)
    scale = max(np.linalg.norm(wm), 1.0)
    if np.linalg.norm(sym) > tol.skew_rel * scale:
        raise NotSkew(f"symmetric part norm {np.linalg.norm(sym):g} exceeds tolerance")
    return 0.5 * eps_ddot(wm.T)


def spin_from_axial(wbar) -> np.ndarray:
    """Skew tensor with axial vector ``wbar``: W^T = w_bar . E."""
    wt = np.einsum("i,ijk->jk", np.asarray(wbar, dtype=float), PERMUTATION)
    return wt.T


# ---------------------------------------------------------------------------
# surface helpers shared by the surface modules

def surface_identity(normal) -> np.ndarray:
    n = np.asarray(normal, dtype=float)
    return np.eye(3) - np.outer(n, n)


def inplane_defect(t, normal) -> float:
    """Projector check for surface tensors: max of |T n| and |T^T n|.

    In-plane ambient tensors must annihilate the normal from both sides;
    callers use this to validate inputs before surface algebra.
    """
    tm = t.mat if isinstance(t, Tensor2) else np.asarray(t, dtype=float)
    n = np.asarray(normal, dtype=float)
    return float(max(np.linalg.norm(tm @ n), np.linalg.norm(tm.T @ n)))


def surface_det(t, y1, y2, normal_domain, normal_codomain=None,
                tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Surface determinant of an in-plane tensor from probe vectors.

    ``y1``/``y2`` span the domain plane (non-parallel), ``normal_domain`` is
    the domain unit normal and ``normal_codomain`` the codomain one (defaults
    to the domain normal for same-surface tensors). The value is independent
    of the admissible probe choice.
    """
    tm = t.mat if isinstance(t, Tensor2) else np.asarray(t, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    y3 = np.asarray(normal_domain, dtype=float)
    y4 = y3 if normal_codomain is None else np.asarray(normal_codomain, dtype=float)
    denom = np.cross(y1, y2) @ y3
    if abs(denom) <= tol.det_guard_factor * max(np.linalg.norm(y1) * np.linalg.norm(y2), 1e-300):
        raise DegenerateProbes("probe vectors are parallel or leave the surface plane")
    return float(np.cross(tm @ y1, tm @ y2) @ y4 / denom)


def inplane_inverse(m, normal_domain, normal_codomain) -> np.ndarray:
    """Inverse of a rank-2 in-plane map via rank-completion with the normals."""
    nd = np.asarray(normal_domain, dtype=float)
    nc = np.asarray(normal_codomain, dtype=float)
    full = np.asarray(m, dtype=float) + np.outer(nc, nd)
    inv, _ = guarded_inverse(full, what="in-plane map")
    return inv - np.outer(nd, nc)


def embedded_surface_det(m, normal_domain, normal_codomain=None) -> float:
    """det_s by rank-completion; equals the probe formula for in-plane maps."""
    nd = np.asarray(normal_domain, dtype=float)
    nc = nd if normal_codomain is None else np.asarray(normal_codomain, dtype=float)
    return float(np.linalg.det(np.asarray(m, dtype=float) + np.outer(nc, nd)))
