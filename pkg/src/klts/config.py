"""Shared tolerance policy.

Absolute tolerances apply to identities whose operands are O(1) conditioned;
relative tolerances elsewhere. Scenario files may override any field.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    identity_abs: float = 1.0e-12      # exact algebraic identities in double precision
    spin_abs: float = 1.0e-14          # axial-vector / permutation-tensor round trips
    geometry_abs: float = 1.0e-10      # Ricci, Gauss, Weingarten residuals (FD-backed)
    derivative_rel: float = 1.0e-6     # closed forms vs central finite differences
    flux_abs: float = 1.0e-8           # divergence-theorem closures at quadrature order 8
    entropy_floor: float = -1.0e-15    # admissible gamma_con lower bound
    det_guard_factor: float = 1.0e-10  # |det| < factor * (max row norm)^3 is singular
    skew_rel: float = 1.0e-10          # symmetric-part bound for skew inputs

    def overridden(self, **kwargs) -> "Tolerances":
        unknown = set(kwargs) - {f.name for f in fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance fields: {sorted(unknown)}")
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = Tolerances()
