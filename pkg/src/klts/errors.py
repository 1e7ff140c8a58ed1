"""Exception taxonomy shared by all kernel modules."""


class KltsError(Exception):
    """Base class for all library errors."""


class SingularMetric(KltsError):
    """Metric or map determinant below the singularity guard."""


class ConfigurationMismatch(KltsError):
    """Operands live in incompatible configurations (or variances)."""


class NegativeJacobian(KltsError):
    """A deformation map has non-positive determinant."""


class NotSkew(KltsError):
    """Symmetric part of a supposedly skew tensor exceeds tolerance."""


class DegenerateProbes(KltsError):
    """Surface-determinant probe vectors are parallel or out of plane."""


class DegenerateTangents(KltsError):
    """Surface tangents fail to span a plane (a1 x a2 ~ 0)."""


class NotSPD(KltsError):
    """Matrix expected to be symmetric positive definite is not."""


class NonpositiveTemperature(KltsError):
    """Absolute temperature must be strictly positive."""


class MalformedThermalMap(KltsError):
    """Surface thermal map is not of the form F_sT + lam_T3 nT otimes N."""


class SingularCurvature(KltsError):
    """Covariant curvature matrix is singular where its inverse is needed."""


class QuadratureDomainMismatch(KltsError):
    """Quadrature rule does not match the chart's parametric domain."""


class ConfigInvalid(KltsError):
    """Scenario / CLI configuration failed validation."""


class UnknownScenario(KltsError):
    """Requested scenario name is not in the built-in catalog."""
