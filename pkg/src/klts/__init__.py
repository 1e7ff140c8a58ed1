"""klts: curvilinear thermomechanical kernels for volumetric continua and
Kirchhoff-Love shells, with an oracle-backed verification CLI.

All value types are immutable after construction and every operation is a
pure function, so states may be evaluated concurrently without coordination.
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    constitutive,
    surface_geometry,
    surface_kinematics,
    tensor_core,
    volume_kinematics,
    weak_forms,
)
from .config import DEFAULT_TOLERANCES, Tolerances  # noqa: F401
