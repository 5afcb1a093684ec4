"""Planar motion of two identical charges in a uniform magnetic field.

The relative coordinate moves in one of three radial potentials plus the
magnetic effective term; the centre of mass circles at the cyclotron rate.
"""

__version__ = "0.1.0"

from .errors import ConfigError, NumericalError, OrbitsError, PhysicsDomainError
from .potentials import MotionConstants, V1Params, V2Params, V3Params, make_params
from .turning import turning_points, well_structure
from .dynamics import (CMState, RelState, StepControl, cm_orbit, initial_state_at_perihelion,
                       integrate_relative, measure_apsidal_angle)
from .quadrature import apsidal_angle, periodicity_alpha, radial_period, rational_approx

__all__ = [
    "ConfigError", "NumericalError", "OrbitsError", "PhysicsDomainError",
    "MotionConstants", "V1Params", "V2Params", "V3Params", "make_params",
    "turning_points", "well_structure",
    "CMState", "RelState", "StepControl", "cm_orbit", "initial_state_at_perihelion",
    "integrate_relative", "measure_apsidal_angle",
    "apsidal_angle", "periodicity_alpha", "radial_period", "rational_approx",
]
