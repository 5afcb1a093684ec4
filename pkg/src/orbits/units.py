"""Gaussian-unit inputs and the dimensionless system used everywhere else.

Lengths are measured in the magnetic length ``l_B = (m / B^2)^(1/3)``, time in
``1/omega_c`` with ``omega_c = q B / m``, energy in ``q^2 / l_B`` and angular
momentum in ``m omega_c l_B^2``.  Each potential coefficient multiplies a power
of the separation, so its unit is ``q^2 * l_B^k`` for a kind-specific ``k``
(listed in ``COEFFICIENT_POWERS``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .potentials import PotentialParams, V1Params, V2Params, V3Params

# dimensionless value = raw / (q^2 * l_B**power)
COEFFICIENT_POWERS = {
    "V1": {"b": 1, "c": -2, "d": -3},
    "V2": {"a": 1, "b": -3, "c": -5, "d": -7},
    "V3": {"a": 3, "b": 2, "c": 1, "d": 0, "e": -3},
}

# which dimensionless field each raw coefficient feeds
_FIELD = {
    "V1": {"b": "B", "c": "Gamma", "d": "Delta"},
    "V2": {"a": "A", "b": "B", "c": "Gamma", "d": "Delta"},
    "V3": {"a": "A", "b": "B", "c": "Gamma", "d": "Delta", "e": "E"},
}
_PARAM_CLASS = {"V1": V1Params, "V2": V2Params, "V3": V3Params}


@dataclass(frozen=True)
class PhysicalSystem:
    m: float
    q: float
    B_mag: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m > 0):
            raise ConfigError(f"mass must be positive, got {self.m}")
        if not math.isfinite(self.q) or self.q == 0:
            raise ConfigError(f"charge must be nonzero, got {self.q}")
        if not (math.isfinite(self.B_mag) and self.B_mag > 0):
            raise ConfigError(f"field magnitude must be positive, got {self.B_mag}")


@dataclass(frozen=True)
class Scales:
    length: float        # l_B
    frequency: float     # omega_c
    energy_unit: float   # q^2 / l_B
    angmom_unit: float   # m omega_c l_B^2

    @property
    def charge_sq(self) -> float:
        return self.energy_unit * self.length


@dataclass(frozen=True)
class RawPotential:
    """Dimensional coefficients; V1 uses a, b, c, d with a fixed to q^2."""

    kind: str
    a: float
    b: float
    c: float
    d: float
    e: float | None = None

    def __post_init__(self):
        if self.kind not in _FIELD:
            raise ConfigError(f"unknown potential kind {self.kind!r}")
        if (self.kind == "V3") != (self.e is not None):
            raise ConfigError("coefficient e is required for V3 and only for V3")


def derive_scales(sys: PhysicalSystem) -> Scales:
    m, q, b = sys.m, sys.q, sys.B_mag
    length = (m / (b * b)) ** (1.0 / 3.0)
    freq = q * b / m
    return Scales(length=length, frequency=freq,
                  energy_unit=q * q / length,
                  angmom_unit=m * freq * length * length)


def coefficient_unit(kind: str, name: str, s: Scales) -> float:
    return s.charge_sq * s.length ** COEFFICIENT_POWERS[kind][name]


def nondimensionalize(raw: RawPotential, s: Scales, rtol: float = 1e-12) -> PotentialParams:
    if raw.kind == "V1":
        q2 = s.charge_sq
        if abs(raw.a - q2) > rtol * q2:
            raise ConfigError(f"V1 requires a = q^2 = {q2!r}, got {raw.a!r}")
    fields = {field: getattr(raw, name) / coefficient_unit(raw.kind, name, s)
              for name, field in _FIELD[raw.kind].items()}
    return _PARAM_CLASS[raw.kind](**fields)


def redimensionalize_potential(p: PotentialParams, s: Scales) -> RawPotential:
    """Inverse of :func:`nondimensionalize`."""
    raw = {name: getattr(p, field) * coefficient_unit(p.kind, name, s)
           for name, field in _FIELD[p.kind].items()}
    if p.kind == "V1":
        raw["a"] = s.charge_sq
    return RawPotential(kind=p.kind, **raw)


def redimensionalize(value: float, unit_kind: str, s: Scales) -> float:
    if unit_kind == "length":
        return value * s.length
    if unit_kind == "time":
        return value / s.frequency
    if unit_kind == "energy":
        return value * s.energy_unit
    if unit_kind == "angmom":
        return value * s.angmom_unit
    raise ConfigError(f"unknown unit kind {unit_kind!r}")
