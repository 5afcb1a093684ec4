"""The three radial interaction potentials in dimensionless form.

    V1 = 1/g + B/g^2 + Gamma g + Delta g^2
    V2 = A/g^2 + B g^2 + Gamma g^4 + Delta g^6
    V3 = A/g^4 + B/g^3 + Gamma/g^2 + Delta/g - E g^2

The relative coordinate also feels the magnetic field; with the conserved
canonical angular momentum ``p_theta`` substituted, the radial motion sees

    V_eff(g) = (p_theta/g - g/4)^2 + V(g)

and obeys ``g'' = 2 F(g)`` with ``F = -dV_eff/dg``.  Forces here are exact
derivatives; callers must keep ``g > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union


def _check_radius(g):
    if not g > 0.0:
        raise ValueError(f"radius must be positive, got {g!r}")


@dataclass(frozen=True)
class V1Params:
    B: float = 0.0
    Gamma: float = 0.0
    Delta: float = 0.0
    kind = "V1"

    def value(self, g):
        return 1.0 / g + self.B / (g * g) + self.Gamma * g + self.Delta * g * g

    def slope(self, g):
        return -1.0 / (g * g) - 2.0 * self.B / g ** 3 + self.Gamma + 2.0 * self.Delta * g


@dataclass(frozen=True)
class V2Params:
    A: float = 0.0
    B: float = 0.0
    Gamma: float = 0.0
    Delta: float = 0.0
    kind = "V2"

    def value(self, g):
        g2 = g * g
        return self.A / g2 + g2 * (self.B + g2 * (self.Gamma + g2 * self.Delta))

    def slope(self, g):
        g2 = g * g
        return -2.0 * self.A / (g2 * g) + g * (2.0 * self.B + g2 * (4.0 * self.Gamma + 6.0 * self.Delta * g2))


@dataclass(frozen=True)
class V3Params:
    A: float = 0.0
    B: float = 0.0
    Gamma: float = 0.0
    Delta: float = 0.0
    E: float = 0.0
    kind = "V3"

    def value(self, g):
        u = 1.0 / g
        return u * (self.Delta + u * (self.Gamma + u * (self.B + u * self.A))) - self.E * g * g

    def slope(self, g):
        u = 1.0 / g
        return -u * u * (self.Delta + u * (2.0 * self.Gamma + u * (3.0 * self.B + 4.0 * self.A * u))) \
            - 2.0 * self.E * g


PotentialParams = Union[V1Params, V2Params, V3Params]

PARAM_NAMES = {
    "V1": ("B", "Gamma", "Delta"),
    "V2": ("A", "B", "Gamma", "Delta"),
    "V3": ("A", "B", "Gamma", "Delta", "E"),
}


def make_params(kind: str, **values) -> PotentialParams:
    cls = {"V1": V1Params, "V2": V2Params, "V3": V3Params}.get(kind)
    if cls is None:
        raise ValueError(f"unknown potential kind {kind!r}")
    return cls(**{k: float(v) for k, v in values.items()})


@dataclass(frozen=True)
class MotionConstants:
    """Conserved energy and canonical angular momentum of the relative motion."""

    H: float
    p_theta: float


@dataclass(frozen=True)
class BoundednessReport:
    lower_ok: bool
    upper_ok: bool
    marginal: bool
    detail: str


def eval_potential(p: PotentialParams, g: float) -> float:
    _check_radius(g)
    return p.value(g)


def magnetic_term(p_theta, g):
    """(p_theta/g - g/4)^2, the angular kinetic energy at fixed p_theta."""
    t = p_theta / g - 0.25 * g
    return t * t


def eval_effective(p: PotentialParams, c: MotionConstants, g: float) -> float:
    _check_radius(g)
    return magnetic_term(c.p_theta, g) + p.value(g)


def eval_force_radial(p: PotentialParams, c: MotionConstants, g: float) -> float:
    """-dV_eff/dg.

    The magnetic part differentiates to 2 p^2/g^3 - g/8; the cross term
    cancels.
    """
    _check_radius(g)
    return 2.0 * c.p_theta * c.p_theta / g ** 3 - 0.125 * g - p.slope(g)


def eval_gradient_cartesian(p: PotentialParams, x: float, y: float) -> tuple[float, float]:
    """Gradient of the bare potential V(sqrt(x^2 + y^2))."""
    g = math.hypot(x, y)
    if g == 0.0:
        raise ValueError("gradient undefined at the origin")
    k = p.slope(g) / g
    return k * x, k * y


def _conditions(p: PotentialParams, c: MotionConstants):
    """(lhs, rhs, label) pairs; each condition reads lhs > rhs."""
    pt2 = c.p_theta * c.p_theta
    if p.kind == "V1":
        return (p.B, -pt2, "B > -p_theta^2"), (p.Delta, -1.0 / 16.0, "Delta > -1/16")
    if p.kind == "V2":
        return (p.A, -pt2, "A > -p_theta^2"), (p.Delta, 0.0, "Delta > 0")
    return (p.A, 0.0, "A > 0"), (1.0 / 16.0, p.E, "E < 1/16")


def classify_boundedness(p: PotentialParams, c: MotionConstants,
                         tol_marginal: float = 1e-12) -> BoundednessReport:
    """Check the small-radius (lower) and large-radius (upper) confinement
    inequalities of the potential's asymptotic force."""
    lower, upper = _conditions(p, c)
    notes = []
    flags = []
    marginal = False
    for lhs, rhs, label in (lower, upper):
        ok = lhs > rhs
        flags.append(ok)
        if abs(lhs - rhs) <= tol_marginal:
            marginal = True
            notes.append(f"{label}: equality")
        else:
            notes.append(f"{label}: {'met' if ok else 'violated'}")
    return BoundednessReport(lower_ok=flags[0], upper_ok=flags[1],
                             marginal=marginal, detail="; ".join(notes))
