"""Named parameter sets for the reference orbits.

Every preset uses ``p_theta = 0`` and ``H = 10`` unless noted.  Where only an
inequality is known (``A..Delta << E < 1/16``, ``E > 1/16``) a concrete value
was picked once and kept fixed.
"""

from __future__ import annotations

from .potentials import MotionConstants, make_params

BASE_MOTION = {"H": 10.0, "p_theta": 0.0}

PRESETS = {
    "v1-equal": ("V1", {"B": 1.0, "Gamma": 1.0, "Delta": 1.0}, BASE_MOTION),
    "v1-attractive": ("V1", {"B": 1.0, "Gamma": 5.0, "Delta": 5.0}, BASE_MOTION),
    "v1-repulsive": ("V1", {"B": 5.0, "Gamma": 1.0, "Delta": 1.0}, BASE_MOTION),
    "v2-equal": ("V2", {"A": 1.0, "B": 1.0, "Gamma": 1.0, "Delta": 1.0}, BASE_MOTION),
    "v2-repulsive": ("V2", {"A": 5.0, "B": 1.0, "Gamma": 1.0, "Delta": 1.0}, BASE_MOTION),
    "v2-attractive": ("V2", {"A": 1.0, "B": 5.0, "Gamma": 5.0, "Delta": 5.0}, BASE_MOTION),
    "v3-bounded": ("V3", {"A": 1e-3, "B": 1e-3, "Gamma": 1e-3, "Delta": 1e-3, "E": 0.05},
                   BASE_MOTION),
    "v3-marginal": ("V3", {"A": 1.0, "B": 1.0, "Gamma": 1.0, "Delta": 1.0, "E": 0.0625},
                    BASE_MOTION),
    # barely above 1/16: gamma(200) stays near 2e3, where doubles still resolve
    # the energy to 1e-8 (E = 0.07 reaches 1e16 by t = 200)
    "v3-escape": ("V3", {"A": 1.0, "B": 1.0, "Gamma": 1.0, "Delta": 1.0, "E": 0.06252},
                  BASE_MOTION),
    # two wells; H=10 sits above the barrier, H=7 below it
    "v3-double-well": ("V3", {"A": 3.0, "B": -6.0, "Gamma": -6.0, "Delta": 16.0, "E": -0.2},
                       BASE_MOTION),
    "v3-double-well-low": ("V3", {"A": 3.0, "B": -6.0, "Gamma": -6.0, "Delta": 16.0, "E": -0.2},
                           {"H": 7.0, "p_theta": 0.0}),
}


def preset(name: str):
    """(params, MotionConstants) for a named preset."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    kind, values, motion = PRESETS[name]
    return make_params(kind, **values), MotionConstants(**motion)


def preset_config(name: str) -> dict:
    """A complete dimensionless config dict for ``name``."""
    kind, values, motion = PRESETS[name]
    return {"schema_version": 1,
            "potential": {"kind": kind, "params": dict(values)},
            "motion": dict(motion)}
