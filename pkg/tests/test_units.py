import math
import random

import pytest

from orbits.errors import ConfigError
from orbits.units import (PhysicalSystem, RawPotential, derive_scales, nondimensionalize,
                          redimensionalize, redimensionalize_potential)


def test_unit_system_is_identity():
    s = derive_scales(PhysicalSystem(1.0, 1.0, 1.0))
    assert (s.length, s.frequency, s.energy_unit, s.angmom_unit) == (1.0, 1.0, 1.0, 1.0)


def test_cube_root_length():
    s = derive_scales(PhysicalSystem(8.0, 1.0, 1.0))
    assert s.length == pytest.approx(2.0, rel=1e-15)
    assert s.frequency == 0.125


def test_mixed_scales():
    s = derive_scales(PhysicalSystem(1.0, 2.0, 3.0))
    assert s.length == pytest.approx(3.0 ** (-2.0 / 3.0), rel=1e-15)
    assert s.frequency == 6.0
    assert s.energy_unit == pytest.approx(4.0 * 3.0 ** (2.0 / 3.0), rel=1e-15)
    assert s.angmom_unit == pytest.approx(1.0 * 6.0 * s.length ** 2, rel=1e-15)


@pytest.mark.parametrize("m,q,b", [(0.0, 1.0, 1.0), (-1.0, 1.0, 1.0), (1.0, 0.0, 1.0),
                                   (1.0, 1.0, 0.0), (1.0, 1.0, -2.0), (math.nan, 1.0, 1.0)])
def test_invalid_system_rejected(m, q, b):
    with pytest.raises(ConfigError):
        PhysicalSystem(m, q, b)


def test_negative_charge_allowed():
    s = derive_scales(PhysicalSystem(1.0, -1.0, 1.0))
    assert s.frequency == -1.0
    assert s.energy_unit == 1.0


def test_v1_zero_coefficients():
    s = derive_scales(PhysicalSystem(3.0, 1.5, 0.7))
    p = nondimensionalize(RawPotential("V1", s.charge_sq, 0.0, 0.0, 0.0), s)
    assert (p.B, p.Gamma, p.Delta) == (0.0, 0.0, 0.0)


def test_v1_unit_scales():
    s = derive_scales(PhysicalSystem(1.0, 1.0, 1.0))
    p = nondimensionalize(RawPotential("V1", 1.0, 1.0, 1.0, 1.0), s)
    assert (p.B, p.Gamma, p.Delta) == (1.0, 1.0, 1.0)


def test_v1_rejects_wrong_coulomb_coefficient():
    s = derive_scales(PhysicalSystem(1.0, 1.0, 1.0))
    with pytest.raises(ConfigError):
        nondimensionalize(RawPotential("V1", 2.0, 0.0, 0.0, 0.0), s)


def test_v3_a_coefficient():
    # q=1 and l_B=2 need m / B^2 = 8
    s = derive_scales(PhysicalSystem(8.0, 1.0, 1.0))
    p = nondimensionalize(RawPotential("V3", 8.0, 0.0, 0.0, 0.0, 0.0), s)
    assert p.A == pytest.approx(1.0, rel=1e-15)


def test_e_only_for_v3():
    with pytest.raises(ConfigError):
        RawPotential("V3", 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ConfigError):
        RawPotential("V2", 1.0, 1.0, 1.0, 1.0, e=1.0)
    with pytest.raises(ConfigError):
        RawPotential("V4", 1.0, 1.0, 1.0, 1.0)


def test_redimensionalize_examples():
    unit = derive_scales(PhysicalSystem(1.0, 1.0, 1.0))
    assert redimensionalize(1.0, "length", unit) == 1.0
    # omega_c = 4: q B / m = 4
    s = derive_scales(PhysicalSystem(1.0, 4.0, 1.0))
    assert redimensionalize(2.0, "time", s) == 0.5
    # q = 2, l_B = 2 (m / B^2 = 8)
    s = derive_scales(PhysicalSystem(8.0, 2.0, 1.0))
    assert redimensionalize(3.0, "energy", s) == pytest.approx(6.0, rel=1e-15)
    with pytest.raises(ConfigError):
        redimensionalize(1.0, "mass", s)


def test_coefficient_round_trip():
    rng = random.Random(7)
    for _ in range(1000):
        sys_ = PhysicalSystem(10 ** rng.uniform(-3, 3), 10 ** rng.uniform(-3, 3), 10 ** rng.uniform(-3, 3))
        s = derive_scales(sys_)
        kind = rng.choice(["V1", "V2", "V3"])
        vals = [10 ** rng.uniform(-3, 3) for _ in range(5)]
        if kind == "V1":
            raw = RawPotential("V1", s.charge_sq, *vals[:3])
        elif kind == "V2":
            raw = RawPotential("V2", *vals[:4])
        else:
            raw = RawPotential("V3", *vals)
        back = redimensionalize_potential(nondimensionalize(raw, s), s)
        for name in "abcde":
            want, got = getattr(raw, name), getattr(back, name)
            if want is None:
                assert got is None
            else:
                assert got == pytest.approx(want, rel=1e-14)


def test_scales_are_deterministic():
    sys_ = PhysicalSystem(2.5, 0.3, 7.0)
    assert derive_scales(sys_) == derive_scales(sys_)
