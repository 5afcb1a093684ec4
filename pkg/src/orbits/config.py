"""Run configuration: JSON in, validated frozen dataclasses out, and back.

A config describes the system in one of two ways.  Either ``potential`` (and
``motion``) hold dimensionless values directly, or ``system`` +
``raw_potential`` give Gaussian-unit inputs, in which case ``motion`` and
``cm`` are read in physical units too and converted on load.  ``preset``
names a built-in dimensionless parameter set.  Sweep axes are always
dimensionless.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .potentials import PARAM_NAMES, MotionConstants, PotentialParams, make_params
from .presets import PRESETS, preset_config
from .units import PhysicalSystem, RawPotential, Scales, derive_scales, nondimensionalize

SCHEMA_VERSION = 1
MAX_GRID = 1_000_000

_TOP_KEYS = {"schema_version", "preset", "potential", "system", "raw_potential", "motion",
             "cm", "simulate", "period", "sweep"}


@dataclass(frozen=True)
class CMOptions:
    H_cm: float
    p_theta_cm: float
    theta0: float = 0.0
    n_points: int = 64


@dataclass(frozen=True)
class SimOptions:
    t_end: float = 200.0
    tol: float = 1e-10
    sample_dt: float = 0.01
    interval: int | None = None
    gamma0: float | None = None        # start radius; default is the inner turning point
    escape_radius: float | None = None  # default 10 * gamma(0)


@dataclass(frozen=True)
class PeriodOptions:
    tol: float = 1e-12
    Q_max: int = 64
    tol_rat: float = 1e-6
    interval: int | None = None


@dataclass(frozen=True)
class Axis:
    name: str
    start: float | None = None
    stop: float | None = None
    num: int | None = None
    values: tuple[float, ...] | None = None

    def size(self) -> int:
        return len(self.values) if self.values is not None else self.num

    def points(self) -> list[float]:
        if self.values is not None:
            return list(self.values)
        return [float(v) for v in np.linspace(self.start, self.stop, self.num)]


@dataclass(frozen=True)
class SweepOptions:
    axes: tuple[Axis, ...]
    workers: int = 1
    alpha: bool = True

    def size(self) -> int:
        return math.prod(a.size() for a in self.axes)


@dataclass(frozen=True)
class RunConfig:
    params: PotentialParams | None = None
    motion: MotionConstants | None = None
    system: PhysicalSystem | None = None
    raw_potential: RawPotential | None = None
    raw_motion: tuple[float, float] | None = None
    raw_cm: tuple[float, float] | None = None
    cm: CMOptions | None = None
    simulate: SimOptions = field(default_factory=SimOptions)
    period: PeriodOptions = field(default_factory=PeriodOptions)
    sweep: SweepOptions | None = None

    @property
    def physical(self) -> bool:
        return self.system is not None

    def require_potential(self):
        if self.params is None:
            raise ConfigError("this command needs a potential (potential, preset or raw_potential)")
        if self.motion is None:
            raise ConfigError("this command needs motion constants (motion.H, motion.p_theta)")
        return self.params, self.motion


# -- field helpers ------------------------------------------------------------


def _num(d, key, default=None, positive=False, required=False):
    if key not in d:
        if required:
            raise ConfigError(f"missing required field {key!r}")
        return default
    v = d[key]
    if v is None and not required:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"field {key!r} must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"field {key!r} must be finite")
    if positive and not v > 0:
        raise ConfigError(f"field {key!r} must be positive, got {v!r}")
    return v


def _int(d, key, default=None, minimum=None):
    if key not in d or d[key] is None:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"field {key!r} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"field {key!r} must be >= {minimum}, got {v}")
    return v


def _section(d, key, allowed):
    sec = d.get(key)
    if sec is None:
        return None
    if not isinstance(sec, dict):
        raise ConfigError(f"section {key!r} must be an object")
    extra = set(sec) - set(allowed)
    if extra:
        raise ConfigError(f"unknown fields in {key!r}: {sorted(extra)}")
    return sec


# -- parsing ------------------------------------------------------------------


def _parse_potential(sec):
    kind = sec.get("kind")
    if kind not in PARAM_NAMES:
        raise ConfigError(f"potential.kind must be one of {sorted(PARAM_NAMES)}, got {kind!r}")
    vals = sec.get("params", {})
    if not isinstance(vals, dict):
        raise ConfigError("potential.params must be an object")
    extra = set(vals) - set(PARAM_NAMES[kind])
    if extra:
        raise ConfigError(f"unknown {kind} parameters: {sorted(extra)}")
    return make_params(kind, **{k: _num(vals, k, 0.0) for k in PARAM_NAMES[kind]})


def _parse_axis(a, kind):
    if not isinstance(a, dict):
        raise ConfigError("sweep axes must be objects")
    extra = set(a) - {"name", "start", "stop", "num", "values"}
    if extra:
        raise ConfigError(f"unknown axis fields: {sorted(extra)}")
    name = a.get("name")
    allowed = set(PARAM_NAMES.get(kind, ())) | {"H", "p_theta"}
    if name not in allowed:
        raise ConfigError(f"sweep axis {name!r} is not one of {sorted(allowed)}")
    if "values" in a:
        if any(k in a for k in ("start", "stop", "num")):
            raise ConfigError(f"axis {name!r}: give either values or start/stop/num")
        vals = a["values"]
        if not isinstance(vals, list):
            raise ConfigError(f"axis {name!r}: values must be a list")
        if len(vals) > MAX_GRID:
            raise ConfigError(f"axis {name!r} has more than {MAX_GRID} points")
        return Axis(name=name, values=tuple(_num({"v": v}, "v") for v in vals))
    num = _int(a, "num", minimum=0)
    if num is None:
        raise ConfigError(f"axis {name!r}: missing num")
    if num > MAX_GRID:
        raise ConfigError(f"axis {name!r} has more than {MAX_GRID} points")
    return Axis(name=name, start=_num(a, "start", required=True),
                stop=_num(a, "stop", required=True), num=num)


def parse_config(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(d) - _TOP_KEYS
    if extra:
        raise ConfigError(f"unknown top-level fields: {sorted(extra)}")
    ver = d.get("schema_version")
    if ver != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {ver!r}")

    if "preset" in d:
        name = d["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        if "potential" in d or "system" in d or "raw_potential" in d:
            raise ConfigError("preset cannot be combined with potential/system/raw_potential")
        base = preset_config(name)
        merged = {k: v for k, v in d.items() if k != "preset"}
        merged["potential"] = base["potential"]
        merged.setdefault("motion", base["motion"])
        return parse_config(merged)

    has_dimless = "potential" in d
    has_phys = "system" in d or "raw_potential" in d
    if has_dimless and has_phys:
        raise ConfigError("give either potential (dimensionless) or system + raw_potential, not both")
    if has_phys and not ("system" in d and "raw_potential" in d):
        raise ConfigError("physical configs need both system and raw_potential")

    params = system = raw = None
    scales: Scales | None = None
    if has_dimless:
        params = _parse_potential(_section(d, "potential", {"kind", "params"}))
    elif has_phys:
        s = _section(d, "system", {"m", "q", "B_mag"})
        system = PhysicalSystem(m=_num(s, "m", required=True), q=_num(s, "q", required=True),
                                B_mag=_num(s, "B_mag", required=True))
        r = _section(d, "raw_potential", {"kind", "a", "b", "c", "d", "e"})
        try:
            raw = RawPotential(kind=r.get("kind"), a=_num(r, "a", 0.0), b=_num(r, "b", 0.0),
                               c=_num(r, "c", 0.0), d=_num(r, "d", 0.0), e=_num(r, "e"))
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        scales = derive_scales(system)
        params = nondimensionalize(raw, scales)

    motion = raw_motion = None
    m = _section(d, "motion", {"H", "p_theta"})
    if m is not None:
        H, pt = _num(m, "H", required=True), _num(m, "p_theta", 0.0)
        if scales is not None:
            raw_motion = (H, pt)
            H, pt = H / scales.energy_unit, pt / scales.angmom_unit
        motion = MotionConstants(H=H, p_theta=pt)

    cm = raw_cm = None
    c = _section(d, "cm", {"H_cm", "p_theta_cm", "theta0", "n_points"})
    if c is not None:
        Hc, pc = _num(c, "H_cm", required=True), _num(c, "p_theta_cm", 0.0)
        if scales is not None:
            raw_cm = (Hc, pc)
            Hc, pc = Hc / scales.energy_unit, pc / scales.angmom_unit
        cm = CMOptions(H_cm=Hc, p_theta_cm=pc, theta0=_num(c, "theta0", 0.0),
                       n_points=_int(c, "n_points", 64, minimum=1))

    sim = SimOptions()
    s = _section(d, "simulate", {"t_end", "tol", "sample_dt", "interval", "gamma0", "escape_radius"})
    if s is not None:
        sim = SimOptions(t_end=_num(s, "t_end", 200.0, positive=True),
                         tol=_num(s, "tol", 1e-10, positive=True),
                         sample_dt=_num(s, "sample_dt", 0.01, positive=True),
                         interval=_int(s, "interval", minimum=0),
                         gamma0=_num(s, "gamma0", positive=True),
                         escape_radius=_num(s, "escape_radius", positive=True))

    per = PeriodOptions()
    p = _section(d, "period", {"tol", "Q_max", "tol_rat", "interval"})
    if p is not None:
        per = PeriodOptions(tol=_num(p, "tol", 1e-12, positive=True),
                            Q_max=_int(p, "Q_max", 64, minimum=1),
                            tol_rat=_num(p, "tol_rat", 1e-6, positive=True),
                            interval=_int(p, "interval", minimum=0))

    sweep = None
    w = _section(d, "sweep", {"axes", "workers", "alpha"})
    if w is not None:
        axes = w.get("axes", [])
        if not isinstance(axes, list):
            raise ConfigError("sweep.axes must be a list")
        kind = params.kind if params is not None else None
        parsed = tuple(_parse_axis(a, kind) for a in axes)
        names = [a.name for a in parsed]
        if len(set(names)) != len(names):
            raise ConfigError("sweep axes must have distinct names")
        alpha = w.get("alpha", True)
        if not isinstance(alpha, bool):
            raise ConfigError("sweep.alpha must be true or false")
        sweep = SweepOptions(axes=parsed, workers=_int(w, "workers", 1, minimum=1), alpha=alpha)
        if sweep.size() > MAX_GRID:
            raise ConfigError(f"sweep grid has {sweep.size()} points; the limit is {MAX_GRID}")

    return RunConfig(params=params, motion=motion, system=system, raw_potential=raw,
                     raw_motion=raw_motion, raw_cm=raw_cm, cm=cm, simulate=sim, period=per,
                     sweep=sweep)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {str(path)!r}: {exc}") from None
    return parse_config(data)


# -- serialization ----------------------------------------------------------


def _drop_none(d):
    return {k: v for k, v in d.items() if v is not None}


def config_to_dict(cfg: RunConfig) -> dict:
    out = {"schema_version": SCHEMA_VERSION}
    if cfg.physical:
        out["system"] = asdict(cfg.system)
        out["raw_potential"] = _drop_none(asdict(cfg.raw_potential))
        if cfg.raw_motion is not None:
            out["motion"] = {"H": cfg.raw_motion[0], "p_theta": cfg.raw_motion[1]}
    elif cfg.params is not None:
        out["potential"] = {"kind": cfg.params.kind,
                            "params": {k: getattr(cfg.params, k) for k in PARAM_NAMES[cfg.params.kind]}}
    if not cfg.physical and cfg.motion is not None:
        out["motion"] = asdict(cfg.motion)
    if cfg.cm is not None:
        cm = asdict(cfg.cm)
        if cfg.raw_cm is not None:
            cm["H_cm"], cm["p_theta_cm"] = cfg.raw_cm
        out["cm"] = cm
    out["simulate"] = _drop_none(asdict(cfg.simulate))
    out["period"] = _drop_none(asdict(cfg.period))
    if cfg.sweep is not None:
        axes = []
        for a in cfg.sweep.axes:
            ax = _drop_none(asdict(a))
            if "values" in ax:
                ax["values"] = list(ax["values"])
            axes.append(ax)
        out["sweep"] = {"axes": axes, "workers": cfg.sweep.workers, "alpha": cfg.sweep.alpha}
    return out


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"
