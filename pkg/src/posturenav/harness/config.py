"""Run configuration and its TOML representation."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import tomli

from ..curriculum.planner import PlannerConfig
from ..policy.cem import CEMConfig
from ..reward import RewardWeights
from ..sim.depth import CameraConfig
from ..sim.executor import ExecutorParams
from ..sim.geometry import BodyGeometry


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EpisodeSettings:
    timeout: float = 120.0  # s
    goal_radius: float = 0.2  # success threshold at evaluation
    train_goal_radius: float = 0.1  # arrival threshold while training
    visit_cell: float = 0.5
    posture_term: bool = True


@dataclass(frozen=True)
class CurriculumSettings:
    d0: float = 1.0
    step: float = 1.0
    M: int = 3
    gamma: float = 0.99
    segment_timeout: float = 60.0  # s
    arrival_radius: float = 0.1


@dataclass(frozen=True)
class TaskSettings:
    bands: tuple = ((5.0, 10.0), (10.0, 20.0), (20.0, 30.0))
    counts: tuple = (100, 100, 100)
    max_samples: int = 10_000


@dataclass(frozen=True)
class RunConfig:
    reward: RewardWeights = field(default_factory=RewardWeights)
    executor: ExecutorParams = field(default_factory=ExecutorParams)
    geometry: BodyGeometry = field(default_factory=BodyGeometry)
    episode: EpisodeSettings = field(default_factory=EpisodeSettings)
    curriculum: CurriculumSettings = field(default_factory=CurriculumSettings)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    camera: CameraConfig = field(default_factory=CameraConfig)
    tasks: TaskSettings = field(default_factory=TaskSettings)
    cem: CEMConfig = field(default_factory=CEMConfig)


def _coerce(default, value, where):
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected a boolean")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number")
        return float(value)
    if isinstance(default, tuple) or default is None:
        if value is None:
            return None
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected an array")
        return tuple(tuple(v) if isinstance(v, list) else v for v in value)
    raise ConfigError(f"{where}: unsupported value")


def config_from_dict(doc: dict) -> RunConfig:
    cfg = RunConfig()
    updates = {}
    for name, section in doc.items():
        if name not in {f.name for f in fields(RunConfig)}:
            raise ConfigError(f"unknown section [{name}]")
        if not isinstance(section, dict):
            raise ConfigError(f"[{name}] must be a table")
        current = getattr(cfg, name)
        known = {f.name for f in fields(current)}
        kw = {}
        for key, value in section.items():
            if key not in known:
                raise ConfigError(f"unknown key {name}.{key}")
            kw[key] = _coerce(getattr(current, key), value, f"{name}.{key}")
        try:
            updates[name] = replace(current, **kw)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"[{name}]: {e}") from e
    return replace(cfg, **updates)


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as f:
            doc = tomli.load(f)
    except tomli.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"{path}: {e}") from e
    return config_from_dict(doc)


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if v is None:
        return "[]"
    if isinstance(v, tuple):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(type(v))


def dump_config(cfg: RunConfig = RunConfig()) -> str:
    """TOML text listing every setting (the defaults when called bare)."""
    out = []
    for sec in fields(RunConfig):
        obj = getattr(cfg, sec.name)
        out.append(f"[{sec.name}]")
        for f in fields(obj):
            v = getattr(obj, f.name)
            if v is None:
                continue
            out.append(f"{f.name} = {_toml_value(v)}")
        out.append("")
    return "\n".join(out)
