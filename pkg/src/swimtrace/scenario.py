"""Scenario configuration for SWIM runs.

A scenario is a frozen :class:`ScenarioConfig` plus the node classes it
contains. Configs are read from and written to a line-oriented
``key=value`` document::

    # Cambridge-like run with a wider neighborhood
    alpha=0.9
    neighborhood_radius=150
    node_class=mobile,36,mobile,11,600

Node ids are assigned class by class: all mobile classes first (in
document order), then all stationary classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

DAY = 86400.0

SCALAR_KEYS = (
    "num_mobile",
    "num_stationary",
    "map_width",
    "map_height",
    "num_locations",
    "neighborhood_radius",
    "alpha",
    "wait_time_mean",
    "trip_duration",
    "sim_duration",
    "rng_seed",
    "hour_of_day_offset",
)
_INT_KEYS = {"num_mobile", "num_stationary", "num_locations", "rng_seed"}


class ScenarioError(ValueError):
    """Invalid scenario document or config value."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class NodeClass:
    name: str
    count: int
    mobile: bool
    radio_range: float
    beacon_interval: float

    def __post_init__(self):
        if self.count < 0:
            raise ScenarioError(f"node class {self.name!r}: count must be >= 0", "node_class")
        if not self.radio_range > 0:
            raise ScenarioError(f"node class {self.name!r}: radio_range must be > 0", "node_class")
        if not self.beacon_interval > 0:
            raise ScenarioError(f"node class {self.name!r}: beacon_interval must be > 0", "node_class")


def _default_classes(num_mobile: int = 36, num_stationary: int = 18) -> tuple[NodeClass, ...]:
    # stationary iMotes fill long -> short-fast -> short; the last class absorbs any remainder
    classes = []
    if num_mobile:
        classes.append(NodeClass("mobile", num_mobile, True, 11.0, 600.0))
    template = [("stationary-long", 4, 22.0, 120.0), ("stationary-short-fast", 2, 11.0, 360.0),
                ("stationary-short", 12, 11.0, 600.0)]
    left = num_stationary
    for i, (name, count, radio, beacon) in enumerate(template):
        take = left if i == len(template) - 1 else min(count, left)
        if take:
            classes.append(NodeClass(name, take, False, radio, beacon))
        left -= take
    return tuple(classes)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full parameterization of one SWIM run (lengths in meters, times in seconds)."""

    num_mobile: int = 36
    num_stationary: int = 18
    map_width: float = 2000.0
    map_height: float = 2000.0
    num_locations: int = 38
    neighborhood_radius: float = 100.0
    alpha: float = 0.9
    wait_time_mean: float = 1800.0
    trip_duration: float = 1.0
    sim_duration: float = 11 * DAY
    rng_seed: int = 1
    node_classes: tuple[NodeClass, ...] = field(default_factory=_default_classes)
    hour_of_day_offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "node_classes", tuple(self.node_classes))
        validate(self)

    @property
    def num_nodes(self) -> int:
        return self.num_mobile + self.num_stationary

    def node_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-node ``(radio_range, beacon_interval)`` arrays indexed by node id."""
        ordered = [c for c in self.node_classes if c.mobile] + [c for c in self.node_classes if not c.mobile]
        radio = np.concatenate([np.full(c.count, c.radio_range) for c in ordered] or [np.empty(0)])
        beacon = np.concatenate([np.full(c.count, c.beacon_interval) for c in ordered] or [np.empty(0)])
        return radio, beacon

    def with_alpha(self, alpha: float) -> ScenarioConfig:
        return replace(self, alpha=alpha)


def validate(cfg: ScenarioConfig) -> None:
    if not 0.0 <= cfg.alpha <= 1.0:
        raise ScenarioError(f"alpha out of [0,1]: {cfg.alpha}", "alpha")
    for key in ("map_width", "map_height", "neighborhood_radius", "wait_time_mean", "sim_duration"):
        if not getattr(cfg, key) > 0:
            raise ScenarioError(f"must be > 0, got {getattr(cfg, key)}", key)
    if not cfg.trip_duration >= 0:
        raise ScenarioError(f"must be >= 0, got {cfg.trip_duration}", "trip_duration")
    for key in ("num_mobile", "num_stationary", "num_locations"):
        if getattr(cfg, key) < 0:
            raise ScenarioError("must be >= 0", key)
    if cfg.num_stationary > cfg.num_locations:
        raise ScenarioError(
            f"{cfg.num_stationary} stationary nodes need at least as many locations "
            f"(num_locations={cfg.num_locations})", "num_stationary")
    if cfg.num_mobile > 0 and cfg.num_locations == 0:
        raise ScenarioError("mobile nodes need at least one location", "num_locations")
    if not 0.0 <= cfg.hour_of_day_offset < 24.0:
        raise ScenarioError(f"must be in [0,24), got {cfg.hour_of_day_offset}", "hour_of_day_offset")
    if not 0 <= cfg.rng_seed < 2**64:
        raise ScenarioError("must be a 64-bit unsigned integer", "rng_seed")
    mobile = sum(c.count for c in cfg.node_classes if c.mobile)
    stationary = sum(c.count for c in cfg.node_classes if not c.mobile)
    if mobile != cfg.num_mobile or stationary != cfg.num_stationary:
        raise ScenarioError(
            f"node classes cover {mobile} mobile + {stationary} stationary nodes, "
            f"config has {cfg.num_mobile} + {cfg.num_stationary}", "node_class")


def cambridge_default() -> ScenarioConfig:
    """36 students + 18 iMotes on a 2 km square for 11 days, alpha 0.9."""
    return ScenarioConfig()


def _parse_scalar(key: str, raw: str, lineno: int):
    try:
        if key in _INT_KEYS:
            return int(raw, 0)
        return float(raw)
    except ValueError:
        raise ScenarioError(f"cannot parse value {raw!r}", key, lineno) from None


def _parse_class(raw: str, lineno: int) -> NodeClass:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 5:
        raise ScenarioError("expected <name>,<count>,<mobile|stationary>,<radio_range>,<beacon_interval>",
                            "node_class", lineno)
    name, count, kind, radio, beacon = parts
    if kind not in ("mobile", "stationary"):
        raise ScenarioError(f"kind must be mobile or stationary, got {kind!r}", "node_class", lineno)
    try:
        return NodeClass(name, int(count), kind == "mobile", float(radio), float(beacon))
    except ScenarioError as exc:
        raise ScenarioError(str(exc).split(": ", 1)[-1], "node_class", lineno) from None
    except ValueError:
        raise ScenarioError(f"cannot parse node class {raw!r}", "node_class", lineno) from None


def load_scenario(text: str) -> ScenarioConfig:
    """Parse a ``key=value`` config document; missing keys keep the Cambridge defaults.

    When no ``node_class`` line is present the default classes are resized to the
    document's node counts.
    """
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    classes: list[NodeClass] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"expected key=value, got {line!r}", line=lineno)
        key, raw = (s.strip() for s in line.split("=", 1))
        if key == "node_class":
            classes.append(_parse_class(raw, lineno))
            continue
        if key not in SCALAR_KEYS:
            raise ScenarioError("unknown key", key, lineno)
        if key in values:
            raise ScenarioError("duplicate key", key, lineno)
        values[key] = _parse_scalar(key, raw, lineno)
        lines[key] = lineno

    base = cambridge_default()
    num_mobile = values.get("num_mobile", base.num_mobile)
    num_stationary = values.get("num_stationary", base.num_stationary)
    node_classes = tuple(classes) if classes else _default_classes(num_mobile, num_stationary)
    try:
        return replace(base, node_classes=node_classes, **values)
    except ScenarioError as exc:
        if exc.key is None or exc.line is not None:
            raise
        line = lines.get(exc.key)
        raise ScenarioError(str(exc).split(": ", 1)[-1], exc.key, line) from None


def serialize_scenario(cfg: ScenarioConfig) -> str:
    out = []
    for key in SCALAR_KEYS:
        out.append(f"{key}={getattr(cfg, key)!r}")
    for c in cfg.node_classes:
        kind = "mobile" if c.mobile else "stationary"
        out.append(f"node_class={c.name},{c.count},{kind},{c.radio_range!r},{c.beacon_interval!r}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True, eq=False)
class World:
    """Random geometry of one run: location cells, homes, stationary placement."""

    locations: np.ndarray          # (num_locations, 2)
    homes: np.ndarray              # (num_mobile, 2)
    stationary_placement: tuple[int, ...]

    def __post_init__(self):
        for arr in (self.locations, self.homes):
            arr.flags.writeable = False

    def __eq__(self, other):
        if not isinstance(other, World):
            return NotImplemented
        return (np.array_equal(self.locations, other.locations)
                and np.array_equal(self.homes, other.homes)
                and self.stationary_placement == other.stationary_placement)

    @property
    def stationary_positions(self) -> np.ndarray:
        idx = np.asarray(self.stationary_placement, dtype=np.intp)
        return self.locations[idx] if len(idx) else np.empty((0, 2))


def generate_world(cfg: ScenarioConfig, rng: np.random.Generator) -> World:
    size = np.array([cfg.map_width, cfg.map_height])
    locations = rng.uniform(0.0, 1.0, size=(cfg.num_locations, 2)) * size
    homes = rng.uniform(0.0, 1.0, size=(cfg.num_mobile, 2)) * size
    placement = rng.choice(cfg.num_locations, size=cfg.num_stationary, replace=False)
    return World(locations, homes, tuple(int(i) for i in placement))


def class_names(cfg: ScenarioConfig) -> Iterable[str]:
    for c in [c for c in cfg.node_classes if c.mobile] + [c for c in cfg.node_classes if not c.mobile]:
        yield from [c.name] * c.count


__all__ = [
    "NodeClass", "ScenarioConfig", "ScenarioError", "World", "cambridge_default",
    "generate_world", "load_scenario", "serialize_scenario", "validate",
]
