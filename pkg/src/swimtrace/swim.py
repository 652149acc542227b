"""SWIM mobility: destination weights, choice, and the event-driven run.

Each mobile node weights every location cell (and its own home) by a blend
of proximity to home and how many nodes it has met there::

    w(C) = alpha * decay(|home - C|) + (1 - alpha) * seen(C) / (1 + sum(seen))

and jumps to a cell drawn proportionally to ``w``, waits an exponential
time, and repeats. ``decay`` is flat inside the neighborhood radius and
falls as an inverse square outside it. Nodes in transit have no position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .scenario import ScenarioConfig, World

HOME = -1


def distance_decay(d, r0: float):
    """1 within ``r0`` of home, ``(r0 / d)**2`` beyond.

    Every cell inside the neighborhood counts as equally near, so a radius
    covering the whole map turns alpha=1 into uniform (random waypoint) choice.
    """
    out = (r0 / np.maximum(np.asarray(d, dtype=np.float64), r0)) ** 2
    return float(out) if out.ndim == 0 else out


@dataclass
class NodeState:
    node_id: int
    home: tuple[float, float]
    current_cell: int = HOME
    seen: dict[int, int] = field(default_factory=dict)
    phase: str = "waiting"
    phase_end: float = 0.0

    @property
    def seen_total(self) -> int:
        return sum(self.seen.values())


def _center(cell: int, node: NodeState, world: World) -> np.ndarray:
    return np.asarray(node.home, dtype=np.float64) if cell == HOME else world.locations[cell]


def cell_weight(node: NodeState, cell: int, world: World, alpha: float, r0: float = 100.0) -> float:
    home = np.asarray(node.home, dtype=np.float64)
    d = float(np.hypot(*(home - _center(cell, node, world))))
    seen_norm = node.seen.get(cell, 0) / (1.0 + node.seen_total)
    return alpha * distance_decay(d, r0) + (1.0 - alpha) * seen_norm


def decay_table(homes: np.ndarray, locations: np.ndarray, r0: float) -> np.ndarray:
    """``(M, L + 1)`` distance-decay matrix; the last column is each node's home (decay 1)."""
    m = len(homes)
    out = np.ones((m, len(locations) + 1))
    if m and len(locations):
        d = np.hypot(homes[:, None, 0] - locations[None, :, 0], homes[:, None, 1] - locations[None, :, 1])
        out[:, :-1] = distance_decay(d, r0)
    return out


def _seen_row(node: NodeState, n_cells: int) -> np.ndarray:
    row = np.zeros(n_cells + 1, dtype=np.int64)
    for c, v in node.seen.items():
        row[n_cells if c == HOME else c] = v
    return row


def choose_destination(node: NodeState, world: World, alpha: float, rng: np.random.Generator,
                       r0: float = 100.0) -> int:
    """Draw the next cell (or ``HOME``) with probability proportional to its weight.

    The node's current position is never a candidate. Consumes exactly one
    uniform from ``rng``, the same draw the simulation kernels use.
    """
    n_cells = len(world.locations)
    decay = decay_table(np.asarray([node.home], dtype=np.float64), world.locations, r0)[0]
    current = n_cells if node.current_cell == HOME else node.current_cell
    idx = kernels._fallback._choose(decay, _seen_row(node, n_cells), node.seen_total, current,
                                    alpha, rng.random())
    return HOME if idx == n_cells else idx


def update_seen(node: NodeState, cell: int, encountered: int) -> None:
    if encountered < 0:
        raise ValueError("encountered must be >= 0")
    node.seen[cell] = node.seen.get(cell, 0) + encountered


@dataclass(frozen=True)
class PresenceInterval:
    node_id: int
    position: tuple[float, float]
    t_start: float
    t_end: float


@dataclass(frozen=True, eq=False)
class MovementTimeline:
    """Flat, per-node time-ordered presence intervals of one run.

    ``place`` is the cell index, ``HOME`` for a mobile node's home, or
    ``-2`` for a stationary node's fixed spot.
    """

    node: np.ndarray
    place: np.ndarray
    x: np.ndarray
    y: np.ndarray
    t_start: np.ndarray
    t_end: np.ndarray
    num_nodes: int
    sim_duration: float

    def __len__(self) -> int:
        return len(self.node)

    def __eq__(self, other):
        if not isinstance(other, MovementTimeline):
            return NotImplemented
        return (self.num_nodes == other.num_nodes and self.sim_duration == other.sim_duration
                and all(np.array_equal(getattr(self, k), getattr(other, k))
                        for k in ("node", "place", "x", "y", "t_start", "t_end")))

    def intervals(self, node_id: int) -> list[PresenceInterval]:
        idx = np.flatnonzero(self.node == node_id)
        return [PresenceInterval(node_id, (float(self.x[i]), float(self.y[i])),
                                 float(self.t_start[i]), float(self.t_end[i])) for i in idx]

    def to_csv(self) -> str:
        lines = ["node_id,x,y,t_start,t_end"]
        for n, x, y, s, e in zip(self.node.tolist(), self.x.tolist(), self.y.tolist(),
                                 self.t_start.tolist(), self.t_end.tolist()):
            lines.append(f"{n},{x:.3f},{y:.3f},{s:.3f},{e:.3f}")
        return "\n".join(lines) + "\n"


def _initial_draws(cfg: ScenarioConfig) -> int:
    per_step = cfg.wait_time_mean + cfg.trip_duration
    expected = cfg.sim_duration / per_step
    return int(expected + 6.0 * math.sqrt(expected) + 16)


class _Streams:
    """Per-node wait and destination-uniform streams, extended on demand."""

    def __init__(self, seed_seq: np.random.SeedSequence, m: int, wait_mean: float, k: int):
        wait_ss, choice_ss = seed_seq.spawn(2)
        self.wait_gens = [np.random.default_rng(s) for s in wait_ss.spawn(m)]
        self.choice_gens = [np.random.default_rng(s) for s in choice_ss.spawn(m)]
        self.wait_mean = wait_mean
        self.waits = np.empty((m, 0))
        self.us = np.empty((m, 0))
        self.extend(k)

    def extend(self, k: int) -> None:
        extra = k - self.waits.shape[1]
        if extra <= 0:
            return
        new_w = np.array([g.standard_exponential(extra) * self.wait_mean for g in self.wait_gens]).reshape(-1, extra)
        new_u = np.array([g.random(extra) for g in self.choice_gens]).reshape(-1, extra)
        self.waits = np.hstack([self.waits, new_w])
        self.us = np.hstack([self.us, new_u])


def run_mobility(cfg: ScenarioConfig, world: World, seed_seq: np.random.SeedSequence | int | None = None,
                 backend: str | None = None) -> MovementTimeline:
    """Simulate all mobile nodes over ``[0, sim_duration]``.

    Every mobile node starts at home at t=0. Stationary nodes get one interval
    covering the whole run. Bit-reproducible for a fixed ``seed_seq``.
    """
    if seed_seq is None:
        seed_seq = np.random.SeedSequence(cfg.rng_seed)
    elif not isinstance(seed_seq, np.random.SeedSequence):
        seed_seq = np.random.SeedSequence(seed_seq)
    impl = kernels if backend is None else kernels.load(backend)
    m, s = cfg.num_mobile, cfg.num_stationary
    radio, _ = cfg.node_table()
    decay = decay_table(world.homes, world.locations, cfg.neighborhood_radius)
    stat_xy = world.stationary_positions.reshape(-1, 2)

    streams = _Streams(seed_seq, m, cfg.wait_time_mean, _initial_draws(cfg))
    while True:
        node, place, t0, t1, n = impl.mobility_loop(
            world.homes, world.locations, stat_xy, decay, radio[:m], float(cfg.alpha),
            float(cfg.trip_duration), float(cfg.sim_duration), streams.waits, streams.us)
        if n != kernels.EXHAUSTED:
            break
        streams.extend(2 * streams.waits.shape[1])

    node, place, t0, t1 = node[:n], place[:n], t0[:n], t1[:n]
    order = np.lexsort((t0, node))
    node, place, t0, t1 = node[order], place[order], t0[order], t1[order]
    xy = np.empty((n, 2))
    home_rows = place == HOME
    xy[home_rows] = world.homes[node[home_rows]]
    xy[~home_rows] = world.locations[place[~home_rows]] if n else xy[~home_rows]

    if s:
        node = np.concatenate([node, np.arange(m, m + s)])
        place = np.concatenate([place, np.full(s, -2)])
        xy = np.vstack([xy, stat_xy])
        t0 = np.concatenate([t0, np.zeros(s)])
        t1 = np.concatenate([t1, np.full(s, float(cfg.sim_duration))])
    return MovementTimeline(node.astype(np.int64), place.astype(np.int64), xy[:, 0].copy(), xy[:, 1].copy(),
                            t0, t1, cfg.num_nodes, float(cfg.sim_duration))
