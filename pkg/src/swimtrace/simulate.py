"""End-to-end run: world -> mobility -> contacts (-> beacon sampling)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contacts import detect_contacts, quantize_to_beacons
from .scenario import ScenarioConfig, World, generate_world
from .swim import MovementTimeline, run_mobility
from .traceio import ContactLog


def run_seeds(seed: int, replication: int = 0) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """Independent (world, mobility) seed sequences for one replication."""
    world_ss, mobility_ss = np.random.SeedSequence([seed, replication]).spawn(2)
    return world_ss, mobility_ss


@dataclass(frozen=True)
class SimulationRun:
    world: World
    timeline: MovementTimeline
    ground_truth: ContactLog
    observed: ContactLog

    @property
    def log(self) -> ContactLog:
        return self.observed


def simulate(cfg: ScenarioConfig, seed: int | None = None, replication: int = 0,
             backend: str | None = None) -> SimulationRun:
    seed = cfg.rng_seed if seed is None else seed
    world_ss, mobility_ss = run_seeds(seed, replication)
    world = generate_world(cfg, np.random.default_rng(world_ss))
    timeline = run_mobility(cfg, world, mobility_ss, backend=backend)
    radio, beacon = cfg.node_table()
    truth = detect_contacts(timeline, radio, backend=backend)
    observed = quantize_to_beacons(truth, beacon, cfg.sim_duration)
    return SimulationRun(world, timeline, truth, observed)


def simulate_log(cfg: ScenarioConfig, seed: int | None = None, replication: int = 0,
                 ground_truth: bool = False) -> ContactLog:
    run = simulate(cfg, seed, replication)
    return run.ground_truth if ground_truth else run.observed
