from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swimtrace.scenario import (NodeClass, ScenarioConfig, ScenarioError, cambridge_default, generate_world,
                                load_scenario, serialize_scenario)


def test_cambridge_defaults_match_table():
    cfg = cambridge_default()
    assert cfg.alpha == 0.9
    assert cfg.sim_duration == 950400.0
    assert (cfg.num_mobile, cfg.num_stationary) == (36, 18)
    assert (cfg.map_width, cfg.map_height) == (2000.0, 2000.0)
    assert cfg.wait_time_mean == 1800.0
    assert cfg.num_locations == 38
    assert cfg.neighborhood_radius == 100.0
    assert cfg.hour_of_day_offset == 0.0
    got = [(c.name, c.count, c.mobile, c.radio_range, c.beacon_interval) for c in cfg.node_classes]
    assert got == [("mobile", 36, True, 11.0, 600.0),
                   ("stationary-long", 4, False, 22.0, 120.0),
                   ("stationary-short-fast", 2, False, 11.0, 360.0),
                   ("stationary-short", 12, False, 11.0, 600.0)]
    assert sum(c.count for c in cfg.node_classes) == 54


def test_node_table_orders_mobile_first():
    radio, beacon = cambridge_default().node_table()
    assert len(radio) == 54
    assert np.all(radio[:36] == 11.0) and np.all(beacon[:36] == 600.0)
    assert np.all(radio[36:40] == 22.0) and np.all(beacon[36:40] == 120.0)
    assert np.all(beacon[40:42] == 360.0)


def test_load_overrides_and_defaults():
    cfg = load_scenario("alpha=0.9\nneighborhood_radius=100")
    assert cfg == cambridge_default()
    cfg = load_scenario("# comment\nalpha = 0.5  # trailing\n\nneighborhood_radius=150\n")
    assert cfg.alpha == 0.5 and cfg.neighborhood_radius == 150.0
    assert cfg.sim_duration == 950400.0


def test_empty_document_is_default():
    assert load_scenario("") == cambridge_default()


@pytest.mark.parametrize("doc, key, line", [
    ("alpha=1.5", "alpha", 1),
    ("\nalpha=abc", "alpha", 2),
    ("speed=3", "speed", 1),
    ("num_stationary=40", "num_stationary", 1),
    ("map_width=0", "map_width", 1),
    ("alpha=0.1\nalpha=0.2", "alpha", 2),
    ("node_class=a,3,walking,11,600", "node_class", 1),
    ("node_class=a,3,mobile,-1,600", "node_class", 1),
])
def test_load_errors_name_key_and_line(doc, key, line):
    with pytest.raises(ScenarioError) as info:
        load_scenario(doc)
    assert info.value.key == key
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_alpha_error_message():
    with pytest.raises(ScenarioError, match="alpha out of"):
        load_scenario("alpha=1.5")


def test_node_class_lines_replace_defaults():
    doc = "num_mobile=2\nnum_stationary=1\nnode_class=walkers,2,mobile,11,600\nnode_class=kiosk,1,stationary,22,120\n"
    cfg = load_scenario(doc)
    assert [c.name for c in cfg.node_classes] == ["walkers", "kiosk"]


def test_class_counts_must_cover_nodes():
    with pytest.raises(ScenarioError, match="node classes cover"):
        load_scenario("node_class=walkers,2,mobile,11,600")


def test_default_classes_resize_with_counts():
    cfg = load_scenario("num_mobile=0\nnum_stationary=3")
    assert [(c.name, c.count) for c in cfg.node_classes] == [("stationary-long", 3)]
    cfg = load_scenario("num_stationary=30\nnum_locations=40")
    assert [c.count for c in cfg.node_classes] == [36, 4, 2, 24]


def test_roundtrip_default():
    cfg = cambridge_default()
    assert load_scenario(serialize_scenario(cfg)) == cfg


@settings(max_examples=60, deadline=None)
@given(alpha=st.floats(0, 1), r0=st.floats(1e-3, 1e4), wait=st.floats(1e-3, 1e5),
       trip=st.floats(0, 100), m=st.integers(0, 5), s=st.integers(0, 4),
       extra=st.integers(0, 3), seed=st.integers(0, 2**64 - 1), offset=st.floats(0, 23.99))
def test_serialize_roundtrip(alpha, r0, wait, trip, m, s, extra, seed, offset):
    classes = []
    if m:
        classes.append(NodeClass("m", m, True, 11.5, 600.25))
    if s:
        classes.append(NodeClass("s", s, False, 22.0, 120.0))
    cfg = ScenarioConfig(num_mobile=m, num_stationary=s, num_locations=s + extra + 1, neighborhood_radius=r0,
                         alpha=alpha, wait_time_mean=wait, trip_duration=trip, rng_seed=seed,
                         hour_of_day_offset=offset, node_classes=tuple(classes))
    assert load_scenario(serialize_scenario(cfg)) == cfg


def test_generate_world_cambridge():
    cfg = cambridge_default()
    w = generate_world(cfg, np.random.default_rng(42))
    assert w.locations.shape == (38, 2)
    assert w.homes.shape == (36, 2)
    assert len(w.stationary_placement) == 18
    assert len(set(w.stationary_placement)) == 18


def test_generate_world_no_stationary():
    cfg = load_scenario("num_stationary=0")
    w = generate_world(cfg, np.random.default_rng(0))
    assert w.stationary_placement == ()
    assert w.stationary_positions.shape == (0, 2)


def test_generate_world_deterministic():
    cfg = cambridge_default()
    a = generate_world(cfg, np.random.default_rng(7))
    b = generate_world(cfg, np.random.default_rng(7))
    assert a == b
    assert a.locations.tobytes() == b.locations.tobytes()
    assert a != generate_world(cfg, np.random.default_rng(8))


def test_world_is_read_only():
    w = generate_world(cambridge_default(), np.random.default_rng(0))
    with pytest.raises(ValueError):
        w.locations[0, 0] = 1.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), width=st.floats(1, 5000), height=st.floats(1, 5000))
def test_world_points_inside_map(seed, width, height):
    cfg = replace(cambridge_default(), map_width=width, map_height=height)
    w = generate_world(cfg, np.random.default_rng(seed))
    for pts in (w.locations, w.homes):
        assert np.all(pts >= 0)
        assert np.all(pts[:, 0] <= width) and np.all(pts[:, 1] <= height)
