import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swimtrace.calibrate import (
    RESAMPLE_POINTS, alpha_sweep, curve_distance, resample, thumb_rule_features, write_sweep_report,
)
from swimtrace.metrics import MetricError, pair_curve
from swimtrace.simulate import simulate_log


def test_features_example():
    f = thumb_rule_features([0, 0, 0, 0, 0, 0.1, 0.1, 0.1, 0.2, 0.5])
    assert f.zero_fraction == 0.5
    assert f.tail_max == 0.5
    assert f.knee_index_fraction == 0.9
    assert f.tail_slope_ratio == pytest.approx(12.0)


def test_flat_curve_features():
    f = thumb_rule_features([0.1] * 10)
    assert f.knee_index_fraction == 1.0 and f.tail_slope_ratio == 0.0 and f.zero_fraction == 0.0


def test_step_over_flat_base_is_infinite_ratio():
    f = thumb_rule_features([0.0] * 9 + [1.0])
    assert math.isinf(f.tail_slope_ratio)


def test_short_curve_rejected():
    with pytest.raises(MetricError, match="too short"):
        thumb_rule_features([0.1] * 9)


def test_distance_examples():
    assert curve_distance([0, 0], [0.5, 0.5]) == 0.5
    assert curve_distance([0.1, 0.2, 0.3], [0.1, 0.2, 0.3]) == 0.0


def test_resample_endpoints_and_length():
    r = resample([1.0, 2.0, 3.0])
    assert len(r) == RESAMPLE_POINTS
    assert r[0] == 1.0 and r[500] == 2.0 and r[-1] == 3.0
    assert np.all(np.diff(r) >= 0)
    with pytest.raises(MetricError):
        resample([])


curves = st.lists(st.floats(0, 1), min_size=1, max_size=60).map(sorted)


@settings(max_examples=100, deadline=None)
@given(curves, curves, curves)
def test_distance_is_a_pseudometric(a, b, c):
    assert curve_distance(a, a) == 0.0
    assert curve_distance(a, b) == curve_distance(b, a)
    assert curve_distance(a, c) <= curve_distance(a, b) + curve_distance(b, c) + 1e-12


def test_singleton_sweep_recommends_that_alpha(small_cfg, tmp_path):
    target = pair_curve(simulate_log(small_cfg, 99, 0, False))
    res = alpha_sweep(small_cfg, target, [0.3], replications=2)
    assert res.recommended_alpha == 0.3
    assert res.mean_curves.shape == (1, RESAMPLE_POINTS)
    paths = write_sweep_report(res, tmp_path)
    assert [p.name for p in paths] == ["sweep_report.csv", "pair_curve_alpha_0.3.csv"]
    lines = paths[0].read_text().splitlines()
    assert lines[0] == "alpha,distance,zero_fraction,tail_max,knee_index_fraction,tail_slope_ratio"
    assert lines[1].startswith("0.3,")


def test_sweep_deterministic_and_self_match(small_cfg):
    target = pair_curve(simulate_log(small_cfg.with_alpha(0.8), 5, 0, False))
    r1 = alpha_sweep(small_cfg, target, [0.2, 0.8], replications=1, seed=5)
    r2 = alpha_sweep(small_cfg, target, [0.2, 0.8], replications=1, seed=5)
    assert np.array_equal(r1.distances, r2.distances)
    assert np.array_equal(r1.mean_curves, r2.mean_curves)
    # replication 0 at seed 5 reproduces the target exactly
    assert r1.distances[1] == 0.0 and r1.recommended_alpha == 0.8


def test_sweep_ties_go_to_smaller_alpha(small_cfg):
    target = pair_curve(simulate_log(small_cfg, 1, 0, False))
    res = alpha_sweep(small_cfg, target, [0.5, 0.5], replications=1)
    assert res.recommended_alpha == 0.5


@pytest.mark.parametrize("kwargs", [dict(alphas=[]), dict(alphas=[1.5]), dict(replications=0)])
def test_sweep_rejects_bad_arguments(small_cfg, kwargs):
    with pytest.raises(ValueError):
        alpha_sweep(small_cfg, [0.1, 0.2], **kwargs)
