from dataclasses import replace

import numpy as np
import pytest

from swimtrace import kernels
from swimtrace.scenario import NodeClass, cambridge_default


@pytest.fixture
def small_cfg():
    """12 nodes on a 500 m square for two days: dense enough to produce contacts."""
    classes = (NodeClass("mobile", 8, True, 11.0, 600.0),
               NodeClass("long", 2, False, 22.0, 120.0),
               NodeClass("short", 2, False, 11.0, 600.0))
    return replace(cambridge_default(), num_mobile=8, num_stationary=4, num_locations=10,
                   map_width=500.0, map_height=500.0, sim_duration=2 * 86400.0, node_classes=classes)


@pytest.fixture(params=kernels.available())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
