"""Ground-truth contacts from a movement timeline, and beacon-sampled observation."""

from __future__ import annotations

import numpy as np

from . import kernels
from .swim import MovementTimeline
from .traceio import ContactLog, merge_pairs


def detect_contacts(timeline: MovementTimeline, radio_range, backend: str | None = None) -> ContactLog:
    """Maximal intervals where both nodes are at rest within ``max(range_a, range_b)``."""
    impl = kernels if backend is None else kernels.load(backend)
    radio = np.asarray(radio_range, dtype=np.float64)
    if len(radio) != timeline.num_nodes:
        raise ValueError(f"need {timeline.num_nodes} radio ranges, got {len(radio)}")
    order = np.lexsort((timeline.node, timeline.t_start))
    a, b, s, e = impl.contact_sweep(timeline.node[order], timeline.x[order], timeline.y[order],
                                    timeline.t_start[order], timeline.t_end[order], radio)
    return ContactLog.from_records(a, b, s, e, timeline.num_nodes, (0.0, timeline.sim_duration))


def _scan_hits(start, end, period):
    """First and last scan ``k * period`` inside ``[start, end]``; NaN where none."""
    first = np.ceil(start / period) * period
    last = np.floor(end / period) * period
    # guard against ceil/floor landing one period outside due to rounding
    first = np.where(first < start, first + period, first)
    last = np.where(last > end, last - period, last)
    ok = first <= end
    return np.where(ok, first, np.nan), np.where(ok, last, np.nan)


def quantize_to_beacons(log: ContactLog, beacon_interval, experiment_end: float,
                        merge: bool = True) -> ContactLog:
    """Observe each contact only through the two nodes' periodic scans.

    Node ``n`` scans at ``k * beacon_interval[n]``. A contact is seen iff a scan
    of either node falls inside it; the observation runs from the earliest such
    scan to the latest one plus that scanner's period (capped at
    ``experiment_end``). Observations of a pair closer than the larger of the
    two periods are merged unless ``merge`` is false.
    """
    period = np.asarray(beacon_interval, dtype=np.float64)
    if len(period) != log.num_nodes:
        raise ValueError(f"need {log.num_nodes} beacon intervals, got {len(period)}")
    if np.any(period <= 0):
        raise ValueError("beacon intervals must be > 0")
    pa, pb = period[log.a], period[log.b]
    fa, la = _scan_hits(log.t_start, log.t_end, pa)
    fb, lb = _scan_hits(log.t_start, log.t_end, pb)
    seen = ~(np.isnan(fa) & np.isnan(fb))
    first = np.fmin(fa, fb)
    # latest scan wins; on a tie the longer period extends further
    end_a = np.where(np.isnan(la), -np.inf, la + pa)
    end_b = np.where(np.isnan(lb), -np.inf, lb + pb)
    la_ = np.where(np.isnan(la), -np.inf, la)
    lb_ = np.where(np.isnan(lb), -np.inf, lb)
    last_end = np.where(la_ > lb_, end_a, np.where(lb_ > la_, end_b, np.maximum(end_a, end_b)))
    last_end = np.minimum(last_end, experiment_end)

    a, b = log.a[seen], log.b[seen]
    s, e = first[seen], last_end[seen]
    span = (min(log.span[0], 0.0), max(log.span[1], experiment_end))
    if not merge:
        return ContactLog(*_by_start(a, b, s, e), log.num_nodes, span)
    a, b, s, e = merge_pairs(a, b, s, e, np.maximum(pa, pb)[seen])
    return ContactLog.from_records(a, b, s, e, log.num_nodes, span)


def _by_start(a, b, s, e):
    order = np.lexsort((e, b, a, s))
    return a[order], b[order], s[order], e[order]
