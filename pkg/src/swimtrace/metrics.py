"""Contact statistics: pair matrices, sorted pair curve, CCDFs, hourly counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .traceio import ContactLog

HOUR = 3600.0


class MetricError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ContactCountMatrix:
    counts: np.ndarray

    @property
    def n(self) -> int:
        return self.counts.shape[0]


@dataclass(frozen=True, eq=False)
class PairProbabilityMatrix:
    probs: np.ndarray

    @property
    def n(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True, eq=False)
class CcdfSeries:
    x: np.ndarray
    ccdf: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.ccdf.tolist()))


def contact_count_matrix(log: ContactLog) -> ContactCountMatrix:
    counts = np.zeros((log.num_nodes, log.num_nodes), dtype=np.int64)
    np.add.at(counts, (log.a, log.b), 1)
    counts += counts.T
    return ContactCountMatrix(counts)


def pair_probability(matrix: ContactCountMatrix) -> PairProbabilityMatrix:
    """Divide every count by the upper-triangle total (half the full sum)."""
    A = matrix.counts
    half_total = A.sum() / 2
    if half_total == 0:
        raise MetricError("no contacts in log")
    return PairProbabilityMatrix(A / half_total)


def sorted_pair_curve(P: PairProbabilityMatrix) -> np.ndarray:
    iu = np.triu_indices(P.n, k=1)
    return np.sort(P.probs[iu])


def pair_curve(log: ContactLog) -> np.ndarray:
    return sorted_pair_curve(pair_probability(contact_count_matrix(log)))


def empirical_ccdf(samples) -> CcdfSeries:
    """Fraction of samples strictly greater than each distinct sample value."""
    samples = np.sort(np.asarray(samples, dtype=np.float64))
    if len(samples) == 0:
        raise MetricError("no samples")
    x, first = np.unique(samples, return_index=True)
    upto = np.append(first[1:], len(samples))
    return CcdfSeries(x, (len(samples) - upto) / len(samples))


def ccdf_at(samples, x) -> np.ndarray:
    """Evaluate the empirical CCDF of ``samples`` at arbitrary points."""
    samples = np.sort(np.asarray(samples, dtype=np.float64))
    return (len(samples) - np.searchsorted(samples, x, side="right")) / len(samples)


def contact_durations(log: ContactLog) -> np.ndarray:
    if len(log) == 0:
        raise MetricError("no contacts in log")
    return log.durations


def contact_duration_ccdf(log: ContactLog) -> CcdfSeries:
    return empirical_ccdf(contact_durations(log))


def intercontact_times(log: ContactLog) -> np.ndarray:
    """Pooled gaps between consecutive contacts of each pair."""
    if len(log) == 0:
        raise MetricError("no contacts in log")
    order = np.lexsort((log.t_start, log.b, log.a))
    a, b, s, e = log.a[order], log.b[order], log.t_start[order], log.t_end[order]
    same = (a[1:] == a[:-1]) & (b[1:] == b[:-1])
    gaps = (s[1:] - e[:-1])[same]
    if len(gaps) == 0:
        raise MetricError("no node pair has two or more contacts")
    return gaps


def intercontact_ccdf(log: ContactLog) -> CcdfSeries:
    return empirical_ccdf(intercontact_times(log))


def _start_hours(log: ContactLog) -> np.ndarray:
    if len(log) and log.t_start.min() < 0:
        raise MetricError("negative contact start times; shift the trace with t0")
    return np.floor(log.t_start / HOUR).astype(np.int64)


def node_hour_counts(log: ContactLog) -> np.ndarray:
    """``(num_nodes, hours)`` contacts started per node per hour, both endpoints credited."""
    hours = max(1, math.ceil(log.span[1] / HOUR))
    h = _start_hours(log)
    if len(h) and h.max() >= hours:
        hours = int(h.max()) + 1
    counts = np.zeros((log.num_nodes, hours), dtype=np.int64)
    np.add.at(counts, (log.a, h), 1)
    np.add.at(counts, (log.b, h), 1)
    return counts


def contacts_per_hour_per_node(log: ContactLog) -> dict[int, int]:
    values, freq = np.unique(node_hour_counts(log), return_counts=True)
    return dict(zip(values.tolist(), freq.tolist()))


def contacts_by_hour_of_day(log: ContactLog, offset: float = 0.0) -> np.ndarray:
    if len(log) and log.t_start.min() < 0:
        raise MetricError("negative contact start times; shift the trace with t0")
    hod = np.floor(log.t_start / HOUR + offset).astype(np.int64) % 24
    return np.bincount(hod, minlength=24)


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


METRIC_FILES = ("pair_curve.csv", "contact_duration_ccdf.csv", "intercontact_ccdf.csv",
                "contacts_per_hour_per_node.csv", "hour_of_day.csv", "pair_matrix.csv")


def write_metric_csvs(log: ContactLog, outdir, hour_offset: float = 0.0) -> list[Path]:
    """Write the six metric CSVs for one log and return their paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    P = pair_probability(contact_count_matrix(log))
    curve = sorted_pair_curve(P)
    paths = [outdir / name for name in METRIC_FILES]
    _write_csv(paths[0], "pair_index,probability", enumerate(curve))
    _write_csv(paths[1], "seconds,ccdf", contact_duration_ccdf(log).points)
    try:
        inter = intercontact_ccdf(log).points
    except MetricError:
        inter = []
    _write_csv(paths[2], "seconds,ccdf", inter)
    _write_csv(paths[3], "contacts,frequency", sorted(contacts_per_hour_per_node(log).items()))
    _write_csv(paths[4], "hour,contacts", enumerate(contacts_by_hour_of_day(log, hour_offset)))
    _write_csv(paths[5], ",".join(f"node_{j}" for j in range(P.n)), P.probs)
    return paths
