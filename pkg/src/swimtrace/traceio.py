"""Contact logs and the whitespace-delimited trace format.

One contact per line, ``a b t_start t_end``, times in seconds relative to
the experiment start. Extra trailing columns are ignored so CRAWDAD-style
dumps load unmodified. Files written here start with a
``# nodes=N span=t0,t1`` header; when present on input, ids are taken as
already dense and the header's node count and span are kept.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np


class TraceError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class ContactRecord:
    a: int
    b: int
    t_start: float
    t_end: float


def merge_pairs(a, b, start, end, gap: float | np.ndarray = 0.0):
    """Canonically orient, then merge per-pair records separated by ``<= gap``.

    ``gap`` may be a per-record array (the allowance between a record and its
    predecessor of the same pair). Output is sorted by ``(a, b, start)``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    start = np.asarray(start, dtype=np.float64)
    end = np.asarray(end, dtype=np.float64)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    if len(lo) == 0:
        return lo, hi, start, end
    order = np.lexsort((end, start, hi, lo))
    lo, hi, start, end = lo[order], hi[order], start[order], end[order]
    gap = np.broadcast_to(np.asarray(gap, dtype=np.float64), lo.shape)[order] if np.ndim(gap) else gap
    out_lo, out_hi, out_s, out_e = [], [], [], []
    g_scalar = np.ndim(gap) == 0
    for i, (x, y, s, e) in enumerate(zip(lo.tolist(), hi.tolist(), start.tolist(), end.tolist())):
        g = gap if g_scalar else gap[i]
        if out_lo and out_lo[-1] == x and out_hi[-1] == y and s - out_e[-1] <= g:
            if e > out_e[-1]:
                out_e[-1] = e
            continue
        out_lo.append(x)
        out_hi.append(y)
        out_s.append(s)
        out_e.append(e)
    return (np.array(out_lo, dtype=np.int64), np.array(out_hi, dtype=np.int64),
            np.array(out_s, dtype=np.float64), np.array(out_e, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class ContactLog:
    """Normalized contact intervals over nodes ``0..num_nodes-1``.

    Records are canonically oriented (``a < b``), merged per pair, and
    sorted by ``(t_start, a, b)``. Use :meth:`from_records` to build one from
    raw intervals.
    """

    a: np.ndarray
    b: np.ndarray
    t_start: np.ndarray
    t_end: np.ndarray
    num_nodes: int
    span: tuple[float, float]

    @classmethod
    def from_records(cls, a, b, t_start, t_end, num_nodes: int | None = None,
                     span: tuple[float, float] | None = None) -> ContactLog:
        a, b, s, e = merge_pairs(a, b, t_start, t_end)
        if np.any(a == b):
            raise TraceError("self-contact")
        if np.any(e < s):
            raise TraceError("t_end < t_start")
        order = np.lexsort((e, b, a, s))
        a, b, s, e = a[order], b[order], s[order], e[order]
        if num_nodes is None:
            num_nodes = int(b.max()) + 1 if len(b) else 0
        if len(a) and (a.min() < 0 or b.max() >= num_nodes):
            raise TraceError(f"node id outside [0, {num_nodes})")
        if span is None:
            span = (float(s.min()), float(e.max())) if len(s) else (0.0, 0.0)
        elif len(s) and (s.min() < span[0] or e.max() > span[1]):
            raise TraceError(f"records outside span {span}")
        return cls(a, b, s, e, int(num_nodes), (float(span[0]), float(span[1])))

    def __len__(self) -> int:
        return len(self.a)

    def __eq__(self, other):
        if not isinstance(other, ContactLog):
            return NotImplemented
        return (self.num_nodes == other.num_nodes and self.span == other.span
                and all(np.array_equal(getattr(self, k), getattr(other, k)) for k in ("a", "b", "t_start", "t_end")))

    @property
    def records(self) -> list[ContactRecord]:
        return [ContactRecord(*r) for r in zip(self.a.tolist(), self.b.tolist(),
                                               self.t_start.tolist(), self.t_end.tolist())]

    @property
    def durations(self) -> np.ndarray:
        return self.t_end - self.t_start

    def shifted(self, t0: float) -> ContactLog:
        return ContactLog(self.a, self.b, self.t_start - t0, self.t_end - t0, self.num_nodes,
                          (self.span[0] - t0, self.span[1] - t0))


_HEADER = re.compile(r"#\s*nodes=(\d+)\s+span=([^,\s]+),(\S+)")


def parse_contact_trace(text: str) -> ContactLog:
    header = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _HEADER.match(stripped)
            if m and header is None and not rows:
                header = (int(m.group(1)), (float(m.group(2)), float(m.group(3))))
            continue
        parts = stripped.split()
        if len(parts) < 4:
            raise TraceError(f"expected 'a b t_start t_end', got {stripped!r}", lineno)
        raw_a, raw_b = parts[0], parts[1]
        try:
            t0, t1 = float(parts[2]), float(parts[3])
        except ValueError:
            raise TraceError(f"unparsable time in {stripped!r}", lineno) from None
        if not (np.isfinite(t0) and np.isfinite(t1)):
            raise TraceError("non-finite time", lineno)
        if raw_a == raw_b:
            raise TraceError(f"self-contact of node {raw_a}", lineno)
        if t1 < t0:
            raise TraceError(f"t_end {t1} < t_start {t0}", lineno)
        rows.append((raw_a, raw_b, t0, t1, lineno))

    if header is not None:
        num_nodes, span = header
        ids = []
        for raw_a, raw_b, *_, lineno in rows:
            try:
                x, y = int(raw_a), int(raw_b)
            except ValueError:
                raise TraceError("non-integer node id in a headered trace", lineno) from None
            if not (0 <= x < num_nodes and 0 <= y < num_nodes):
                raise TraceError(f"node id outside [0, {num_nodes})", lineno)
            ids.append((x, y))
    else:
        remap: dict[str, int] = {}
        ids = [(remap.setdefault(ra, len(remap)), remap.setdefault(rb, len(remap))) for ra, rb, *_ in rows]
        num_nodes, span = len(remap), None

    a = [i for i, _ in ids]
    b = [j for _, j in ids]
    return ContactLog.from_records(a, b, [r[2] for r in rows], [r[3] for r in rows], num_nodes, span)


def write_contact_trace(log: ContactLog) -> str:
    out = [f"# nodes={log.num_nodes} span={log.span[0]:.3f},{log.span[1]:.3f}"]
    for a, b, s, e in zip(log.a.tolist(), log.b.tolist(), log.t_start.tolist(), log.t_end.tolist()):
        out.append(f"{a} {b} {s:.3f} {e:.3f}")
    return "\n".join(out) + "\n"
