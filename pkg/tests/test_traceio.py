import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import contact_logs
from swimtrace.traceio import ContactLog, TraceError, parse_contact_trace, write_contact_trace


def rows(log):
    return [(r.a, r.b, r.t_start, r.t_end) for r in log.records]


def test_single_line_remaps_by_first_appearance():
    log = parse_contact_trace("12 7 3600 3720\n")
    assert rows(log) == [(0, 1, 3600.0, 3720.0)]
    assert log.num_nodes == 2
    assert log.span == (3600.0, 3720.0)


def test_orientation_canonicalized_after_remap():
    log = parse_contact_trace("5 9 0 1\n9 5 10 20\n3 5 30 40\n")
    # 5->0, 9->1, 3->2; record (3,5) becomes (0,2)
    assert rows(log) == [(0, 1, 0.0, 1.0), (0, 1, 10.0, 20.0), (0, 2, 30.0, 40.0)]


def test_self_contact_rejected():
    with pytest.raises(TraceError, match="line 1.*self-contact"):
        parse_contact_trace("1 1 0 10")


def test_overlapping_records_merged():
    log = parse_contact_trace("1 2 0 10\n2 1 5 20\n")
    assert rows(log) == [(0, 1, 0.0, 20.0)]


def test_abutting_records_merged():
    assert rows(parse_contact_trace("1 2 0 10\n1 2 10 20\n")) == [(0, 1, 0.0, 20.0)]


@pytest.mark.parametrize("text, line", [
    ("1 2 0\n", 1),
    ("# c\n\n1 2 x 4\n", 3),
    ("1 2 0 10\n1 2 9 5\n", 2),
    ("1 2 0 inf\n", 1),
])
def test_malformed_lines_report_line_number(text, line):
    with pytest.raises(TraceError) as info:
        parse_contact_trace(text)
    assert info.value.line == line


def test_extra_columns_comments_blank_lines_ignored():
    text = "# crawdad dump\n\n  1 2 0 10 17 extra\n# mid\n2 3 20 30 1\n"
    assert rows(parse_contact_trace(text)) == [(0, 1, 0.0, 10.0), (1, 2, 20.0, 30.0)]


def test_write_format():
    log = ContactLog.from_records([0], [1], [0.0], [10.0], 2)
    assert write_contact_trace(log) == "# nodes=2 span=0.000,10.000\n0 1 0.000 10.000\n"


def test_write_empty_log():
    log = ContactLog.from_records([], [], [], [], 3, (0.0, 7200.0))
    assert write_contact_trace(log) == "# nodes=3 span=0.000,7200.000\n"
    back = parse_contact_trace(write_contact_trace(log))
    assert back == log and len(back) == 0


def test_write_sorted_by_start_then_ids():
    log = ContactLog.from_records([2, 0, 1], [3, 1, 2], [5.0, 5.0, 1.0], [6.0, 7.0, 2.0], 4)
    body = write_contact_trace(log).splitlines()[1:]
    assert body == ["1 2 1.000 2.000", "0 1 5.000 7.000", "2 3 5.000 6.000"]


def test_header_keeps_ids_and_node_count():
    log = parse_contact_trace("# nodes=10 span=0.000,100.000\n7 3 1 2\n")
    assert rows(log) == [(3, 7, 1.0, 2.0)]
    assert log.num_nodes == 10 and log.span == (0.0, 100.0)
    with pytest.raises(TraceError, match="outside"):
        parse_contact_trace("# nodes=3 span=0,100\n7 3 1 2\n")


@settings(max_examples=200, deadline=None)
@given(contact_logs())
def test_parse_write_roundtrip(log):
    assert parse_contact_trace(write_contact_trace(log)) == log


@settings(max_examples=100, deadline=None)
@given(contact_logs(min_records=1), st.randoms(use_true_random=False))
def test_parse_insensitive_to_order_and_orientation(log, rnd):
    lines = write_contact_trace(log).splitlines()
    header, body = lines[0], lines[1:]
    shuffled = []
    for line in body:
        a, b, s, e = line.split()
        shuffled.append(f"{b} {a} {s} {e}" if rnd.random() < 0.5 else line)
    rnd.shuffle(shuffled)
    assert parse_contact_trace("\n".join([header] + shuffled)) == log


def test_shifted_t0():
    log = parse_contact_trace("1 2 1000 1010\n").shifted(1000.0)
    assert rows(log) == [(0, 1, 0.0, 10.0)]
    assert log.span == (0.0, 10.0)
