import csv
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from localvoting.engine import SchedulerKind, SimulationRun, run_to_completion, write_event_log
from localvoting.metrics import (
    SUMMARY_COLUMNS,
    MetricsError,
    aggregate,
    fairness,
    format_csv,
    packet_delay,
    plot_data,
    report,
    summary_row,
)
from localvoting.topology import generate_geometric
from localvoting.traffic import Packet, generate_connections

DATA = Path(__file__).parent / "data"


def test_packet_delay():
    p = Packet(0, 0, (0, 1), created_at=0, delivered_at=7)
    assert packet_delay(p) == 7
    with pytest.raises(MetricsError):
        packet_delay(Packet(1, 0, (0, 1), created_at=3))


def test_fairness_examples():
    assert fairness([5, 5, 5]) == 1.0
    assert fairness([42.5]) == 1.0
    assert fairness([1, 3]) == pytest.approx(0.8, abs=1e-15)
    with pytest.raises(MetricsError):
        fairness([])


@given(st.lists(st.integers(1, 1000), min_size=1, max_size=20), st.integers(1, 10_000))
def test_fairness_scale_invariant_exact(ds, k):
    exact = fairness([Fraction(d) for d in ds])
    assert fairness([Fraction(d * k) for d in ds]) == exact
    assert fairness([float(d * k) for d in ds]) == pytest.approx(float(exact), abs=1e-12)
    assert 0 < exact <= 1
    assert (exact == 1) == (len(set(ds)) == 1)


def small_run(kind=SchedulerKind.LOCAL_VOTING, seed=3):
    topo = generate_geometric(15, 600, 250, seed=seed)
    conns = tuple(generate_connections(topo, 4, seed=seed, packet_count=25, interval_slots=3))
    return run_to_completion(SimulationRun(topo, conns, kind, 16, seed=seed))


def parse_delays(path):
    """Independent log reader: delay = delivered global slot - created global slot."""
    created, delivered, conn = {}, {}, {}
    S = 16
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            pid = int(row["packet_id"])
            g = int(row["frame"]) * S + int(row["slot"])
            conn[pid] = int(row["connection_id"])
            if row["event"] == "created":
                created[pid] = g
            elif row["event"] == "delivered":
                delivered[pid] = g
    return {pid: (conn[pid], delivered[pid] - created[pid]) for pid in delivered}


def test_report_matches_event_log(tmp_path):
    res = small_run()
    write_event_log(res, tmp_path / "e.csv")
    oracle = parse_delays(tmp_path / "e.csv")
    assert {pid: (c, d) for pid, c, d in res.delays} == oracle
    rep = report(res)
    ds = [d for _, d in oracle.values()]
    assert rep.min_delay == min(ds) >= 1
    assert rep.max_delay == max(ds)
    assert rep.mean_delay == pytest.approx(sum(ds) / len(ds), rel=1e-15)
    per = {}
    for c, d in oracle.values():
        per.setdefault(c, []).append(d)
    means = [sum(v) / len(v) for _, v in sorted(per.items())]
    assert rep.fairness == pytest.approx(sum(means) ** 2 / (len(means) * sum(m * m for m in means)), rel=1e-12)
    assert rep.min_delay <= rep.mean_delay <= rep.max_delay
    assert rep.delivered == rep.total == 100


def test_summary_schema_golden():
    header = (DATA / "summary_header.csv").read_text()
    assert format_csv([], SUMMARY_COLUMNS) == header
    row = summary_row(small_run())
    text = format_csv([row], SUMMARY_COLUMNS)
    assert text.splitlines()[0] + "\n" == header
    assert text.splitlines()[1].startswith("local-voting,3,15,4,16,3,")


def test_aggregate_single_run_equals_report():
    row = summary_row(small_run())
    (agg,) = aggregate([row])
    for c in ("min_delay", "mean_delay", "max_delay", "fairness", "completion_frame"):
        assert agg[f"{c}_mean"] == row[c]
        assert agg[f"{c}_std"] == 0.0


def test_aggregate_many_seeds():
    rows = [summary_row(small_run(seed=s)) for s in range(1, 6)]
    # different seeds give different topologies but the same node count
    (agg,) = aggregate(rows)
    assert agg["runs"] == 5
    vals = [r["max_delay"] for r in rows]
    assert min(vals) <= agg["max_delay_mean"] <= max(vals)


def test_aggregate_rejects_mixed_configs():
    row = summary_row(small_run())
    other = dict(row, S=32)
    with pytest.raises(MetricsError):
        aggregate([row, other])
    with pytest.raises(MetricsError):
        aggregate([])


def test_plot_data_columns():
    rows = [
        dict(summary_row(small_run(kind)), interval=iv)
        for kind in (SchedulerKind.LQF, SchedulerKind.COLORING)
        for iv in (6, 3)
    ]
    out = plot_data(aggregate(rows), "max_delay")
    assert set(out) == {"lqf", "coloring"}
    lines = out["lqf"].splitlines()
    assert lines[0] == "# interval max_delay_mean max_delay_std"
    assert [ln.split()[0] for ln in lines[1:]] == ["3", "6"]
    assert all(len(ln.split()) == 3 for ln in lines[1:])
