"""Delay, fairness and completion metrics; summary and aggregate tables."""

from __future__ import annotations

import csv
import io
import math
import os
from collections import defaultdict
from dataclasses import dataclass

SUMMARY_COLUMNS = (
    "scheduler", "seed", "n_nodes", "n_connections", "S", "interval",
    "min_delay", "mean_delay", "max_delay", "fairness",
    "completion_frame", "delivered", "total",
)
METRIC_COLUMNS = ("min_delay", "mean_delay", "max_delay", "fairness", "completion_frame", "delivered")
GROUP_COLUMNS = ("scheduler", "n_connections", "interval")


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    """Delays are in slots; ``fairness`` is Jain's index over per-connection mean delays."""

    per_connection_mean: dict[int, float]
    min_delay: int
    mean_delay: float
    max_delay: int
    fairness: float
    completion_frame: int
    delivered: int
    total: int


def packet_delay(packet) -> int:
    if packet.delivered_at is None:
        raise MetricsError(f"packet {packet.id} was not delivered")
    return packet.delivered_at - packet.created_at


def fairness(values) -> float:
    """Jain's index ``(sum d)^2 / (n * sum d^2)``."""
    values = list(values)
    if not values:
        raise MetricsError("fairness needs at least one value")
    sq = sum(v * v for v in values)
    if sq == 0:
        return 1.0
    return sum(values) ** 2 / (len(values) * sq)


def from_delays(delays, completion_frame: int, total: int) -> MetricsReport:
    """Build a report from ``(packet_id, connection_id, delay)`` triples."""
    delays = list(delays)
    if not delays:
        raise MetricsError("no delivered packets")
    per_conn = defaultdict(list)
    for _, cid, d in delays:
        per_conn[cid].append(d)
    means = {cid: sum(v) / len(v) for cid, v in sorted(per_conn.items())}
    all_d = [d for _, _, d in delays]
    return MetricsReport(
        per_connection_mean=means,
        min_delay=min(all_d),
        mean_delay=sum(all_d) / len(all_d),
        max_delay=max(all_d),
        fairness=fairness(means.values()),
        completion_frame=completion_frame,
        delivered=len(all_d),
        total=total,
    )


def report(result) -> MetricsReport:
    return from_delays(result.delays, result.completion_frame, result.total_packets)


def summary_row(result, rep: MetricsReport | None = None) -> dict:
    run = result.run
    rep = rep if rep is not None else report(result)
    intervals = {c.interval_slots for c in run.connections}
    return {
        "scheduler": run.scheduler.value,
        "seed": run.seed,
        "n_nodes": run.topology.n,
        "n_connections": len(run.connections),
        "S": run.slots_per_frame,
        "interval": min(intervals) if len(intervals) == 1 else ";".join(map(str, sorted(intervals))),
        "min_delay": rep.min_delay,
        "mean_delay": rep.mean_delay,
        "max_delay": rep.max_delay,
        "fairness": rep.fairness,
        "completion_frame": rep.completion_frame,
        "delivered": rep.delivered,
        "total": rep.total,
    }


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def format_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def write_summary(rows, path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(rows, SUMMARY_COLUMNS))


def read_summary(path: str | os.PathLike) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for c in ("seed", "n_nodes", "n_connections", "S", "interval",
                  "completion_frame", "delivered", "total"):
            r[c] = int(r[c])
        for c in ("min_delay", "max_delay"):
            r[c] = float("nan") if r[c] == "nan" else int(r[c])
        r["mean_delay"] = float(r["mean_delay"])
        r["fairness"] = float(r["fairness"])
    return rows


def aggregate(rows) -> list[dict]:
    """Mean and sample standard deviation of each metric per (scheduler, load level).

    Rows sharing a group must agree on node count and frame length.
    """
    rows = list(rows)
    if not rows:
        raise MetricsError("aggregate needs at least one run")
    groups = defaultdict(list)
    for r in rows:
        groups[tuple(r[c] for c in GROUP_COLUMNS)].append(r)
    out = []
    for key in sorted(groups, key=lambda k: (str(k[0]), k[1], k[2])):
        members = groups[key]
        for c in ("n_nodes", "S"):
            if len({m[c] for m in members}) != 1:
                raise MetricsError(f"group {key} mixes different {c} values")
        agg = dict(zip(GROUP_COLUMNS, key))
        agg["n_nodes"] = members[0]["n_nodes"]
        agg["S"] = members[0]["S"]
        agg["runs"] = len(members)
        for c in METRIC_COLUMNS:
            vals = [float(m[c]) for m in members]
            mean = sum(vals) / len(vals)
            var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1) if len(vals) > 1 else 0.0
            agg[f"{c}_mean"] = mean
            agg[f"{c}_std"] = math.sqrt(var)
        out.append(agg)
    return out


def aggregate_columns() -> tuple[str, ...]:
    cols = [*GROUP_COLUMNS, "n_nodes", "S", "runs"]
    for c in METRIC_COLUMNS:
        cols += [f"{c}_mean", f"{c}_std"]
    return tuple(cols)


def plot_data(agg_rows, metric: str = "max_delay", x: str = "interval") -> dict[str, str]:
    """Whitespace-separated ``x y std`` columns per scheduler, x ascending."""
    per = defaultdict(list)
    for r in agg_rows:
        per[r["scheduler"]].append((r[x], r[f"{metric}_mean"], r[f"{metric}_std"]))
    out = {}
    for sched, pts in sorted(per.items()):
        lines = [f"# {x} {metric}_mean {metric}_std"]
        lines += [f"{a} {_fmt(b)} {_fmt(c)}" for a, b, c in sorted(pts)]
        out[sched] = "\n".join(lines) + "\n"
    return out
