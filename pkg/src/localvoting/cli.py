"""Command-line experiments: single runs and seed / load sweeps.

Configuration precedence is flags > config file > defaults. The config file
is flat ``key=value`` text using the long flag names without dashes, e.g.::

    nodes=50
    interval=3,5,10
    seeds=0-19
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from localvoting.engine import (
    SchedulerKind,
    SimulationRun,
    run_to_completion,
    write_event_log,
    write_state_log,
    write_trace_log,
)
from localvoting.local_voting import NEIGHBORHOODS
from localvoting.metrics import (
    MetricsError,
    aggregate,
    aggregate_columns,
    format_csv,
    plot_data,
    report,
    summary_row,
    write_summary,
)
from localvoting.topology import generate_geometric, load_topology
from localvoting.traffic import generate_connections

log = logging.getLogger("localvoting")

SCHEDULER_CHOICES = ("local-voting", "lqf", "coloring", "all")
PLOT_METRICS = ("min_delay", "mean_delay", "max_delay", "fairness")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    nodes: int = 50
    area: float = 1000.0
    radius: float = 250.0
    topology_file: str | None = None
    connections: tuple[int, ...] = (10,)
    packets: int = 100
    interval: tuple[int, ...] = (5,)
    phase: int = 0
    slots: int = 32
    scheduler: tuple[str, ...] = ("local-voting", "lqf", "coloring")
    neighborhood: str = "one-hop"
    seeds: tuple[int, ...] = (0,)
    frame_cap: int | None = None
    out: str = "results"
    jobs: int = 1
    logs: bool = True
    trace: bool = False

    def validate(self) -> ExperimentConfig:
        for name in ("nodes", "packets", "slots", "jobs"):
            if getattr(self, name) < 1:
                raise ConfigError(f"--{name} must be positive")
        for name in ("area", "radius"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"--{name} must be positive")
        for name in ("connections", "interval"):
            vals = getattr(self, name)
            if not vals or any(v < 1 for v in vals):
                raise ConfigError(f"--{name} values must be positive")
        if self.phase < 0:
            raise ConfigError("--phase must be non-negative")
        if self.frame_cap is not None and self.frame_cap < 1:
            raise ConfigError("--frame-cap must be positive")
        if not self.seeds:
            raise ConfigError("--seeds must name at least one seed")
        if self.neighborhood not in NEIGHBORHOODS:
            raise ConfigError(f"--neighborhood must be one of {', '.join(NEIGHBORHOODS)}")
        for s in self.scheduler:
            if s not in SCHEDULER_CHOICES[:-1]:
                raise ConfigError(f"--scheduler: unknown scheduler {s!r}")
        return self

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            key = f.name.replace("_", "-")
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            lines.append(f"{key}={v}")
        return "\n".join(lines) + "\n"


def _int_list(text: str, flag: str) -> tuple[int, ...]:
    out = []
    try:
        for part in str(text).split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part[1:]:
                lo, hi = part.split("-", 1)
                lo, hi = int(lo), int(hi)
                if hi < lo:
                    raise ValueError
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise ConfigError(f"--{flag}: invalid integer list {text!r}") from None
    return tuple(out)


def _bool(text: str, flag: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"--{flag}: expected a boolean, got {text!r}")


def _schedulers(text: str, flag: str) -> tuple[str, ...]:
    names = [p.strip() for p in str(text).split(",") if p.strip()]
    if "all" in names:
        return ("local-voting", "lqf", "coloring")
    return tuple(names)


def _num(kind):
    def conv(text, flag):
        try:
            return kind(text)
        except (TypeError, ValueError):
            raise ConfigError(f"--{flag}: invalid value {text!r}") from None
    return conv


CONVERTERS = {
    "nodes": _num(int),
    "area": _num(float),
    "radius": _num(float),
    "topology_file": lambda v, f: str(v),
    "connections": _int_list,
    "packets": _num(int),
    "interval": _int_list,
    "phase": _num(int),
    "slots": _num(int),
    "scheduler": _schedulers,
    "neighborhood": lambda v, f: str(v),
    "seeds": _int_list,
    "frame_cap": _num(int),
    "out": lambda v, f: str(v),
    "jobs": _num(int),
    "logs": _bool,
    "trace": _bool,
}


def read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        name = key.replace("-", "_")
        if name not in CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[name] = CONVERTERS[name](val, key)
    return values


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="localvoting",
        description="Simulate TDMA node scheduling (Local Voting, LQF, static coloring).",
        argument_default=argparse.SUPPRESS,
    )
    ap.add_argument("--config", help="key=value config file; flags override it")
    ap.add_argument("--nodes", help="node count for generated topologies (default 50)")
    ap.add_argument("--area", help="side of the square deployment area in meters (default 1000)")
    ap.add_argument("--radius", help="radio range in meters (default 250)")
    ap.add_argument("--topology-file", dest="topology_file", help="edge-list topology file")
    ap.add_argument("--connections", help="connections per run; comma list sweeps (default 10)")
    ap.add_argument("--packets", help="packets per connection (default 100)")
    ap.add_argument("--interval", help="slots between packets; comma list sweeps load (default 5)")
    ap.add_argument("--phase", help="global slot of each connection's first packet (default 0)")
    ap.add_argument("--slots", help="slots per frame S (default 32)")
    ap.add_argument("--scheduler", help="local-voting, lqf, coloring, all, or a comma list (default all)")
    ap.add_argument("--neighborhood", help="Local Voting averaging set: one-hop or two-hop")
    ap.add_argument("--seeds", help="seed list such as 0-19 or 1,4,9 (default 0)")
    ap.add_argument("--frame-cap", dest="frame_cap", help="frame limit per run")
    ap.add_argument("--out", help="output directory (default results)")
    ap.add_argument("--jobs", help="worker processes for the sweep (default 1)")
    ap.add_argument("--logs", help="write per-run event/state logs (default true)")
    ap.add_argument("--trace", help="write Local Voting balancing traces (default false)")
    ap.add_argument("--dump-config", dest="dump_config", action="store_true",
                    help="print the effective configuration and exit")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def parse_config(argv=None) -> ExperimentConfig:
    ns = vars(build_parser().parse_args(argv))
    ns.pop("dump_config", None)
    ns.pop("verbose", None)
    values = read_config_file(ns.pop("config")) if "config" in ns else {}
    flags = {k: CONVERTERS[k](v, k.replace("_", "-")) for k, v in ns.items()}
    geometric = {"nodes", "area", "radius"} & flags.keys()
    if "topology_file" in flags and geometric:
        raise ConfigError(f"--topology-file conflicts with --{', --'.join(sorted(geometric))}")
    if "topology_file" in flags:
        for k in ("nodes", "area", "radius"):
            values.pop(k, None)
    values.update(flags)
    return ExperimentConfig(**values).validate()


def _seeds_for(seed: int) -> tuple[int, int]:
    topo_seed, conn_seed = np.random.SeedSequence(seed).generate_state(2)
    return int(topo_seed), int(conn_seed)


def build_topology(config: ExperimentConfig, seed: int):
    if config.topology_file:
        return load_topology(config.topology_file)
    return generate_geometric(config.nodes, config.area, config.radius, _seeds_for(seed)[0])


def build_run(config: ExperimentConfig, scheduler: str, n_connections: int, interval: int, seed: int) -> SimulationRun:
    topo = build_topology(config, seed)
    conns = generate_connections(
        topo, n_connections, _seeds_for(seed)[1],
        packet_count=config.packets, interval_slots=interval, phase=config.phase,
    )
    return SimulationRun(
        topo, tuple(conns), SchedulerKind(scheduler), config.slots, seed,
        config.frame_cap, config.neighborhood,
    )


def run_label(scheduler: str, n_connections: int, interval: int, seed: int) -> str:
    return f"{scheduler}_c{n_connections}_i{interval}_s{seed}"


def _nan_row(result) -> dict:
    run = result.run
    return {
        "scheduler": run.scheduler.value, "seed": run.seed, "n_nodes": run.topology.n,
        "n_connections": len(run.connections), "S": run.slots_per_frame,
        "interval": run.connections[0].interval_slots,
        "min_delay": "nan", "mean_delay": "nan", "max_delay": "nan", "fairness": "nan",
        "completion_frame": result.completion_frame, "delivered": 0, "total": result.total_packets,
    }


def execute(config: ExperimentConfig, task) -> tuple[dict, bool]:
    """Run one (scheduler, connections, interval, seed) cell; returns its summary row."""
    scheduler, n_conn, interval, seed = task
    run = build_run(config, scheduler, n_conn, interval, seed)
    result = run_to_completion(run, trace=config.trace)
    if config.logs:
        base = os.path.join(config.out, "runs", run_label(*task))
        write_event_log(result, base + "_events.csv")
        write_state_log(result, base + "_states.csv")
        if config.trace and result.trace:
            write_trace_log(result, base + "_trace.csv")
    try:
        row = summary_row(result, report(result))
    except MetricsError:
        row = _nan_row(result)
    return row, result.completed


def tasks(config: ExperimentConfig) -> list[tuple]:
    return [
        (sched, n_conn, interval, seed)
        for sched in config.scheduler
        for n_conn in config.connections
        for interval in config.interval
        for seed in config.seeds
    ]


def run_experiment(config: ExperimentConfig) -> int:
    """Run the full sweep and write all outputs; exit status 1 if any run hit the frame cap."""
    try:
        os.makedirs(os.path.join(config.out, "runs") if config.logs else config.out, exist_ok=True)
        probe = os.path.join(config.out, ".write-test")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise ConfigError(f"output directory {config.out!r} is not writable: {exc}") from None

    todo = tasks(config)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(execute, [config] * len(todo), todo))
    else:
        outcomes = [execute(config, t) for t in todo]

    rows = [row for row, _ in outcomes]
    capped = [t for t, (_, ok) in zip(todo, outcomes) if not ok]
    for t in capped:
        log.warning("run %s hit the frame cap before delivering all packets", run_label(*t))

    write_summary(rows, os.path.join(config.out, "summary.csv"))
    good = [r for r in rows if r["fairness"] != "nan"]
    if good:
        agg = aggregate(good)
        with open(os.path.join(config.out, "aggregate.csv"), "w", newline="") as fh:
            fh.write(format_csv(agg, aggregate_columns()))
        for metric in PLOT_METRICS:
            for sched, text in plot_data(agg, metric).items():
                with open(os.path.join(config.out, f"plot_{sched}_{metric}.dat"), "w") as fh:
                    fh.write(text)
    with open(os.path.join(config.out, "config.txt"), "w") as fh:
        fh.write(config.to_text())
    log.info("%d runs written to %s", len(rows), config.out)
    return 1 if capped else 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    ap = build_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(ns, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        config = parse_config(argv)
        if getattr(ns, "dump_config", False):
            sys.stdout.write(config.to_text())
            return 0
        return run_experiment(config)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"localvoting: error: {exc}", file=sys.stderr)
        return 2


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(config, **kw).validate()
