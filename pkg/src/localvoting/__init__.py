"""Discrete-time TDMA node scheduling simulator with the Local Voting scheduler."""

from localvoting.topology import Topology, generate_geometric, grid, load_topology, save_topology
from localvoting.schedule import Schedule, is_conflict_free
from localvoting.traffic import Connection, Packet, generate_connections
from localvoting.engine import SchedulerKind, SimulationRun, run_to_completion
from localvoting.metrics import MetricsReport, fairness, report

__all__ = [
    "Connection",
    "MetricsReport",
    "Packet",
    "Schedule",
    "SchedulerKind",
    "SimulationRun",
    "Topology",
    "fairness",
    "generate_connections",
    "generate_geometric",
    "grid",
    "is_conflict_free",
    "load_topology",
    "report",
    "run_to_completion",
    "save_topology",
]
