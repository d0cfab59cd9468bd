"""Frame loop: schedule, transmit slot by slot, apply queue dynamics, stop when drained."""

from __future__ import annotations

import csv
import enum
import os
from dataclasses import dataclass, field

from localvoting.baselines import LongestQueueFirst, StaticColoring
from localvoting.local_voting import LocalVoting, compute_u, load
from localvoting.schedule import DEFAULT_SLOTS, find_conflict
from localvoting.topology import Topology
from localvoting.traffic import (
    EVENT_COLUMNS,
    Connection,
    NodeQueue,
    arrivals_for_frame,
    generation_horizon,
)

STATE_COLUMNS = ("frame", "node", "q", "p", "x")
TRACE_COLUMNS = ("frame", "node", "u", "transfers_in", "transfers_out")


class SchedulerKind(str, enum.Enum):
    LOCAL_VOTING = "local-voting"
    LQF = "lqf"
    COLORING = "coloring"

    def build(self, topology: Topology, slots_per_frame: int, neighborhood: str = "one-hop"):
        if self is SchedulerKind.LOCAL_VOTING:
            return LocalVoting(topology, slots_per_frame, neighborhood)
        if self is SchedulerKind.LQF:
            return LongestQueueFirst(topology, slots_per_frame)
        return StaticColoring(topology, slots_per_frame)


class ConflictDetected(AssertionError):
    pass


def default_frame_cap(connections) -> int:
    total = sum(c.packet_count for c in connections)
    hops = max((len(c.route) - 1 for c in connections), default=0)
    return max(1, 10 * total * hops)


@dataclass(frozen=True)
class SimulationRun:
    topology: Topology
    connections: tuple[Connection, ...]
    scheduler: SchedulerKind
    slots_per_frame: int = DEFAULT_SLOTS
    seed: int = 0
    frame_cap: int | None = None
    neighborhood: str = "one-hop"

    @property
    def cap(self) -> int:
        return self.frame_cap if self.frame_cap is not None else default_frame_cap(self.connections)


@dataclass
class RunResult:
    run: SimulationRun
    events: list[tuple] = field(default_factory=list)
    states: list[tuple] = field(default_factory=list)
    trace: list[tuple] = field(default_factory=list)
    schedules: list[tuple] = field(default_factory=list)
    delays: list[tuple[int, int, int]] = field(default_factory=list)
    frames: int = 0
    completed: bool = False
    completion_frame: int = 0
    total_packets: int = 0
    delivered: int = 0

    @property
    def hit_frame_cap(self) -> bool:
        return not self.completed


class RunState:
    """Mutable state of one run between frames."""

    def __init__(self, run: SimulationRun, keep_schedules: bool = False, trace: bool = False):
        self.run = run
        self.topology = run.topology
        self.S = run.slots_per_frame
        self.scheduler = run.scheduler.build(run.topology, run.slots_per_frame, run.neighborhood)
        self.queues = [NodeQueue() for _ in range(run.topology.n)]
        self.pending = [[] for _ in range(run.topology.n)]
        self.t = 0
        self.horizon = generation_horizon(run.connections, self.S)
        self.result = RunResult(run, total_packets=sum(c.packet_count for c in run.connections))
        self.keep_schedules = keep_schedules
        self.want_trace = trace

    @property
    def done(self) -> bool:
        r = self.result
        return self.t > self.horizon and r.delivered == r.total_packets

    def in_flight(self) -> int:
        return sum(len(x) for x in self.pending)

    def queued(self) -> int:
        return sum(q.q for q in self.queues)


def step_frame(state: RunState) -> RunState:
    """Advance one frame.

    Arrivals collected during the previous frame are enqueued first, the
    scheduler then sees the frame-start queues, and every slot owner with a
    packet left from the frame-start backlog sends its head-of-line packet
    one hop. Whatever a node receives during the frame waits for the next one.
    """
    t, S, topo = state.t, state.S, state.topology
    res = state.result
    for i, arrived in enumerate(state.pending):
        state.queues[i].enqueue(arrived)
    state.pending = [[] for _ in range(topo.n)]

    q = [nq.q for nq in state.queues]
    schedule = state.scheduler.frame(q)
    bad = find_conflict(schedule, topo)
    if bad is not None:
        raise ConflictDetected(f"frame {t}: slot {bad[0]} shared by nodes {bad[1]} and {bad[2]}")
    p = schedule.p
    for i in range(topo.n):
        res.states.append((t, i, q[i], p[i], load(q[i], p[i])))
    if state.keep_schedules:
        res.schedules.append(schedule.owner_sets())
    if state.want_trace:
        _record_trace(state, t, q, p)

    by_slot: dict[int, list] = {}
    for pk_list in arrivals_for_frame(state.run.connections, t, S).values():
        for pk in pk_list:
            by_slot.setdefault(pk.created_at - t * S, []).append(pk)

    budget = list(q)
    sent = [0] * topo.n
    for s in range(S):
        g = t * S + s
        for pk in by_slot.get(s, ()):
            res.events.append((pk.id, pk.connection_id, "created", t, s, pk.source))
            state.pending[pk.source].append(pk)
        for i in sorted(schedule.owners(s)):
            if budget[i] == 0:
                continue
            budget[i] -= 1
            sent[i] += 1
            pk = state.queues[i].dequeue_head()
            pk.hop_index += 1
            node = pk.holder
            if node == pk.destination:
                pk.delivered_at = g
                res.delivered += 1
                res.completion_frame = t
                res.delays.append((pk.id, pk.connection_id, g - pk.created_at))
                res.events.append((pk.id, pk.connection_id, "delivered", t, s, node))
            else:
                res.events.append((pk.id, pk.connection_id, "hop", t, s, node))
                state.pending[node].append(pk)

    for i in range(topo.n):
        if sent[i] != min(q[i], p[i]):
            raise AssertionError(f"frame {t} node {i}: sent {sent[i]} != min(q={q[i]}, p={p[i]})")
    state.t += 1
    res.frames = state.t
    return state


def _record_trace(state: RunState, t: int, q, p) -> None:
    tr = getattr(state.scheduler, "last_trace", None)
    if tr is None:
        return
    gained = [0] * state.topology.n
    lost = [0] * state.topology.n
    for x in tr.transfers:
        gained[x.receiver] += 1
        lost[x.giver] += 1
    for i in range(state.topology.n):
        u = compute_u(q, p, state.topology, i, state.run.neighborhood)
        state.result.trace.append((t, i, u, gained[i], lost[i]))


def run_to_completion(run: SimulationRun, keep_schedules: bool = False, trace: bool = False) -> RunResult:
    """Step frames until every packet is delivered or the frame cap is reached.

    Hitting the cap is reported through ``result.completed`` rather than raised.
    """
    state = RunState(run, keep_schedules=keep_schedules, trace=trace)
    cap = run.cap
    while not state.done and state.t < cap:
        step_frame(state)
    state.result.completed = state.done
    return state.result


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_event_log(result: RunResult, path: str | os.PathLike) -> None:
    _write_csv(path, EVENT_COLUMNS, result.events)


def write_state_log(result: RunResult, path: str | os.PathLike) -> None:
    _write_csv(path, STATE_COLUMNS, result.states)


def write_trace_log(result: RunResult, path: str | os.PathLike) -> None:
    _write_csv(path, TRACE_COLUMNS, result.trace)


def read_csv(path: str | os.PathLike) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
