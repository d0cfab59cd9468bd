"""Local Voting: slot request/release plus neighbor-to-neighbor load balancing.

Each node tries to keep its load ``x = p / max(1, q)`` equal to that of its
neighborhood. Slots move only between one-hop neighbors and only when the
move keeps the schedule conflict-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from localvoting.schedule import Schedule, first_free_slot, transferable_slots
from localvoting.topology import Topology

NEIGHBORHOODS = ("one-hop", "two-hop")


@dataclass
class NodeState:
    q: int
    p: int

    @property
    def x(self) -> float:
        return self.p / max(1, self.q)


def load(q: int, p: int) -> float:
    return p / max(1, q)


def round_half_away(num: int, den: int) -> int:
    """``round(num / den)`` with halves away from zero, in exact integer arithmetic."""
    if den <= 0:
        raise ValueError("den must be positive")
    sign = -1 if num < 0 else 1
    return sign * ((2 * abs(num) + den) // (2 * den))


def voters(topology: Topology, i: int, neighborhood: str = "one-hop") -> list[int]:
    if neighborhood == "one-hop":
        nbrs = topology.one_hop(i)
    elif neighborhood == "two-hop":
        nbrs = topology.two_hop(i)
    else:
        raise ValueError(f"unknown neighborhood {neighborhood!r}")
    return [i, *sorted(nbrs)]


def compute_u(q, p, topology: Topology, i: int, neighborhood: str = "one-hop") -> int:
    """Signed number of slots node ``i`` should gain to match its neighborhood's load.

    ``u = round(max(1, q_i) * P / Q) - p_i`` with ``P`` the slots and ``Q`` the
    (floored-at-one) backlog summed over ``i`` and its neighbors.
    """
    group = voters(topology, i, neighborhood)
    P = sum(p[j] for j in group)
    Q = sum(max(1, q[j]) for j in group)
    return round_half_away(max(1, q[i]) * P, Q) - p[i]


@dataclass(frozen=True)
class Transfer:
    giver: int
    receiver: int
    slot: int
    u_giver: int
    u_receiver: int


@dataclass
class FrameTrace:
    """What one Local Voting frame did, for logging and property checks."""

    granted: dict[int, int] = field(default_factory=dict)
    released: dict[int, int] = field(default_factory=dict)
    blocked: list[int] = field(default_factory=list)
    transfers: list[Transfer] = field(default_factory=list)
    iterations: dict[int, int] = field(default_factory=dict)
    u_before: dict[int, int] = field(default_factory=dict)


def request_release_phase(q, schedule: Schedule, topology: Topology, trace: FrameTrace | None = None) -> list[int]:
    """Grant one free slot to each backlogged node, release one from each idle holder.

    Nodes are visited in ascending id. Returns the backlogged nodes that
    found no free slot; they are the candidates for load balancing.
    """
    trace = trace if trace is not None else FrameTrace()
    blocked = []
    for i in range(topology.n):
        if q[i] > 0:
            s = first_free_slot(schedule, topology, i)
            if s is None:
                blocked.append(i)
            else:
                schedule.assign(topology, i, s)
                trace.granted[i] = s
        elif schedule.count(i) > 0:
            s = schedule.slots_of(i)[-1]
            schedule.release(i, s)
            trace.released[i] = s
    trace.blocked = list(blocked)
    return blocked


def load_balance_phase(
    q,
    schedule: Schedule,
    topology: Topology,
    i: int,
    neighborhood: str = "one-hop",
    trace: FrameTrace | None = None,
    giver_step: int = -1,
) -> list[Transfer]:
    """Pull slots into node ``i`` from neighbors with a smaller balancing value.

    Neighbor values are computed once and cached; each time a neighbor gives
    a slot its cached value moves by ``giver_step`` (default: drops by one),
    while node ``i``'s own value is recomputed from the current schedule.
    Stops once ``i``'s value is not positive or no neighbor with a smaller
    value has a transferable slot.

    ``giver_step=+1`` tracks the giver's true value instead, which keeps a
    giver from being drained past its own share within one call.
    """
    nbrs = sorted(topology.one_hop(i))
    p = schedule.p
    cached = {j: compute_u(q, p, topology, j, neighborhood) for j in nbrs}
    bound = schedule.S * len(nbrs)
    done = []
    while True:
        u_i = compute_u(q, schedule.p, topology, i, neighborhood)
        if u_i <= 0:
            break
        best = None
        for j in sorted(nbrs, key=lambda j: (cached[j], j)):
            if cached[j] >= u_i:
                break
            slots = transferable_slots(schedule, topology, j, i)
            if slots:
                best = (j, slots[0])
                break
        if best is None:
            break
        j, s = best
        schedule.transfer(topology, j, i, s)
        done.append(Transfer(j, i, s, cached[j], u_i))
        cached[j] += giver_step
        if len(done) > bound:
            raise AssertionError(f"balancing at node {i} exceeded {bound} transfers")
    if trace is not None:
        trace.transfers.extend(done)
        trace.iterations[i] = len(done)
    return done


def local_voting_frame(
    q, schedule: Schedule, topology: Topology, neighborhood: str = "one-hop", giver_step: int = -1
) -> FrameTrace:
    """Run both phases for one frame, mutating ``schedule`` in place."""
    trace = FrameTrace()
    p0 = schedule.p
    trace.u_before = {i: compute_u(q, p0, topology, i, neighborhood) for i in range(topology.n) if q[i] > 0}
    for i in request_release_phase(q, schedule, topology, trace):
        load_balance_phase(q, schedule, topology, i, neighborhood, trace, giver_step)
    return trace


class LocalVoting:
    """Persistent-schedule scheduler; the same slots carry over between frames."""

    name = "local-voting"

    def __init__(self, topology: Topology, slots_per_frame: int, neighborhood: str = "one-hop", giver_step: int = -1):
        if neighborhood not in NEIGHBORHOODS:
            raise ValueError(f"unknown neighborhood {neighborhood!r}")
        self.topology = topology
        self.neighborhood = neighborhood
        self.giver_step = giver_step
        self.schedule = Schedule(topology.n, slots_per_frame)
        self.last_trace: FrameTrace | None = None

    def frame(self, q) -> Schedule:
        self.last_trace = local_voting_frame(q, self.schedule, self.topology, self.neighborhood, self.giver_step)
        return self.schedule
