"""Comparison schedulers: centralized Longest Queue First and static two-hop coloring."""

from __future__ import annotations

from localvoting.schedule import Schedule
from localvoting.topology import Topology


class ColoringError(ValueError):
    pass


def lqf_frame(q, topology: Topology, slots_per_frame: int) -> Schedule:
    """Greedy per-slot activation in decreasing remaining-backlog order.

    Remaining backlog is ``q`` minus the slots already granted earlier in this
    frame; ties go to the lower id. A node joins slot ``s`` when it still has
    backlog and no node already active in ``s`` lies within its two hops.
    """
    sched = Schedule(topology.n, slots_per_frame)
    remaining = list(q)
    for s in range(slots_per_frame):
        active: list[int] = []
        for i in sorted(range(topology.n), key=lambda i: (-remaining[i], i)):
            if remaining[i] <= 0:
                break
            nbrs = topology.two_hop(i)
            if any(j in nbrs for j in active):
                continue
            active.append(i)
        if not active:
            break
        for i in active:
            sched.force_assign(i, s)
            remaining[i] -= 1
    return sched


def greedy_coloring(topology: Topology) -> list[int]:
    """Color the two-hop conflict graph; largest conflict degree first, ties by id."""
    order = sorted(range(topology.n), key=lambda i: (-len(topology.two_hop(i)), i))
    color = [-1] * topology.n
    for i in order:
        used = {color[j] for j in topology.two_hop(i)}
        c = 0
        while c in used:
            c += 1
        color[i] = c
    return color


def coloring_schedule(topology: Topology, slots_per_frame: int) -> Schedule:
    """Static TDMA frame: color class ``c`` owns every slot ``s`` with ``s % k == c``."""
    color = greedy_coloring(topology)
    k = max(color, default=-1) + 1
    if k > slots_per_frame:
        raise ColoringError(f"{k} colors needed but only {slots_per_frame} slots per frame")
    sched = Schedule(topology.n, slots_per_frame)
    for i, c in enumerate(color):
        for s in range(c, slots_per_frame, k):
            sched.force_assign(i, s)
    return sched


class LongestQueueFirst:
    name = "lqf"

    def __init__(self, topology: Topology, slots_per_frame: int):
        self.topology = topology
        self.S = slots_per_frame

    def frame(self, q) -> Schedule:
        return lqf_frame(q, self.topology, self.S)


class StaticColoring:
    name = "coloring"

    def __init__(self, topology: Topology, slots_per_frame: int):
        self.schedule = coloring_schedule(topology, slots_per_frame)

    def frame(self, q) -> Schedule:
        return self.schedule
