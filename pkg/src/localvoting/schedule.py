"""Slot ownership matrix and the two-hop conflict-free rule."""

from __future__ import annotations

from localvoting.topology import Topology

DEFAULT_SLOTS = 32


class ScheduleError(RuntimeError):
    pass


class Schedule:
    """Per-(node, slot) ownership ``X[i][s]`` with derived slot counts ``p[i]``.

    Both directions are indexed: ``slots_of(i)`` and ``owners(s)``. Only
    ``assign`` checks interference; ``force_assign`` is for building
    deliberately broken fixtures in tests.
    """

    def __init__(self, n: int, slots_per_frame: int = DEFAULT_SLOTS):
        if slots_per_frame < 1:
            raise ValueError("slots_per_frame must be >= 1")
        self.n = n
        self.S = slots_per_frame
        self._by_node = [set() for _ in range(n)]
        self._by_slot = [set() for _ in range(slots_per_frame)]

    def copy(self) -> Schedule:
        other = Schedule(self.n, self.S)
        other._by_node = [set(x) for x in self._by_node]
        other._by_slot = [set(x) for x in self._by_slot]
        return other

    def __eq__(self, other):
        if not isinstance(other, Schedule):
            return NotImplemented
        return self.S == other.S and self._by_node == other._by_node

    def __repr__(self):
        return f"Schedule(n={self.n}, S={self.S}, p={self.p})"

    def x(self, i: int, s: int) -> int:
        return int(s in self._by_node[i])

    def owns(self, i: int, s: int) -> bool:
        return s in self._by_node[i]

    def slots_of(self, i: int) -> list[int]:
        return sorted(self._by_node[i])

    def owners(self, s: int) -> frozenset[int]:
        return frozenset(self._by_slot[s])

    def count(self, i: int) -> int:
        return len(self._by_node[i])

    @property
    def p(self) -> list[int]:
        return [len(x) for x in self._by_node]

    def is_free_for(self, topology: Topology, i: int, s: int) -> bool:
        """Slot ``s`` is unused by ``i`` and by every node in its two-hop set."""
        owners = self._by_slot[s]
        if not owners:
            return True
        return i not in owners and owners.isdisjoint(topology.two_hop(i))

    def assign(self, topology: Topology, i: int, s: int) -> None:
        if not self.is_free_for(topology, i, s):
            raise ScheduleError(f"slot {s} is not free for node {i}")
        self.force_assign(i, s)

    def force_assign(self, i: int, s: int) -> None:
        self._by_node[i].add(s)
        self._by_slot[s].add(i)

    def release(self, i: int, s: int) -> None:
        if s not in self._by_node[i]:
            raise ScheduleError(f"node {i} does not own slot {s}")
        self._by_node[i].discard(s)
        self._by_slot[s].discard(i)

    def transfer(self, topology: Topology, giver: int, receiver: int, s: int) -> None:
        self.release(giver, s)
        try:
            self.assign(topology, receiver, s)
        except ScheduleError:
            self.force_assign(giver, s)
            raise

    def dump(self) -> str:
        """One line per slot: ``"s: i1 i2 ..."`` with owners ascending."""
        lines = []
        for s, owners in enumerate(self._by_slot):
            ids = " ".join(str(i) for i in sorted(owners))
            lines.append(f"{s}: {ids}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_owner_sets(cls, n: int, owner_sets) -> Schedule:
        owner_sets = list(owner_sets)
        sched = cls(n, len(owner_sets))
        for s, owners in enumerate(owner_sets):
            for i in owners:
                sched.force_assign(i, s)
        return sched

    def owner_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(o) for o in self._by_slot)


def find_conflict(schedule: Schedule, topology: Topology) -> tuple[int, int, int] | None:
    """First ``(slot, i, j)`` with ``i < j`` sharing a slot inside two hops, else None."""
    for s in range(schedule.S):
        owners = sorted(schedule.owners(s))
        for a, i in enumerate(owners):
            nbrs = topology.two_hop(i)
            for j in owners[a + 1:]:
                if j in nbrs:
                    return (s, i, j)
    return None


def is_conflict_free(schedule: Schedule, topology: Topology) -> bool:
    return find_conflict(schedule, topology) is None


def first_free_slot(schedule: Schedule, topology: Topology, i: int) -> int | None:
    for s in range(schedule.S):
        if schedule.is_free_for(topology, i, s):
            return s
    return None


def transferable_slots(schedule: Schedule, topology: Topology, giver: int, receiver: int) -> list[int]:
    """Slots of ``giver`` that ``receiver`` could take over without a conflict.

    The giver must be a one-hop neighbor of the receiver. The giver's own
    ownership is ignored, since it releases the slot as part of the exchange.
    """
    if giver not in topology.one_hop(receiver):
        raise ScheduleError(f"node {giver} is not a one-hop neighbor of {receiver}")
    nbrs = topology.two_hop(receiver)
    out = []
    for s in schedule.slots_of(giver):
        others = schedule.owners(s) - {giver}
        if receiver not in others and others.isdisjoint(nbrs):
            out.append(s)
    return out
