"""Connections, packets, periodic arrivals and FIFO node queues."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from localvoting.topology import Topology, TopologyError, shortest_route

DEFAULT_PACKETS = 100
DEFAULT_INTERVAL = 5

EVENT_COLUMNS = ("packet_id", "connection_id", "event", "frame", "slot", "node")


@dataclass(frozen=True)
class Connection:
    id: int
    source: int
    destination: int
    route: tuple[int, ...]
    packet_count: int = DEFAULT_PACKETS
    interval_slots: int = DEFAULT_INTERVAL
    phase: int = 0

    def __post_init__(self):
        if self.source == self.destination:
            raise ValueError("connection source and destination must differ")
        if self.packet_count < 1 or self.interval_slots < 1 or self.phase < 0:
            raise ValueError("packet_count and interval_slots must be >= 1, phase >= 0")
        if self.route[0] != self.source or self.route[-1] != self.destination:
            raise ValueError("route must run from source to destination")

    def creation_slot(self, k: int) -> int:
        return self.phase + k * self.interval_slots

    @property
    def last_creation_slot(self) -> int:
        return self.creation_slot(self.packet_count - 1)


@dataclass
class Packet:
    id: int
    connection_id: int
    route: tuple[int, ...]
    created_at: int
    hop_index: int = 0
    delivered_at: int | None = None

    @property
    def source(self) -> int:
        return self.route[0]

    @property
    def destination(self) -> int:
        return self.route[-1]

    @property
    def holder(self) -> int:
        return self.route[self.hop_index]

    @property
    def next_hop(self) -> int:
        return self.route[self.hop_index + 1]


class QueueUnderflow(IndexError):
    pass


class NodeQueue:
    """FIFO packet buffer; ``q`` counts slots of demand, one per packet."""

    def __init__(self):
        self._buf = deque()

    @property
    def q(self) -> int:
        return len(self._buf)

    def __len__(self):
        return len(self._buf)

    def enqueue(self, packets) -> None:
        self._buf.extend(packets)

    def dequeue_head(self) -> Packet:
        if not self._buf:
            raise QueueUnderflow("dequeue from empty node queue")
        return self._buf.popleft()

    def __iter__(self):
        return iter(self._buf)


def make_connection(topology: Topology, cid: int, src: int, dst: int, **kw) -> Connection:
    return Connection(cid, src, dst, tuple(shortest_route(topology, src, dst)), **kw)


def generate_connections(
    topology: Topology,
    count: int,
    seed,
    packet_count: int = DEFAULT_PACKETS,
    interval_slots: int = DEFAULT_INTERVAL,
    phase: int = 0,
) -> list[Connection]:
    """``count`` distinct random ordered (source, destination) pairs with routes."""
    n = topology.n
    pairs = n * (n - 1)
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > pairs:
        raise ValueError(f"cannot draw {count} distinct pairs from {n} nodes")
    if not topology.is_connected():
        raise TopologyError("connections require a connected topology")
    rng = np.random.default_rng(seed)
    picks = rng.choice(pairs, size=count, replace=False)
    conns = []
    for cid, idx in enumerate(picks.tolist()):
        src, off = divmod(idx, n - 1)
        dst = off if off < src else off + 1
        conns.append(
            make_connection(
                topology, cid, src, dst,
                packet_count=packet_count, interval_slots=interval_slots, phase=phase,
            )
        )
    return conns


def packet_id_offsets(connections) -> list[int]:
    offsets, total = [], 0
    for c in connections:
        offsets.append(total)
        total += c.packet_count
    return offsets


def arrivals_for_frame(connections, t: int, slots_per_frame: int) -> dict[int, list[Packet]]:
    """New source packets whose creation slot lies in frame ``t``, keyed by source.

    Packets of one source are ordered by creation slot, then connection id.
    """
    lo, hi = t * slots_per_frame, (t + 1) * slots_per_frame
    fresh = []
    for c, base in zip(connections, packet_id_offsets(connections)):
        # smallest k with creation_slot(k) >= lo
        k0 = max(0, -(-(lo - c.phase) // c.interval_slots))
        for k in range(k0, c.packet_count):
            at = c.creation_slot(k)
            if at >= hi:
                break
            fresh.append(Packet(base + k, c.id, c.route, at))
    fresh.sort(key=lambda pk: (pk.created_at, pk.connection_id))
    out: dict[int, list[Packet]] = {}
    for pk in fresh:
        out.setdefault(pk.source, []).append(pk)
    return out


def generation_horizon(connections, slots_per_frame: int) -> int:
    """Frame index holding the last packet creation (-1 with no connections)."""
    if not connections:
        return -1
    return max(c.last_creation_slot for c in connections) // slots_per_frame
