"""Network graphs, one-hop / two-hop neighborhoods, generators and routing."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

import numpy as np

MAX_PLACEMENT_RETRIES = 100


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Topology:
    """Undirected graph over nodes ``0..n-1``.

    Edges are stored as ``(u, v)`` pairs with ``u < v``. Neighborhoods are
    derived once at construction; the object is immutable afterwards.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    positions: tuple[tuple[float, float], ...] | None = None
    _one_hop: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    _two_hop: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise TopologyError(f"node count must be non-negative, got {self.n}")
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise TopologyError(f"self-loop on node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise TopologyError(f"edge ({u}, {v}) outside node range [0, {self.n})")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

        adj = [set() for _ in range(self.n)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        one = tuple(frozenset(a) for a in adj)
        two = []
        for i in range(self.n):
            reach = set(one[i])
            for j in one[i]:
                reach |= one[j]
            reach.discard(i)
            two.append(frozenset(reach))
        object.__setattr__(self, "_one_hop", one)
        object.__setattr__(self, "_two_hop", tuple(two))

    def _check(self, i: int) -> None:
        if not (0 <= i < self.n):
            raise TopologyError(f"invalid node id {i} (n={self.n})")

    def one_hop(self, i: int) -> frozenset[int]:
        self._check(i)
        return self._one_hop[i]

    def two_hop(self, i: int) -> frozenset[int]:
        """Nodes adjacent to ``i`` or sharing a neighbor with it, excluding ``i``."""
        self._check(i)
        return self._two_hop[i]

    def degree(self, i: int) -> int:
        return len(self.one_hop(i))

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(bfs_distances(self, 0)) == self.n


def one_hop(topology: Topology, i: int) -> frozenset[int]:
    return topology.one_hop(i)


def two_hop(topology: Topology, i: int) -> frozenset[int]:
    return topology.two_hop(i)


def bfs_distances(topology: Topology, src: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = deque([src])
    while frontier:
        u = frontier.popleft()
        for v in sorted(topology.one_hop(u)):
            if v not in dist:
                dist[v] = dist[u] + 1
                frontier.append(v)
    return dist


def shortest_route(topology: Topology, src: int, dst: int) -> list[int]:
    """Minimum-hop path ``[src, ..., dst]``.

    Ties are broken toward the lowest next hop: BFS runs backwards from the
    destination, then the path is walked forward always taking the lowest-id
    neighbor that is one step closer.
    """
    topology._check(src)
    topology._check(dst)
    if src == dst:
        raise TopologyError("route requires src != dst")
    dist = bfs_distances(topology, dst)
    if src not in dist:
        raise TopologyError(f"node {dst} unreachable from {src}")
    route = [src]
    cur = src
    while cur != dst:
        cur = min(v for v in topology.one_hop(cur) if dist.get(v) == dist[cur] - 1)
        route.append(cur)
    return route


def generate_geometric(n: int, area_side: float, radius: float, seed) -> Topology:
    """Connected unit-disk graph with nodes uniform in ``[0, area_side]^2``.

    Placement is redrawn from the same generator until the graph is connected,
    at most ``MAX_PLACEMENT_RETRIES`` times.
    """
    if n < 1:
        raise TopologyError("n must be >= 1")
    if radius <= 0 or area_side <= 0:
        raise TopologyError("radius and area_side must be positive")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_PLACEMENT_RETRIES):
        pos = rng.uniform(0.0, area_side, size=(n, 2))
        diff = pos[:, None, :] - pos[None, :, :]
        within = np.hypot(diff[..., 0], diff[..., 1]) <= radius
        iu, ju = np.nonzero(np.triu(within, k=1))
        topo = Topology(
            n,
            frozenset(zip(iu.tolist(), ju.tolist())),
            tuple((float(x), float(y)) for x, y in pos),
        )
        if topo.is_connected():
            return topo
    raise TopologyError(
        f"no connected placement of {n} nodes (side={area_side}, radius={radius}) "
        f"after {MAX_PLACEMENT_RETRIES} attempts"
    )


def grid(rows: int, cols: int) -> Topology:
    """4-neighbor lattice; node id is ``r * cols + c``."""
    edges = set()
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.add((i, i + 1))
            if r + 1 < rows:
                edges.add((i, i + cols))
    return Topology(rows * cols, frozenset(edges))


def path(n: int) -> Topology:
    return Topology(n, frozenset((i, i + 1) for i in range(n - 1)))


def complete(n: int) -> Topology:
    return Topology(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def parse_topology(text: str) -> Topology:
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise TopologyError(f"line {lineno}: expected integers, got {line!r}") from None
        if n is None:
            if len(nums) != 1 or nums[0] < 1:
                raise TopologyError(f"line {lineno}: expected positive node count, got {line!r}")
            n = nums[0]
            continue
        if len(nums) != 2:
            raise TopologyError(f"line {lineno}: expected 'u v', got {line!r}")
        u, v = nums
        if not (0 <= u < v < n):
            raise TopologyError(f"line {lineno}: edge {u} {v} violates 0 <= u < v < {n}")
        edges.add((u, v))
    if n is None:
        raise TopologyError("missing node count line")
    return Topology(n, frozenset(edges))


def format_topology(topology: Topology) -> str:
    lines = [str(topology.n)]
    lines += [f"{u} {v}" for u, v in sorted(topology.edges)]
    return "\n".join(lines) + "\n"


def load_topology(path: str | os.PathLike) -> Topology:
    with open(path) as fh:
        return parse_topology(fh.read())


def save_topology(topology: Topology, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_topology(topology))
