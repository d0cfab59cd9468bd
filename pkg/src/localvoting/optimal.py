"""Brute-force minmax completion on complete-conflict instances vs the equal-ratio policy.

On a complete-conflict instance every slot can carry at most one node, there
are no arrivals, and a policy picks per-frame allocations ``p`` with
``sum(p) <= S``. A node's completion frame is the first frame after which its
queue is empty.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_NODES = 3
MAX_SLOTS = 8
MAX_QUEUE = 6


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    queues: tuple[int, ...]
    slots_per_frame: int

    def check(self) -> None:
        if not 1 <= len(self.queues) <= MAX_NODES:
            raise InstanceTooLarge(f"at most {MAX_NODES} nodes")
        if not 1 <= self.slots_per_frame <= MAX_SLOTS:
            raise InstanceTooLarge(f"S must lie in [1, {MAX_SLOTS}]")
        if any(not 0 <= q <= MAX_QUEUE for q in self.queues):
            raise InstanceTooLarge(f"initial queues must lie in [0, {MAX_QUEUE}]")


@dataclass(frozen=True)
class OracleResult:
    optimal: int
    equal_ratio: int
    allocations: tuple[tuple[int, ...], ...]

    @property
    def gap(self) -> int:
        return self.equal_ratio - self.optimal


def allocations(n: int, S: int):
    """Every integer vector ``p >= 0`` of length ``n`` with ``sum(p) <= S``."""
    for p in itertools.product(range(S + 1), repeat=n):
        if sum(p) <= S:
            yield p


def brute_force_minmax(queues, S: int) -> int:
    """Minimum over all allocation sequences of the latest node completion frame.

    Exhaustive search over per-frame allocations; memoized on the queue vector.
    """
    options = tuple(allocations(len(queues), S))

    @lru_cache(maxsize=None)
    def best(q: tuple[int, ...]) -> int:
        if not any(q):
            return 0
        result = None
        for p in options:
            nxt = tuple(max(0, a - b) for a, b in zip(q, p))
            if nxt == q:
                continue
            cand = 1 + best(nxt)
            if result is None or cand < result:
                result = cand
        return result

    return best(tuple(queues))


def largest_remainder(weights, S: int) -> tuple[int, ...]:
    """Apportion ``S`` seats proportionally to ``weights`` (Hamilton method).

    Ties in the remainder go to the lower index. Uses exact integer arithmetic.
    """
    total = sum(weights)
    if total <= 0:
        raise ValueError("weights must have a positive sum")
    base = [w * S // total for w in weights]
    rems = [w * S - b * total for w, b in zip(weights, base)]
    left = S - sum(base)
    for k in sorted(range(len(weights)), key=lambda k: (-rems[k], k))[:left]:
        base[k] += 1
    return tuple(base)


def equal_ratio_allocation(queues, S: int) -> tuple[int, ...]:
    """Slots proportional to ``max(1, q_i)`` over the nodes that still have backlog.

    Drained nodes receive nothing; weighting them at one would hand them
    slots by rounding and, at ``S = 1``, can starve a backlogged node forever.
    """
    active = [k for k, q in enumerate(queues) if q > 0]
    p = [0] * len(queues)
    if active:
        for k, share in zip(active, largest_remainder([max(1, queues[k]) for k in active], S)):
            p[k] = share
    return tuple(p)


def equal_ratio_completion(queues, S: int, frame_limit: int = 10_000):
    q = tuple(queues)
    frames = 0
    used = []
    while any(q):
        if frames >= frame_limit:
            raise RuntimeError("equal-ratio policy did not drain the queues")
        p = equal_ratio_allocation(q, S)
        used.append(p)
        q = tuple(max(0, a - b) for a, b in zip(q, p))
        frames += 1
    return frames, tuple(used)


def lemma1_oracle(instance: Instance) -> OracleResult:
    instance.check()
    eq, used = equal_ratio_completion(instance.queues, instance.slots_per_frame)
    return OracleResult(brute_force_minmax(instance.queues, instance.slots_per_frame), eq, used)


def all_instances():
    for n in range(2, MAX_NODES + 1):
        for S in range(1, MAX_SLOTS + 1):
            for q in itertools.product(range(MAX_QUEUE + 1), repeat=n):
                yield Instance(q, S)
