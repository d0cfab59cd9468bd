import networkx as nx
import pytest
from hypothesis import strategies as st

from localvoting.topology import Topology

ACCEPTANCE = {}


def record(criterion, ok, detail):
    ACCEPTANCE[criterion] = (ok, detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


def to_nx(topo):
    g = nx.Graph()
    g.add_nodes_from(range(topo.n))
    g.add_edges_from(topo.edges)
    return g


def bfs_two_hop(topo, i):
    """Independent oracle: nodes at graph distance 1 or 2."""
    dist = nx.single_source_shortest_path_length(to_nx(topo), i, cutoff=2)
    return {j for j, d in dist.items() if d in (1, 2)}


@st.composite
def graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Topology(n, frozenset(edges))


@st.composite
def connected_graphs(draw, min_n=2, max_n=10):
    n = draw(st.integers(min_n, max_n))
    # random spanning tree plus extra edges
    edges = set()
    for v in range(1, n):
        edges.add((draw(st.integers(0, v - 1)), v))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges |= set(draw(st.lists(st.sampled_from(pairs), max_size=n)))
    return Topology(n, frozenset(edges))


def eq3_mismatches(states, events, n):
    """Recompute q_{t+1} = max(0, q_t - p_t) + z_{t+1} from logs; return mismatches.

    ``z_{t+1}`` counts packets created at, or forwarded into, a node during
    frame ``t`` (final-hop deliveries are not queued anywhere).
    """
    q, p = {}, {}
    for frame, node, qq, pp, _ in states:
        q[int(frame), int(node)] = int(qq)
        p[int(frame), int(node)] = int(pp)
    z = {}
    for _, _, kind, frame, _, node in events:
        if kind in ("created", "hop"):
            key = (int(frame) + 1, int(node))
            z[key] = z.get(key, 0) + 1
    frames = sorted({f for f, _ in q})
    bad = []
    for i in range(n):
        if q.get((0, i), 0) != 0:
            bad.append((0, i, "q0"))
    for t in frames:
        for i in range(n):
            expect = max(0, q[t, i] - p[t, i]) + z.get((t + 1, i), 0)
            got = q.get((t + 1, i))
            if got is None:
                if expect != 0:
                    bad.append((t + 1, i, "undrained"))
            elif got != expect:
                bad.append((t + 1, i, got, expect))
    return bad


def conflicts_in(owner_sets, topo):
    """Independent Eq. 2 check over recorded per-frame slot owners."""
    g = to_nx(topo)
    near = {i: set(nx.single_source_shortest_path_length(g, i, cutoff=2)) - {i} for i in g}
    out = []
    for t, frame in enumerate(owner_sets):
        for s, owners in enumerate(frame):
            for i in owners:
                for j in owners:
                    if j != i and j in near[i]:
                        out.append((t, s, i, j))
    return out
