"""Independent reference computations used by the tests.

Nothing here imports the graph constructors or the matrix helpers of the
package: graph families are rebuilt by brute force over all out-degree-two
digraphs and filtered structurally, and sl3 brackets come from plain 3x3
matrix commutators.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import networkx as nx

F, G, INF = "F", "G", "inf"


# ---------------------------------------------------------------------------
# graph families by generate-and-filter
# ---------------------------------------------------------------------------


def all_slot_assignments(n, sinks):
    """Every assignment of ordered edge pairs ``(first, second)`` to vertices ``1..n``.

    Targets are other type I vertices or one of ``sinks``; loops and double
    edges are excluded.
    """
    per_vertex = []
    for r in range(1, n + 1):
        targets = [v for v in range(1, n + 1) if v != r] + list(sinks)
        per_vertex.append([(a, b) for a in targets for b in targets if a != b])
    return product(*per_vertex)


def _internal(pairs):
    return [(r, t) for r, pair in enumerate(pairs, 1) for t in pair if isinstance(t, int)]


def _count_to(pairs, sink):
    return sum(pair.count(sink) for pair in pairs)


def is_bernoulli(pairs):
    n = len(pairs)
    if _count_to(pairs, INF) != 1 or any(pair.count(F) != 1 for pair in pairs):
        return False
    d = nx.DiGraph()
    d.add_nodes_from(range(1, n + 1))
    d.add_edges_from(_internal(pairs))
    if not nx.is_directed_acyclic_graph(d):
        return False
    if any(deg > 1 for _, deg in d.in_degree()) or any(deg > 1 for _, deg in d.out_degree()):
        return False
    ends = [r for r, pair in enumerate(pairs, 1) if INF in pair]
    return nx.is_weakly_connected(d) and d.out_degree(ends[0]) == 0


def is_wheel(pairs):
    n = len(pairs)
    if n < 2 or _count_to(pairs, INF) or any(pair.count(F) != 1 for pair in pairs):
        return False
    d = nx.DiGraph(_internal(pairs))
    cycles = list(nx.simple_cycles(d))
    return d.number_of_nodes() == n and len(cycles) == 1 and len(cycles[0]) == n


def is_bernoulli_wheel(pairs):
    """A single directed cycle of length >= 2 with a Bernoulli chain leaving one cycle vertex."""
    n = len(pairs)
    if _count_to(pairs, INF) != 1 or _count_to(pairs, F) != n - 1:
        return False
    d = nx.DiGraph()
    d.add_nodes_from(range(1, n + 1))
    d.add_edges_from(_internal(pairs))
    if not nx.is_weakly_connected(d) or any(deg != 1 for _, deg in d.in_degree()):
        return False
    cycles = list(nx.simple_cycles(d))
    if len(cycles) != 1 or len(cycles[0]) < 2 or len(cycles[0]) == n:
        return False
    attach = [r for r in range(1, n + 1) if d.out_degree(r) == 2]
    return len(attach) == 1 and attach[0] in cycles[0]


def _as_digraph(pairs, keep_order):
    d = nx.DiGraph()
    for r, pair in enumerate(pairs, 1):
        d.add_node(r, kind="I")
        for slot, t in enumerate(pair):
            node = t if isinstance(t, int) else ("sink", t)
            d.add_node(node, kind=str(t) if not isinstance(t, int) else "I")
            d.add_edge(r, node, slot=slot if keep_order else 0)
    return d


def dedup(candidates, keep_order=True):
    """Representatives of the candidates up to relabeling of type I vertices."""
    reps = []
    buckets = {}
    nm = nx.algorithms.isomorphism.categorical_node_match("kind", None)
    em = nx.algorithms.isomorphism.categorical_edge_match("slot", None)
    for pairs in candidates:
        d = _as_digraph(pairs, keep_order)
        key = nx.weisfeiler_lehman_graph_hash(d, node_attr="kind", edge_attr="slot")
        bucket = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(d, other, node_match=nm, edge_match=em) for other in bucket):
            continue
        bucket.append(d)
        reps.append(pairs)
    return reps


def oracle_family(kind, n, keep_order=True):
    predicate = {"B": is_bernoulli, "W": is_wheel, "BW": is_bernoulli_wheel}[kind]
    sinks = (F,) if kind == "W" else (F, INF)
    return dedup((p for p in all_slot_assignments(n, sinks) if predicate(p)), keep_order)


def oracle_q_n2_count(n):
    """Admissible graphs with two ground vertices; type I vertices are labeled."""
    return sum(1 for _ in all_slot_assignments(n, (F, G)))


# ---------------------------------------------------------------------------
# sl3 in the defining representation
# ---------------------------------------------------------------------------

SL3_NAMES = ("E12", "E13", "E23", "H1", "H2", "E21", "E31", "E32")


def sl3_matrix(coords):
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for name, c in zip(SL3_NAMES, coords):
        if name.startswith("E"):
            i, j = int(name[1]) - 1, int(name[2]) - 1
            m[i][j] += c
        else:
            k = int(name[1]) - 1
            m[k][k] += c
            m[k + 1][k + 1] -= c
    return m


def sl3_coords(m):
    out = []
    for name in SL3_NAMES:
        if name.startswith("E"):
            out.append(m[int(name[1]) - 1][int(name[2]) - 1])
        else:
            k = int(name[1])
            out.append(sum(m[i][i] for i in range(k)))
    return tuple(out)


def commutator(a, b):
    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)] for i in range(3)]

    ab, ba = mul(a, b), mul(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(3)] for i in range(3)]
