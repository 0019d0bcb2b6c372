"""Admissible Kontsevich graphs for the reduction families and Q_{n,2}.

Type I vertices are the integers ``1..n``; type II vertices are the strings
``"F"`` (and ``"G"``); the dangling edge points to :data:`INF`.  Edges are
stored source by source, each vertex contributing its ordered pair
``(e_r^1, e_r^2)``.

Colors are only intrinsic on the dangling edge (always ``-``).  Other edges
carry ``None`` and get their label range when the operator is evaluated.

Shapes of the reduction families, with ``standard`` edge order at every vertex
(first edge derives the function):

* ``B(t)``  chain ``1 -> 2 -> ... -> t -> inf``, every vertex derives F once.
* ``W(i)``  cycle ``1 -> 2 -> ... -> i -> 1``, every vertex derives F once.
* ``B_l W_m`` a wheel on ``1..m`` whose vertex ``m`` sends its first edge to the
  root ``m+1`` of a chain ``m+1 -> ... -> m+l -> inf``; the chain vertices
  derive F, so the graph has ``m + l - 1`` edges into F.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, List, Optional, Sequence, Tuple, Union

INF = "inf"
Target = Union[int, str]
Edge = Tuple[int, Target, Optional[str]]

MAX_Q_N2 = 4


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ColoredGraph:
    n_type1: int
    type2: Tuple[str, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        n = self.n_type1
        if n < 1:
            raise GraphError("a graph needs at least one type I vertex")
        if not 1 <= len(self.type2) <= 2 or len(set(self.type2)) != len(self.type2):
            raise GraphError("one or two distinct type II vertices required")
        edges = tuple(sorted(self.edges, key=lambda e: e[0]))  # stable: keeps e^1 before e^2
        object.__setattr__(self, "edges", edges)
        out = {r: 0 for r in range(1, n + 1)}
        seen = set()
        n_inf = 0
        for src, tgt, color in edges:
            if src not in out:
                raise GraphError(f"edge source {src} is not a type I vertex")
            if color not in (None, "+", "-"):
                raise GraphError(f"bad color {color!r}")
            if tgt == INF:
                n_inf += 1
                if color != "-":
                    raise GraphError("the dangling edge must be colored '-'")
            elif isinstance(tgt, str):
                if tgt not in self.type2:
                    raise GraphError(f"unknown type II vertex {tgt!r}")
            elif not 1 <= tgt <= n:
                raise GraphError(f"edge target {tgt} out of range")
            if tgt == src:
                raise GraphError(f"loop at vertex {src}")
            if (src, tgt, color) in seen:
                raise GraphError(f"double edge {src} -> {tgt}")
            seen.add((src, tgt, color))
            out[src] += 1
        bad = [r for r, k in out.items() if k != 2]
        if bad:
            raise GraphError(f"type I vertices {bad} do not have out-degree 2")
        if n_inf > 1:
            raise GraphError("at most one edge may point to infinity")

    # -- structure --------------------------------------------------------
    def out_pair(self, r: int) -> Tuple[int, int]:
        """Edge indices ``(e_r^1, e_r^2)``."""
        i = 2 * (r - 1)
        return i, i + 1

    def targets(self, r: int) -> Tuple[Target, Target]:
        a, b = self.out_pair(r)
        return self.edges[a][1], self.edges[b][1]

    def edges_into(self, target: Target) -> List[int]:
        return [k for k, e in enumerate(self.edges) if e[1] == target]

    def inf_edge(self) -> Optional[int]:
        hits = self.edges_into(INF)
        return hits[0] if hits else None

    def internal_in_degree(self, r: int) -> int:
        return len(self.edges_into(r))

    def swapped(self, r: int) -> "ColoredGraph":
        """Same graph with the edge order at vertex ``r`` reversed."""
        edges = list(self.edges)
        a, b = self.out_pair(r)
        edges[a], edges[b] = edges[b], edges[a]
        return ColoredGraph(self.n_type1, self.type2, tuple(edges))

    def to_text(self) -> str:
        parts = []
        for src, tgt, color in self.edges:
            parts.append(f"({src},{tgt},{color or '*'})")
        head = str(self.n_type1) if self.type2 == ("F",) else f"{self.n_type1}/{''.join(self.type2)}"
        return f"{head}; [{','.join(parts)}]"

    def to_record(self) -> dict:
        return {
            "n_type1": self.n_type1,
            "type2": list(self.type2),
            "edges": [[s, t, c] for s, t, c in self.edges],
        }

    def __str__(self):
        return self.to_text()


_EDGE_RE = re.compile(r"\(\s*(\d+)\s*,\s*([A-Za-z0-9]+)\s*,\s*([+\-*])\s*\)")


def from_text(text: str) -> ColoredGraph:
    """Inverse of :meth:`ColoredGraph.to_text`."""
    try:
        head, body = text.split(";", 1)
    except ValueError:
        raise GraphError(f"graph text needs 'n; [...]': {text!r}") from None
    head = head.strip()
    if "/" in head:
        n_str, t2 = head.split("/", 1)
        type2 = tuple(t2.strip())
    else:
        n_str, type2 = head, ("F",)
    edges = []
    for src, tgt, color in _EDGE_RE.findall(body):
        t: Target = int(tgt) if tgt.isdigit() else tgt
        edges.append((int(src), t, None if color == "*" else color))
    return ColoredGraph(int(n_str), type2, tuple(edges))


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------


def _pair(first: Target, second: Target, swap: bool, second_color=None):
    e1 = (first, None)
    e2 = (second, second_color)
    return (e2, e1) if swap else (e1, e2)


def _build(n: int, pairs, type2=("F",)) -> ColoredGraph:
    edges = []
    for r, pair in enumerate(pairs, start=1):
        for tgt, color in pair:
            edges.append((r, tgt, color))
    return ColoredGraph(n, type2, tuple(edges))


def _orders(n: int, orders: Optional[Sequence[bool]]) -> Tuple[bool, ...]:
    if orders is None:
        return (False,) * n
    if len(orders) != n:
        raise GraphError("one edge-order flag per type I vertex")
    return tuple(bool(o) for o in orders)


def bernoulli(t: int, orders: Optional[Sequence[bool]] = None) -> ColoredGraph:
    if t < 1:
        raise GraphError("Bernoulli graphs need t >= 1")
    orders = _orders(t, orders)
    pairs = []
    for k in range(1, t + 1):
        nxt = (k + 1) if k < t else INF
        pairs.append(_pair("F", nxt, orders[k - 1], "-" if nxt == INF else None))
    return _build(t, pairs)


def wheel(i: int, orders: Optional[Sequence[bool]] = None) -> ColoredGraph:
    if i < 2:
        raise GraphError("wheels need i >= 2")
    orders = _orders(i, orders)
    pairs = [_pair("F", (k % i) + 1, orders[k - 1]) for k in range(1, i + 1)]
    return _build(i, pairs)


def bernoulli_wheel(tail: int, wheel_size: int, orders: Optional[Sequence[bool]] = None) -> ColoredGraph:
    """``B_l W_m`` with ``l = tail`` chain vertices and ``m = wheel_size`` wheel vertices."""
    if tail < 1 or wheel_size < 2:
        raise GraphError("need tail >= 1 and wheel_size >= 2")
    n = tail + wheel_size
    orders = _orders(n, orders)
    pairs = []
    for k in range(1, wheel_size):
        pairs.append(_pair("F", k + 1, orders[k - 1]))
    pairs.append(_pair(wheel_size + 1, 1, orders[wheel_size - 1]))
    for k in range(wheel_size + 1, n + 1):
        nxt = k + 1 if k < n else INF
        pairs.append(_pair("F", nxt, orders[k - 1], "-" if nxt == INF else None))
    return _build(n, pairs)


def first_order_graph() -> ColoredGraph:
    """The single-vertex graph of the first-order reduction operator."""
    return bernoulli(1)


def two_point_chain() -> ColoredGraph:
    """Chain ``1 -> 2 -> 3 -> 4`` deriving F four times and G once (in Q_{4,2})."""
    pairs = [(("F", None), (2, None)), (("F", None), (3, None)), (("F", None), (4, None)),
             (("F", None), ("G", None))]
    return _build(4, pairs, type2=("F", "G"))


def bw_example() -> ColoredGraph:
    """A Bernoulli chain of three vertices hanging off a four-vertex wheel."""
    return bernoulli_wheel(3, 4)


NAMED_GRAPHS = {
    "first-order": first_order_graph,
    "chain": two_point_chain,
    "bw": bw_example,
    "fig2": first_order_graph,
    "fig3": two_point_chain,
    "fig1-bw": bw_example,
}


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------


def enumerate_bernoulli(t: int, edge_orders: bool = True) -> List[ColoredGraph]:
    if t < 1:
        raise GraphError("t must be >= 1")
    if not edge_orders:
        return [bernoulli(t)]
    return [bernoulli(t, o) for o in product((False, True), repeat=t)]


def _least_rotation(bits: Tuple[bool, ...]) -> Tuple[bool, ...]:
    return min(bits[k:] + bits[:k] for k in range(len(bits)))


def enumerate_wheels(i: int, edge_orders: bool = False) -> List[ColoredGraph]:
    """Wheels on ``i`` vertices up to rotation.

    By default only the standard edge order is produced (one wheel).  With
    ``edge_orders=True`` every per-vertex ordering is produced once per
    rotation class, using the lexicographically least rotation.
    """
    if i < 2:
        raise GraphError("i must be >= 2")
    if not edge_orders:
        return [wheel(i)]
    classes = sorted({_least_rotation(bits) for bits in product((False, True), repeat=i)})
    return [wheel(i, bits) for bits in classes]


def enumerate_bw(total: int, edge_orders: bool = True) -> List[ColoredGraph]:
    if total < 4:
        raise GraphError("BW families start at 4 type I vertices")
    out = []
    for m in range(2, total):
        tail = total - m
        if edge_orders:
            out.extend(bernoulli_wheel(tail, m, o) for o in product((False, True), repeat=total))
        else:
            out.append(bernoulli_wheel(tail, m))
    return out


def iter_q_n2(n: int) -> Iterable[ColoredGraph]:
    if n < 1:
        raise GraphError("n must be >= 1")
    vertices = list(range(1, n + 1))
    choices = []
    for r in vertices:
        targets = [v for v in vertices if v != r] + ["F", "G"]
        choices.append([(a, b) for a in targets for b in targets if a != b])
    for pick in product(*choices):
        yield _build(n, [((a, None), (b, None)) for a, b in pick], type2=("F", "G"))


def enumerate_q_n2(n: int, max_n: int = MAX_Q_N2) -> List[ColoredGraph]:
    if n > max_n:
        raise GraphError(f"Q_(n,2) enumeration capped at n <= {max_n}")
    return list(iter_q_n2(n))


def count_q_n2(n: int) -> int:
    return (n * (n + 1)) ** n


def sample_q_n2(n: int, k: int, rng: random.Random) -> List[ColoredGraph]:
    """``k`` uniformly sampled graphs of Q_{n,2} (with replacement)."""
    vertices = list(range(1, n + 1))
    out = []
    for _ in range(k):
        pairs = []
        for r in vertices:
            targets = [v for v in vertices if v != r] + ["F", "G"]
            a, b = rng.sample(targets, 2)
            pairs.append(((a, None), (b, None)))
        out.append(_build(n, pairs, type2=("F", "G")))
    return out


# --------------------------------------------------------------------------
# classification and canonical forms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyTag:
    kind: str                       # "B", "W", "BW", "Q_n2", "OTHER"
    size: int = 0
    wheel_size: Optional[int] = None
    tail_size: Optional[int] = None

    def __str__(self):
        if self.kind == "BW":
            return f"BW({self.size};{self.wheel_size},{self.tail_size})"
        if self.kind == "OTHER":
            return "OTHER"
        return f"{self.kind}({self.size})"


def _walk(start, succ, stop):
    """Follow ``succ`` from ``start`` until ``stop`` or a repeat; return the path."""
    path = []
    v = start
    while v != stop and v not in path:
        if not isinstance(v, int):
            return path, v
        path.append(v)
        v = succ.get(v)
    return path, v


def classify(g: ColoredGraph) -> FamilyTag:
    n = g.n_type1
    if g.type2 == ("F", "G"):
        return FamilyTag("Q_n2", n) if g.inf_edge() is None else FamilyTag("OTHER", n)
    f_count = {r: sum(1 for t in g.targets(r) if t == "F") for r in range(1, n + 1)}
    n_inf = 1 if g.inf_edge() is not None else 0
    succ = {}
    for r in range(1, n + 1):
        others = [t for t in g.targets(r) if t != "F"]
        if len(others) == 1:
            succ[r] = others[0]
    if all(c == 1 for c in f_count.values()):
        if n_inf == 0 and n >= 2:
            path, end = _walk(1, succ, None)
            if end == 1 and len(path) == n:
                return FamilyTag("W", n)
        if n_inf == 1:
            roots = [r for r in range(1, n + 1) if g.internal_in_degree(r) == 0]
            if len(roots) == 1:
                path, end = _walk(roots[0], succ, INF)
                if end == INF and len(path) == n:
                    return FamilyTag("B", n)
        return FamilyTag("OTHER", n)
    attach = [r for r, c in f_count.items() if c == 0]
    if n_inf == 1 and len(attach) == 1 and all(c <= 1 for c in f_count.values()):
        a = attach[0]
        t1, t2 = g.targets(a)
        if isinstance(t1, int) and isinstance(t2, int):
            for cyc, root in ((t2, t1), (t1, t2)):
                ring, end = _walk(cyc, succ, a)
                chain, cend = _walk(root, succ, INF)
                if (
                    end == a
                    and cend == INF
                    and chain
                    and not set(ring) & set(chain)
                    and len(ring) + 1 + len(chain) == n
                ):
                    return FamilyTag("BW", n, len(ring) + 1, len(chain))
    return FamilyTag("OTHER", n)


def _target_key(t: Target, perm=None):
    if isinstance(t, int):
        return (0, perm[t] if perm else t)
    return (1, t)


def canonical_form(g: ColoredGraph) -> tuple:
    """Invariant under relabeling type I vertices (edge order at each vertex kept)."""
    n = g.n_type1
    best = None
    for perm_t in permutations(range(1, n + 1)):
        perm = {old: new for old, new in zip(range(1, n + 1), perm_t)}
        rows = [None] * n
        for r in range(1, n + 1):
            rows[perm[r] - 1] = tuple(_target_key(t, perm) for t in g.targets(r))
        key = tuple(rows)
        if best is None or key < best:
            best = key
    return (g.type2, best)
