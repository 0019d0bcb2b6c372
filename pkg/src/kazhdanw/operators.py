"""Evaluation of graph operators and their Kazhdan degree bookkeeping.

A labeling assigns a basis index of the polarized algebra to every edge.  At a
type I vertex ``r`` with ordered out-edges labeled ``(a, b)`` sits the bracket
``[b_a, b_b]`` read as a linear polynomial; an incoming edge labeled ``l``
differentiates it, leaving the structure constant ``c_ab^l``.  Two incoming
edges kill the vertex.  Edges into a type II vertex differentiate the function
placed there.

Label ranges (the coloring rule):

* edges into a function in the colored setting carry q-labels,
* the dangling edge carries m-labels,
* edges between type I vertices run over the whole basis.

The colored two-point and reduction operators restrict the final polynomial to
the affine subspace (m-coordinates set to their affine values).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .graphs import INF, ColoredGraph, FamilyTag, bernoulli, classify
from .poly import Polynomial, PolyRing, restrict_to_affine

# Overall sign attached to a labeled graph; flip here to change the convention.
EDGE_ORDER_SIGN = 1


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledTerm:
    labels: Tuple[int, ...]                    # one basis index per edge
    coefficient: Fraction                      # product of differentiated brackets
    roots: Tuple[Tuple[int, int], ...]         # label pairs at vertices with no incoming edge
    derivatives: Tuple[Tuple[str, Tuple[Tuple[int, int], ...]], ...]
    inf_label: Optional[int]


def _vertex_order(g: ColoredGraph, in_edge: Dict[int, Optional[int]], external: Mapping[int, int]):
    placed: List[int] = []
    remaining = set(range(1, g.n_type1 + 1))
    while remaining:
        ready = sorted(
            r
            for r in remaining
            if in_edge[r] is None or r in external or g.edges[in_edge[r]][0] in placed
        )
        pick = ready[0] if ready else min(remaining)
        placed.append(pick)
        remaining.discard(pick)
    return placed


def iter_labelings(
    g: ColoredGraph,
    pol,
    functions: Mapping[str, Polynomial],
    colored: bool = True,
    inf_labels: Optional[Sequence[int]] = None,
    fixed: Optional[Mapping[int, int]] = None,
    external_in: Optional[Mapping[int, int]] = None,
) -> Iterator[LabeledTerm]:
    """All labelings with a structurally non-zero contribution.

    ``fixed`` pins edge labels by edge index.  ``external_in`` feeds a virtual
    incoming edge with a given label into a type I vertex (used when a graph's
    root is differentiated by an edge of an outer graph).
    """
    alg = pol.algebra
    n_edges = len(g.edges)
    fixed = dict(fixed or {})
    external = dict(external_in or {})
    everything = tuple(range(alg.dim))
    q_set = frozenset(pol.q_indices)
    m_labels = tuple(pol.m_indices) if inf_labels is None else tuple(inf_labels)

    in_edge: Dict[int, Optional[int]] = {}
    for r in range(1, g.n_type1 + 1):
        hits = g.edges_into(r)
        if len(hits) + (r in external) >= 2:
            return
        in_edge[r] = hits[0] if hits else None

    maxexp = {name: f.max_exponents() for name, f in functions.items()}
    allowed: Dict[int, Tuple[int, ...]] = {}
    for k, (_, tgt, _) in enumerate(g.edges):
        if tgt == INF:
            opts = m_labels
        elif isinstance(tgt, str):
            if tgt not in functions:
                raise OperatorError(f"no function supplied for vertex {tgt!r}")
            opts = tuple(v for v in everything if maxexp[tgt][v] > 0 and (not colored or v in q_set))
        else:
            opts = everything
        if k in fixed:
            opts = (fixed[k],) if fixed[k] in opts else ()
        allowed[k] = opts
        if not opts:
            return
    allowed_sets = {k: frozenset(v) for k, v in allowed.items()}

    order = _vertex_order(g, in_edge, external)
    labels: List[Optional[int]] = [None] * n_edges
    counts: Dict[str, Dict[int, int]] = {name: {} for name in functions}
    roots: List[Tuple[int, int]] = []

    def bump(k, lab, delta):
        tgt = g.edges[k][1]
        if isinstance(tgt, str) and tgt != INF:
            c = counts[tgt].get(lab, 0) + delta
            counts[tgt][lab] = c
            return c <= maxexp[tgt][lab]
        return True

    def emit(coef):
        inf_k = g.inf_edge()
        derivs = tuple(
            (name, tuple(sorted((v, c) for v, c in cnt.items() if c)))
            for name, cnt in sorted(counts.items())
        )
        return LabeledTerm(
            tuple(labels), coef, tuple(roots), derivs, labels[inf_k] if inf_k is not None else None
        )

    def visit(pos, coef):
        if pos == len(order):
            yield emit(coef)
            return
        r = order[pos]
        e_in = in_edge[r]
        if r in external:
            l = external[r]
        elif e_in is not None:
            if labels[e_in] is None:
                # the source comes later (cycle): guess the incoming label now
                for cand in allowed[e_in]:
                    labels[e_in] = cand
                    yield from _place(pos, r, cand, coef)
                labels[e_in] = None
                return
            l = labels[e_in]
        else:
            l = None
        yield from _place(pos, r, l, coef)

    def _place(pos, r, l, coef):
        a, b = g.out_pair(r)
        set_a = frozenset((labels[a],)) if labels[a] is not None else allowed_sets[a]
        set_b = frozenset((labels[b],)) if labels[b] is not None else allowed_sets[b]
        if l is not None:
            candidates = [(i, j, c) for i, j, c in alg.pairs_into(l) if i in set_a and j in set_b]
        else:
            candidates = [
                (i, j, None)
                for i in sorted(set_a)
                for j in sorted(set_b)
                if alg.basis_bracket(i, j)
            ]
        prev_a, prev_b = labels[a], labels[b]
        for i, j, c in candidates:
            labels[a], labels[b] = i, j
            ok = True
            if prev_a is None:
                ok = bump(a, i, 1) and ok
            if prev_b is None:
                ok = bump(b, j, 1) and ok
            if ok:
                if c is None:
                    roots.append((i, j))
                    yield from visit(pos + 1, coef)
                    roots.pop()
                else:
                    yield from visit(pos + 1, coef * c)
            if prev_a is None:
                bump(a, i, -1)
            if prev_b is None:
                bump(b, j, -1)
        labels[a], labels[b] = prev_a, prev_b

    yield from visit(0, Fraction(EDGE_ORDER_SIGN))


class _Evaluator:
    """Caches bracket polynomials and derivatives while summing labelings."""

    def __init__(self, pol, functions: Mapping[str, Polynomial]):
        self.pol = pol
        self.ring = PolyRing.from_polarization(pol)
        self.functions = functions
        self._brackets: Dict[Tuple[int, int], Polynomial] = {}
        self._derivs: Dict[Tuple, Polynomial] = {}

    def bracket_poly(self, i, j) -> Polynomial:
        key = (i, j)
        if key not in self._brackets:
            coords = [0] * self.pol.dim
            for k, c in self.pol.algebra.basis_bracket(i, j).items():
                coords[k] = c
            self._brackets[key] = self.ring.linear(coords)
        return self._brackets[key]

    def derivative(self, name, counts) -> Polynomial:
        key = (name, counts)
        if key not in self._derivs:
            self._derivs[key] = self.functions[name].partial_multi(dict(counts))
        return self._derivs[key]

    def symbol(self, term: LabeledTerm) -> Polynomial:
        out = self.ring.const(term.coefficient)
        for i, j in term.roots:
            out = out * self.bracket_poly(i, j)
        return out

    def value(self, term: LabeledTerm, restrict: bool) -> Polynomial:
        out = self.symbol(term)
        for name, counts in term.derivatives:
            if not out:
                break
            out = out * self.derivative(name, counts)
        return restrict_to_affine(out, self.pol) if restrict else out

    def total(self, terms, restrict: bool) -> Dict[Optional[int], Polynomial]:
        grouped: Dict[Tuple, Polynomial] = {}
        for t in terms:
            key = (t.inf_label, t.derivatives)
            s = self.symbol(t)
            grouped[key] = grouped[key] + s if key in grouped else s
        out: Dict[Optional[int], Polynomial] = {}
        for (inf_label, derivs), sym in grouped.items():
            val = sym
            for name, counts in derivs:
                if not val:
                    break
                val = val * self.derivative(name, counts)
            out[inf_label] = out[inf_label] + val if inf_label in out else val
        if restrict:
            out = {k: restrict_to_affine(v, self.pol) for k, v in out.items()}
        return {k: v for k, v in out.items()}


@dataclass
class ReductionValue:
    """``sum_i B_i(F) m_i^*`` as ``{m-index: polynomial in S(q)}`` (zeros dropped)."""

    components: Dict[int, Polynomial]

    def __post_init__(self):
        self.components = {k: v for k, v in sorted(self.components.items()) if v}

    def is_zero(self) -> bool:
        return not self.components

    def __getitem__(self, i):
        return self.components[i]

    def get(self, i, default=None):
        return self.components.get(i, default)

    def __add__(self, other: "ReductionValue") -> "ReductionValue":
        out = dict(self.components)
        for k, v in other.components.items():
            out[k] = out[k] + v if k in out else v
        return ReductionValue(out)

    def scale(self, c) -> "ReductionValue":
        return ReductionValue({k: v.scale(c) for k, v in self.components.items()})

    def to_record(self, names) -> dict:
        from .poly import to_text

        return {f"{names[k]}*": to_text(v) for k, v in self.components.items()}


def _require_q(F: Polynomial, pol, what="F"):
    if not F.uses_only(pol.q_indices):
        raise OperatorError(f"{what} must lie in S(q) (m-variables present)")


def eval_two_point(
    g: ColoredGraph,
    F: Polynomial,
    G: Polynomial,
    pol,
    colored: bool = False,
    fixed: Optional[Mapping[int, int]] = None,
) -> Polynomial:
    """Bidifferential operator of a Q_{n,2} graph applied to ``(F, G)``.

    Uncolored: every edge runs over the full basis, ``F, G`` in ``S(g)``.
    Colored: ``F, G`` in ``S(q)``, function edges carry q-labels and the result
    is restricted to the affine subspace.
    """
    if g.type2 != ("F", "G") or g.inf_edge() is not None:
        raise OperatorError("two-point evaluation needs a Q_(n,2) graph")
    if colored:
        _require_q(F, pol)
        _require_q(G, pol, "G")
    funcs = {"F": F, "G": G}
    ev = _Evaluator(pol, funcs)
    totals = ev.total(iter_labelings(g, pol, funcs, colored=colored, fixed=fixed), restrict=colored)
    return totals.get(None, ev.ring.zero())


def eval_reduction(g: ColoredGraph, F: Polynomial, pol, inf_labels=None, external_in=None):
    """Reduction operator of a B, BW or W graph on ``F`` in ``S(q)``.

    Returns a :class:`ReductionValue` for graphs with a dangling edge and a
    polynomial for wheels.
    """
    tag = classify(g)
    if tag.kind not in ("B", "BW", "W"):
        raise OperatorError(f"graph {g} is not in a reduction family ({tag})")
    _require_q(F, pol)
    funcs = {"F": F}
    ev = _Evaluator(pol, funcs)
    terms = iter_labelings(g, pol, funcs, colored=True, inf_labels=inf_labels, external_in=external_in)
    totals = ev.total(terms, restrict=True)
    if tag.kind == "W":
        return totals.get(None, ev.ring.zero())
    return ReductionValue({k: v for k, v in totals.items() if k is not None})


# --------------------------------------------------------------------------
# degree checks
# --------------------------------------------------------------------------


@dataclass
class OperatorDegreeReport:
    graph: str
    family: str
    predicted: Dict[Optional[int], int]          # e_inf label -> predicted shift
    observed: List[Tuple[Optional[int], int]] = field(default_factory=list)
    failures: List[dict] = field(default_factory=list)
    nonzero: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_record(self, names=None) -> dict:
        def lab(k):
            return None if k is None else (names[k] if names else k)

        shifts = sorted({(lab(k), s) for k, s in self.observed}, key=lambda x: (str(x[0]), x[1]))
        return {
            "graph": self.graph,
            "family": self.family,
            "e_inf_label": sorted({str(lab(k)) for k in self.predicted}),
            "predicted_shift": {str(lab(k)): v for k, v in sorted(self.predicted.items(), key=lambda x: str(x[0]))},
            "observed_shifts": [[a, b] for a, b in shifts],
            "nonzero_labelings": self.nonzero,
            "failures": self.failures[:5],
            "pass": self.passed,
        }


def predicted_shift(tag: FamilyTag, pol, inf_label: Optional[int]) -> int:
    if tag.kind in ("B", "BW"):
        return pol.weights[inf_label] - 2 * (tag.size - 1)
    if tag.kind == "W":
        return -2 * tag.size
    if tag.kind == "Q_n2":
        return -2 * tag.size
    raise OperatorError(f"no degree prediction for family {tag}")


def check_degree_lemma(
    g: ColoredGraph,
    F: Polynomial,
    pol,
    G: Optional[Polynomial] = None,
    colored: bool = True,
    fixed: Optional[Mapping[int, int]] = None,
) -> OperatorDegreeReport:
    """Compare observed Kazhdan shifts against the family prediction, labeling by labeling."""
    tag = classify(g)
    funcs = {"F": F} if G is None else {"F": F, "G": G}
    base = 0
    for name, f in funcs.items():
        if not f or not f.is_kazhdan_homogeneous():
            raise OperatorError(f"{name} must be non-zero and Kazhdan-homogeneous")
        base += f.kazhdan_degree()
    if tag.kind == "Q_n2" and G is None:
        raise OperatorError("Q_(n,2) graphs need two functions")
    report = OperatorDegreeReport(g.to_text(), str(tag), {})
    ev = _Evaluator(pol, funcs)
    restrict = colored
    if tag.kind in ("B", "BW"):
        for m in pol.m_indices:
            report.predicted[m] = predicted_shift(tag, pol, m)
    else:
        report.predicted[None] = predicted_shift(tag, pol, None)
    for term in iter_labelings(g, pol, funcs, colored=colored, fixed=fixed):
        val = ev.value(term, restrict)
        if not val:
            continue
        report.nonzero += 1
        parts = val.kazhdan_split()
        want = report.predicted[term.inf_label]
        if len(parts) != 1:
            report.failures.append(
                {"labels": [pol.names[x] for x in term.labels], "reason": "not homogeneous",
                 "degrees": sorted(parts)}
            )
            continue
        shift = next(iter(parts)) - base
        report.observed.append((term.inf_label, shift))
        if shift != want:
            report.failures.append(
                {"labels": [pol.names[x] for x in term.labels], "observed": shift, "predicted": want}
            )
    return report


def wheel_weight_violations(g: ColoredGraph, F: Polynomial, pol) -> List[Tuple[int, ...]]:
    """Labelings of a wheel with non-zero output whose F-edge weights do not sum to 0."""
    if classify(g).kind != "W":
        raise OperatorError("wheel graph expected")
    ev = _Evaluator(pol, {"F": F})
    f_edges = g.edges_into("F")
    bad = []
    for term in iter_labelings(g, pol, {"F": F}):
        if not ev.value(term, True):
            continue
        if sum(pol.weights[term.labels[k]] for k in f_edges) != 0:
            bad.append(term.labels)
    return bad


def weight_additivity_violations(alg, weights: Sequence[int]) -> List[Tuple[int, int, int]]:
    """Structure constants ``c_ij^k != 0`` with ``wt(k) != wt(i) + wt(j)``.

    A labeling contributes only through non-zero structure constants, so an
    empty result means every labeling violating weight additivity at a vertex
    contributes zero.
    """
    return [
        (i, j, k)
        for (i, j, k) in sorted(alg.structure_constants)
        if weights[k] != weights[i] + weights[j]
    ]


# --------------------------------------------------------------------------
# interior / exterior compositions
# --------------------------------------------------------------------------


@dataclass
class CompositionEntry:
    alpha: int
    beta: Optional[int]
    value: Polynomial
    predicted: int
    observed: Optional[int]

    @property
    def passed(self) -> bool:
        return not self.value or self.observed == self.predicted


@dataclass
class CompositionReport:
    interior: str
    exterior_wheels: List[int]
    exterior_bernoulli: Optional[int]
    entries: List[CompositionEntry]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def nonzero(self) -> List[CompositionEntry]:
        return [e for e in self.entries if e.value]


def compose_exterior(
    interior: ColoredGraph,
    exterior_wheels: Sequence[ColoredGraph],
    exterior_bernoulli: Optional[int],
    F: Polynomial,
    pol,
) -> CompositionReport:
    """Apply an interior reduction graph, then exterior wheels, then optionally
    an exterior Bernoulli chain whose root is differentiated by the interior
    dangling edge ``alpha``.

    The predicted total shift is ``wt(out) - 2(t-1) - 2 sum r_i`` without the
    exterior chain and ``wt(out) - 2(t+m-1) - 2 sum r_i`` with a chain of ``m``
    vertices, where ``out`` is the label of the edge finally leaving the
    diagram (``alpha`` itself, or the chain's dangling edge).
    """
    tag = classify(interior)
    if tag.kind not in ("B", "BW"):
        raise OperatorError("interior graph must be of Bernoulli or BW type")
    radii = []
    for w in exterior_wheels:
        wt = classify(w)
        if wt.kind != "W":
            raise OperatorError("exterior wheels must be wheel graphs")
        radii.append(wt.size)
    if not F.is_kazhdan_homogeneous() or not F:
        raise OperatorError("F must be non-zero and Kazhdan-homogeneous")
    base = F.kazhdan_degree()
    t = tag.size
    inner = eval_reduction(interior, F, pol)
    entries = []
    for alpha in pol.m_indices:
        P = inner.get(alpha)
        if P is None:
            continue
        for w in exterior_wheels:
            if not P:
                break
            P = eval_reduction(w, P, pol)
        if exterior_bernoulli is None:
            pred = pol.weights[alpha] - 2 * (t - 1) - 2 * sum(radii)
            entries.append(_entry(alpha, None, P, pred, base))
            continue
        m = exterior_bernoulli
        if not P:
            continue
        outer = eval_reduction(bernoulli(m), P, pol, external_in={1: alpha})
        for beta in pol.m_indices:
            Q = outer.get(beta)
            if Q is None:
                continue
            pred = pol.weights[beta] - 2 * (t + m - 1) - 2 * sum(radii)
            entries.append(_entry(alpha, beta, Q, pred, base))
    return CompositionReport(interior.to_text(), radii, exterior_bernoulli, entries)


def _entry(alpha, beta, value, predicted, base):
    observed = None
    if value:
        parts = value.kazhdan_split()
        observed = next(iter(parts)) - base if len(parts) == 1 else None
    return CompositionEntry(alpha, beta, value, predicted, observed)
