"""The reduction differential and its Kazhdan-graded structure.

``d1`` is the first-order part of the reduction differential on ``S(q)``; its
kernel, computed degree by degree, is the classical W-algebra.  Higher odd
orders are kept as formal sums with symbolic graph weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .graphs import enumerate_bernoulli, enumerate_bw, first_order_graph
from .linalg import sparse_nullspace
from .operators import OperatorError, ReductionValue, eval_reduction
from .poly import Polynomial, PolyRing, to_text

MAX_SYMBOLIC_ORDER = 5


class ReductionError(ValueError):
    pass


def d1(F: Polynomial, pol) -> ReductionValue:
    """First-order reduction operator (the single-vertex graph, weight 1)."""
    try:
        return eval_reduction(first_order_graph(), F, pol)
    except OperatorError as exc:
        raise ReductionError(str(exc)) from None


@dataclass
class GradedKernelBasis:
    basis: Dict[int, List[Polynomial]]

    @property
    def dimensions(self) -> Dict[int, int]:
        return {d: len(v) for d, v in sorted(self.basis.items())}

    def table(self) -> List[int]:
        top = max(self.basis, default=-1)
        return [len(self.basis.get(d, ())) for d in range(top + 1)]

    def to_record(self) -> dict:
        return {
            "dimensions": self.table(),
            "basis": {str(d): [to_text(p) for p in ps] for d, ps in sorted(self.basis.items()) if ps},
        }


def _d1_column(mono, ring: PolyRing, pol, cache) -> Dict[Tuple[int, Tuple], Fraction]:
    """``d1`` of one monomial, flattened to ``{(m-index, monomial): coeff}``."""
    if mono not in cache:
        val = d1(Polynomial({mono: Fraction(1)}, ring), pol)
        col = {}
        for i, P in val.components.items():
            for m, c in P.terms.items():
                col[(i, m)] = c
        cache[mono] = col
    return cache[mono]


def kernel_d1(max_deg: int, pol) -> GradedKernelBasis:
    """Kernel of ``d1`` on each Kazhdan-homogeneous block of ``S(q)``, degrees ``0..max_deg``.

    Monomials with more factors come first in each block, so the echelon
    representatives have their leading (fewest-factor) monomial last with
    coefficient 1, e.g. ``e - 1/4*h^2`` for sl2.
    """
    if max_deg < 0:
        raise ReductionError("max_deg must be >= 0")
    ring = PolyRing.from_polarization(pol)
    cache: dict = {}
    out: Dict[int, List[Polynomial]] = {}
    for deg in range(max_deg + 1):
        monos = ring.monomials_of_degree(deg, pol.q_indices)
        rows_by_key: Dict[Tuple, Dict[int, Fraction]] = {}
        for j, mono in enumerate(monos):
            for key, c in _d1_column(mono, ring, pol, cache).items():
                rows_by_key.setdefault(key, {})[j] = c
        rows = [rows_by_key[k] for k in sorted(rows_by_key)]
        vecs = sparse_nullspace(rows, len(monos))
        out[deg] = [Polynomial({monos[j]: c for j, c in v.items()}, ring) for v in vecs]
    return GradedKernelBasis(out)


# --------------------------------------------------------------------------
# homogeneous decomposition of the full system
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelEquation:
    level: int                          # offset j below the top degree n0 + wt(e_inf)
    terms: Tuple[Tuple[int, int], ...]  # (order of d, component index) pairs
    active: Tuple[Tuple[int, int], ...]  # the terms whose component is non-zero

    def text(self, only_active=True) -> str:
        use = self.active if only_active else self.terms
        if not use:
            return "0 = 0"
        return " + ".join(f"d{k}(F~{i})" for k, i in use) + " = 0"


@dataclass
class HomogeneousSystem:
    n0: int
    levels: List[LevelEquation]
    groups: Dict[int, List[int]]                 # p -> component indices 4p..4p+3
    grouped: List[Tuple[Tuple[int, int], ...]]   # equation p: ((order, group), ...)
    p_prime: int
    bound: int
    symbolic_weights: Dict[int, List[str]] = field(default_factory=dict)

    @property
    def bound_holds(self) -> bool:
        return self.p_prime <= self.bound

    def grouped_text(self) -> List[str]:
        return [" + ".join(f"d{k}(F_{2 * g})" for k, g in eq) + " = 0" for eq in self.grouped]

    def to_record(self) -> dict:
        return {
            "n0": self.n0,
            "levels": [{"level": e.level, "equation": e.text()} for e in self.levels],
            "groups": {f"F_{2 * p}": [f"F~{i}" for i in idx] for p, idx in self.groups.items()},
            "grouped": self.grouped_text(),
            "p_prime": self.p_prime,
            "bound": self.bound,
            "bound_holds": self.bound_holds,
        }


def homogenize(components: Sequence[Tuple[Optional[Polynomial], int]]) -> HomogeneousSystem:
    """Split the reduction system along Kazhdan degree.

    ``components[i] = (F~_i, deg)`` with ``deg = n0 - i``; a component may be
    ``None`` or zero.  ``d^(k)`` lowers the degree by ``2(k-1)`` relative to
    the first-order term, so the equation ``j`` levels below the top collects
    ``d^(k)(F~_{j-2(k-1)})`` over odd ``k`` (even orders carry zero weight).
    Only levels reachable with the supplied components are emitted.
    """
    if not components:
        raise ReductionError("at least one component is required")
    n0 = components[0][1]
    present = []
    for i, (P, deg) in enumerate(components):
        if deg != n0 - i:
            raise ReductionError(f"component {i} has degree {deg}, expected {n0 - i}")
        nonzero = P is not None and bool(P)
        if nonzero and (not P.is_kazhdan_homogeneous() or P.kazhdan_degree() != deg):
            raise ReductionError(f"component {i} is not homogeneous of degree {deg}")
        present.append(nonzero)
    N = len(components)
    levels = []
    for j in range(N):
        terms = []
        k = 1
        while 2 * (k - 1) <= j:
            terms.append((k, j - 2 * (k - 1)))
            k += 2
        active = tuple(t for t in terms if present[t[1]])
        levels.append(LevelEquation(j, tuple(terms), active))
    n_groups = (N + 3) // 4
    groups = {p: list(range(4 * p, min(4 * p + 4, N))) for p in range(n_groups)}
    grouped = [tuple((2 * l + 1, p - l) for l in range(p + 1)) for p in range(n_groups)]
    # constants are killed by every d^(k) and do not count towards the group bound
    nonconst = [i for i in range(N) if present[i] and n0 - i > 0]
    p_prime = max((i // 4 for i in nonconst), default=0)
    bound = max(n0 - 1, 0) // 4
    weights = {2 * l + 1: _weight_symbols(2 * l + 1) for l in range(n_groups)}
    return HomogeneousSystem(n0, levels, groups, grouped, p_prime, bound, weights)


def group_bound(r_q: int) -> int:
    """Largest admissible group index for a lowest-degree bound ``r_q``."""
    return max(r_q - 1, 0) // 4


# --------------------------------------------------------------------------
# symbolic higher orders
# --------------------------------------------------------------------------


def differential_graphs(order: int):
    """Graphs of ``B_order`` and ``BW_order`` (every edge ordering)."""
    graphs = list(enumerate_bernoulli(order))
    if order >= 4:
        graphs.extend(enumerate_bw(order))
    return graphs


def _weight_symbols(order: int) -> List[str]:
    if order == 1:
        return ["1"]
    return [f"w{order}_{k}" for k in range(len(differential_graphs(order)))]


@dataclass
class SymbolicTerm:
    weight: str
    graph: str
    value: ReductionValue


def differential_terms(order: int, F: Polynomial, pol) -> List[SymbolicTerm]:
    """``d^(order)(F)`` as a list of (weight symbol, graph, value); empty for even orders."""
    if order < 1:
        raise ReductionError("order must be >= 1")
    if order > MAX_SYMBOLIC_ORDER:
        raise ReductionError(f"orders above {MAX_SYMBOLIC_ORDER} are not supported")
    if order % 2 == 0:
        return []
    if order == 1:
        return [SymbolicTerm("1", first_order_graph().to_text(), d1(F, pol))]
    out = []
    for sym, g in zip(_weight_symbols(order), differential_graphs(order)):
        out.append(SymbolicTerm(sym, g.to_text(), eval_reduction(g, F, pol)))
    return out


def d_odd_symbolic(i: int, F: Polynomial, pol) -> List[SymbolicTerm]:
    """``d^(2i+1)(F)`` with one symbolic weight per graph."""
    if i < 0:
        raise ReductionError("i must be >= 0")
    return differential_terms(2 * i + 1, F, pol)
