"""Universal enveloping algebra side: PBW normal forms, the quotient by the
shifted nilpotent ideal, its ad-invariants, symmetrization and the Duflo
element.

Letters are basis indices of the polarized algebra.  The default PBW order is
the polarized basis order (y-block, then z-block, then x-block), and a word is
normal when its letters are non-decreasing in that order.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import groupby, permutations
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .linalg import sparse_nullspace
from .poly import Polynomial, PolyRing, _fmt_rat

Word = Tuple[int, ...]


class EnvelopeError(ValueError):
    pass


class EnvelopeElement:
    """Finite linear combination of PBW words."""

    __slots__ = ("terms", "env")

    def __init__(self, terms: Mapping[Word, Fraction], env: "Envelope"):
        self.terms = {w: Fraction(c) for w, c in terms.items() if c}
        self.env = env

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return EnvelopeElement(out, self.env)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, EnvelopeElement):
            return self.env.product(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def scale(self, c) -> "EnvelopeElement":
        return EnvelopeElement({w: v * c for w, v in self.terms.items()}, self.env)

    def __eq__(self, other):
        return isinstance(other, EnvelopeElement) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"EnvelopeElement({self.text()})"

    def is_zero(self) -> bool:
        return not self.terms

    def level(self) -> int:
        """Kazhdan filtration level (raises on zero)."""
        if not self.terms:
            raise EnvelopeError("the zero element has no filtration level")
        return max(self.env.word_level(w) for w in self.terms)

    def length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def text(self) -> str:
        if not self.terms:
            return "0"
        names = self.env.names
        parts = []
        for w in sorted(self.terms, key=lambda w: (-len(w), w)):
            c = self.terms[w]
            word = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}"
                for i, k in ((i, len(list(run))) for i, run in groupby(w))
            )
            if not word:
                body = _fmt_rat(abs(c))
            elif abs(c) == 1:
                body = word
            else:
                body = f"{_fmt_rat(abs(c))}*{word}"
            parts.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]


class Envelope:
    """PBW calculus for ``U(g)`` over a polarization.

    ``pol.affine_value(i)`` is the scalar an m-letter becomes in the quotient.
    """

    def __init__(self, pol):
        self.pol = pol
        self.alg = pol.algebra
        self.dim = pol.dim
        self.names = pol.names
        self.weights = pol.weights
        self.default_rank = tuple(range(self.dim))
        q = list(pol.q_indices)
        m = list(pol.m_indices)
        rank = [0] * self.dim
        for pos, i in enumerate(q + m):
            rank[i] = pos
        self.quotient_rank = tuple(rank)
        self._m_set = frozenset(m)
        self._cache: Dict[Tuple[Tuple[int, ...], Word], Dict[Word, Fraction]] = {}
        self._sym: Dict[Tuple[int, ...], EnvelopeElement] = {}

    # -- basics ------------------------------------------------------------
    def element(self, terms: Mapping[Word, Fraction]) -> EnvelopeElement:
        return EnvelopeElement(terms, self)

    def one(self) -> EnvelopeElement:
        return self.element({(): Fraction(1)})

    def letter(self, i: int) -> EnvelopeElement:
        return self.element({(i,): Fraction(1)})

    def word_level(self, w: Word) -> int:
        return sum(self.weights[i] + 2 for i in w)

    # -- normal ordering ----------------------------------------------------
    def _normal(self, w: Word, rank) -> Dict[Word, Fraction]:
        key = (rank, w)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        k = next((k for k in range(len(w) - 1) if rank[w[k]] > rank[w[k + 1]]), None)
        if k is None:
            out = {w: Fraction(1)}
        else:
            a, b = w[k], w[k + 1]
            out = dict(self._normal(w[:k] + (b, a) + w[k + 2:], rank))
            for c, coef in self.alg.basis_bracket(a, b).items():
                for word, v in self._normal(w[:k] + (c,) + w[k + 2:], rank).items():
                    out[word] = out.get(word, 0) + coef * v
            out = {x: v for x, v in out.items() if v}
        self._cache[key] = out
        return out

    def _normal_random(self, w: Word, rank, rng: random.Random) -> Dict[Word, Fraction]:
        """Normal form using a random choice of adjacent inversion at every step."""
        out: Dict[Word, Fraction] = {}
        stack = [(w, Fraction(1))]
        while stack:
            word, c = stack.pop()
            descents = [k for k in range(len(word) - 1) if rank[word[k]] > rank[word[k + 1]]]
            if not descents:
                out[word] = out.get(word, 0) + c
                continue
            k = rng.choice(descents)
            a, b = word[k], word[k + 1]
            stack.append((word[:k] + (b, a) + word[k + 2:], c))
            for l, coef in self.alg.basis_bracket(a, b).items():
                stack.append((word[:k] + (l,) + word[k + 2:], c * coef))
        return {x: v for x, v in out.items() if v}

    def normal_form(self, element: Mapping[Word, Fraction], rank=None, rng=None) -> EnvelopeElement:
        rank = self.default_rank if rank is None else rank
        out: Dict[Word, Fraction] = {}
        for w, c in element.items():
            nf = self._normal_random(w, rank, rng) if rng is not None else self._normal(tuple(w), rank)
            for x, v in nf.items():
                out[x] = out.get(x, 0) + c * v
        return self.element(out)

    def pbw_normal_form(self, word: Sequence[int], rng: Optional[random.Random] = None) -> EnvelopeElement:
        return self.normal_form({tuple(word): Fraction(1)}, rng=rng)

    def product(self, a: EnvelopeElement, b: EnvelopeElement) -> EnvelopeElement:
        raw: Dict[Word, Fraction] = {}
        for u, c in a.terms.items():
            for v, d in b.terms.items():
                raw[u + v] = raw.get(u + v, 0) + c * d
        return self.normal_form(raw)

    def commutator(self, a: EnvelopeElement, b: EnvelopeElement) -> EnvelopeElement:
        return self.product(a, b) - self.product(b, a)

    # -- symmetrization -----------------------------------------------------
    def _sym_monomial(self, mono: Tuple[int, ...]) -> EnvelopeElement:
        hit = self._sym.get(mono)
        if hit is None:
            letters = [i for i, a in enumerate(mono) for _ in range(a)]
            n = len(letters)
            raw: Dict[Word, Fraction] = {}
            for p in permutations(letters):
                raw[p] = raw.get(p, 0) + 1
            scale = Fraction(1, factorial(n))
            hit = self.normal_form({w: c * scale for w, c in raw.items()})
            self._sym[mono] = hit
        return hit

    def symmetrize(self, P: Polynomial) -> EnvelopeElement:
        out = self.element({})
        for mono, c in P.terms.items():
            out = out + self._sym_monomial(mono).scale(c)
        return out

    def unsymmetrize(self, a: EnvelopeElement, ring: Optional[PolyRing] = None) -> Polynomial:
        """Inverse of :meth:`symmetrize` on normal forms.

        The top-length part of ``symmetrize(x^w)`` is the ordered word ``w``
        alone, so peeling off longest words terminates.
        """
        ring = ring or PolyRing.from_polarization(self.pol)
        rest = dict(a.terms)
        out: Dict[Tuple[int, ...], Fraction] = {}
        while rest:
            top = max(len(w) for w in rest)
            w = min(x for x in rest if len(x) == top)
            c = rest[w]
            mono = [0] * self.dim
            for i in w:
                mono[i] += 1
            mono = tuple(mono)
            out[mono] = out.get(mono, 0) + c
            for x, v in self._sym_monomial(mono).terms.items():
                nv = rest.get(x, 0) - c * v
                if nv:
                    rest[x] = nv
                else:
                    rest.pop(x, None)
        return Polynomial(out, ring)

    def gutt_term(self, P: Polynomial, Q: Polynomial, n: int) -> Polynomial:
        """Polynomial-degree ``deg P + deg Q - n`` part of the transported product."""
        if not P or not Q:
            return PolyRing.from_polarization(self.pol).zero()
        dp, dq = P.degree(), Q.degree()
        if any(sum(m) != dp for m in P.terms) or any(sum(m) != dq for m in Q.terms):
            raise EnvelopeError("gutt_term needs inputs homogeneous in polynomial degree")
        if n < 0 or n > dp + dq:
            raise EnvelopeError("order must lie between 0 and deg P + deg Q")
        R = self.unsymmetrize(self.product(self.symmetrize(P), self.symmetrize(Q)), P.ring)
        target = dp + dq - n
        return Polynomial({m: c for m, c in R.terms.items() if sum(m) == target}, P.ring)

    # -- quotient and invariants --------------------------------------------
    def quotient_reduce(self, a: EnvelopeElement, rng: Optional[random.Random] = None) -> EnvelopeElement:
        """Representative of ``a`` modulo the left ideal generated by the shifted m-letters.

        Words are reordered with m-letters rightmost and each trailing m-letter
        is replaced by its affine value.
        """
        nf = self.normal_form(a.terms, rank=self.quotient_rank, rng=rng)
        out: Dict[Word, Fraction] = {}
        for w, c in nf.terms.items():
            k = len(w)
            while k and w[k - 1] in self._m_set:
                k -= 1
                c = c * self.pol.affine_value(w[k])
                if not c:
                    break
            if c:
                out[w[:k]] = out.get(w[:k], 0) + c
        return self.element(out)

    def ad_action(self, m_index: int, c: EnvelopeElement) -> EnvelopeElement:
        if m_index not in self._m_set:
            raise EnvelopeError(f"{self.names[m_index]} is not an m-basis element")
        return self.quotient_reduce(self.commutator(self.letter(m_index), c))

    def quotient_words(self, level: int) -> List[Word]:
        """Normal q-only words of Kazhdan level exactly ``level``."""
        ring = PolyRing.from_polarization(self.pol)
        words = []
        for mono in ring.monomials_of_degree(level, self.pol.q_indices):
            words.append(tuple(i for i, a in enumerate(mono) for _ in range(a)))
        return sorted(words)

    def w_algebra_basis(self, max_level: int) -> "WAlgebraBasis":
        """Joint kernel of all ``ad m_i`` on the quotient, filtered by Kazhdan level.

        Columns are sorted by ascending level, so each kernel vector sits in
        the filtered piece of its free column and the free columns count the
        associated graded dimensions.
        """
        if max_level < 0:
            raise EnvelopeError("max_level must be >= 0")
        cols: List[Word] = []
        levels: List[int] = []
        for lev in range(max_level + 1):
            for w in self.quotient_words(lev):
                cols.append(w)
                levels.append(lev)
        rows_by_key: Dict[Tuple, Dict[int, Fraction]] = {}
        for j, w in enumerate(cols):
            u = self.element({w: Fraction(1)})
            for mi in self.pol.m_indices:
                for x, v in self.ad_action(mi, u).terms.items():
                    rows_by_key.setdefault((mi, x), {})[j] = v
        rows = [rows_by_key[k] for k in sorted(rows_by_key)]
        basis: Dict[int, List[EnvelopeElement]] = {lev: [] for lev in range(max_level + 1)}
        for vec in sparse_nullspace(rows, len(cols)):
            lead = max(vec)
            basis[levels[lead]].append(self.element({cols[j]: c for j, c in vec.items()}))
        return WAlgebraBasis(basis)


class WAlgebraBasis:
    def __init__(self, basis: Dict[int, List[EnvelopeElement]]):
        self.basis = basis

    @property
    def dimensions(self) -> Dict[int, int]:
        return {d: len(v) for d, v in sorted(self.basis.items())}

    def table(self) -> List[int]:
        top = max(self.basis, default=-1)
        return [len(self.basis.get(d, ())) for d in range(top + 1)]

    def to_record(self) -> dict:
        return {
            "dimensions": self.table(),
            "basis": {str(d): [e.text() for e in v] for d, v in sorted(self.basis.items()) if v},
        }


# --------------------------------------------------------------------------
# Duflo element
# --------------------------------------------------------------------------


def bernoulli_numbers(n: int) -> List[Fraction]:
    """``B_0..B_n`` with ``B_1 = -1/2``."""
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(m):
            acc += binom * B[k]
            binom = binom * (m + 1 - k) // (k + 1)
        B[m] = -acc / (m + 1)
    return B


def log_sinhc_coefficients(max_power: int) -> Dict[int, Fraction]:
    """Coefficients of ``u^(2k)`` in ``log(sinh(u)/u)`` for ``2k <= max_power``."""
    B = bernoulli_numbers(max_power)
    return {
        2 * k: Fraction(2 ** (2 * k)) * B[2 * k] / (2 * k * factorial(2 * k))
        for k in range(1, max_power // 2 + 1)
    }


def _truncate(P: Polynomial, deg: int) -> Polynomial:
    return Polynomial({m: c for m, c in P.terms.items() if sum(m) <= deg}, P.ring)


def _exp_series(X: Polynomial, deg: int) -> Polynomial:
    """``exp(X)`` truncated at polynomial degree ``deg``; ``X`` has no constant term."""
    out = X.ring.one()
    term = X.ring.one()
    k = 1
    while True:
        term = _truncate(term * X, deg).scale(Fraction(1, k))
        if not term:
            return out
        out = out + term
        k += 1


def _ad_trace_powers(pol, ring: PolyRing, max_power: int) -> Dict[int, Polynomial]:
    """``tr((ad Y)^k)`` as polynomials in the coordinates of ``Y``."""
    alg = pol.algebra
    n = alg.dim
    zero = ring.zero()
    # (ad Y)_{k j} = sum_i Y_i c_{i j}^k
    adY = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k, c in alg.basis_bracket(i, j).items():
                adY[k][j] = adY[k][j] + ring.var(i).scale(c)
    out = {}
    power = adY
    for p in range(1, max_power + 1):
        if p > 1:
            power = [
                [sum((power[r][s] * adY[s][c] for s in range(n) if power[r][s] and adY[s][c]), zero)
                 for c in range(n)]
                for r in range(n)
            ]
        out[p] = sum((power[r][r] for r in range(n)), zero)
    return out


def log_duflo(pol, trunc_deg: int) -> Polynomial:
    """``log det(sinh(ad Y/2)/(ad Y/2)) = sum_k c_2k tr((ad Y/2)^2k)`` truncated."""
    ring = PolyRing.from_polarization(pol)
    coeffs = log_sinhc_coefficients(trunc_deg)
    traces = _ad_trace_powers(pol, ring, trunc_deg)
    out = ring.zero()
    for p, c in coeffs.items():
        out = out + traces[p].scale(c / 2 ** p)
    return out


def duflo_element(pol, trunc_deg: int, power: Fraction = Fraction(1)) -> Polynomial:
    """``j(Y)^power`` truncated at polynomial degree ``trunc_deg`` (even).

    ``power = 1/2`` gives the square root used by :func:`duflo_apply`.
    """
    if trunc_deg < 0 or trunc_deg % 2:
        raise EnvelopeError("truncation degree must be even and >= 0")
    return _exp_series(log_duflo(pol, trunc_deg).scale(Fraction(power)), trunc_deg)


def duflo_apply(P: Polynomial, pol, trunc_deg: Optional[int] = None) -> Polynomial:
    """Apply ``j^(1/2)`` with every coordinate replaced by the matching partial derivative."""
    if not P:
        return P
    deg = P.degree()
    if trunc_deg is None:
        trunc_deg = deg + (deg % 2)
    J = duflo_element(pol, trunc_deg, Fraction(1, 2))
    out = P.ring.zero()
    for mono, c in J.terms.items():
        if sum(mono) > deg:
            continue
        counts = {i: a for i, a in enumerate(mono) if a}
        out = out + P.partial_multi(counts).scale(c)
    return out


# --------------------------------------------------------------------------
# module-level conveniences
# --------------------------------------------------------------------------

_ENVELOPES: Dict[int, Tuple[object, Envelope]] = {}


def envelope_for(pol) -> Envelope:
    hit = _ENVELOPES.get(id(pol))
    if hit is None or hit[0] is not pol:
        hit = (pol, Envelope(pol))
        _ENVELOPES[id(pol)] = hit
    return hit[1]


def pbw_normal_form(word: Sequence[int], pol, rng: Optional[random.Random] = None) -> EnvelopeElement:
    return envelope_for(pol).pbw_normal_form(word, rng)


def u_product(a: EnvelopeElement, b: EnvelopeElement) -> EnvelopeElement:
    return a.env.product(a, b)


def symmetrize(P: Polynomial, pol) -> EnvelopeElement:
    return envelope_for(pol).symmetrize(P)


def unsymmetrize(a: EnvelopeElement) -> Polynomial:
    return a.env.unsymmetrize(a)


def gutt_term(P: Polynomial, Q: Polynomial, n: int, pol) -> Polynomial:
    return envelope_for(pol).gutt_term(P, Q, n)


def quotient_reduce(a: EnvelopeElement, rng: Optional[random.Random] = None) -> EnvelopeElement:
    return a.env.quotient_reduce(a, rng)


def ad_action(m_index: int, c: EnvelopeElement) -> EnvelopeElement:
    return c.env.ad_action(m_index, c)


def w_algebra_basis(max_level: int, pol) -> WAlgebraBasis:
    return envelope_for(pol).w_algebra_basis(max_level)


def is_central(a: EnvelopeElement, letters: Optional[Iterable[int]] = None) -> bool:
    env = a.env
    idx = range(env.dim) if letters is None else letters
    return all(env.commutator(env.letter(i), a).is_zero() for i in idx)
