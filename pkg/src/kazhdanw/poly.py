"""Sparse polynomials over the rationals in the polarized basis variables.

A monomial is a dense exponent tuple, one slot per basis vector of ``g`` in the
polarized order ``y | z | p``.  A polynomial is a dict ``monomial -> Fraction``
with zero coefficients never stored.

The Kazhdan degree of a generator of ad h weight ``w`` is ``w + 2``; the degree
of a monomial is the sum over its factors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class PolyRing:
    """Ambient variables: names and ad h weights of the polarized basis."""

    names: Tuple[str, ...]
    weights: Tuple[int, ...]

    @classmethod
    def from_polarization(cls, pol) -> "PolyRing":
        return cls(tuple(pol.names), tuple(pol.weights))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def one(self) -> "Polynomial":
        return Polynomial({(0,) * self.nvars: Fraction(1)}, self)

    def zero(self) -> "Polynomial":
        return Polynomial({}, self)

    def const(self, c) -> "Polynomial":
        return Polynomial({(0,) * self.nvars: Fraction(c)}, self)

    def var(self, i: int) -> "Polynomial":
        mono = tuple(int(k == i) for k in range(self.nvars))
        return Polynomial({mono: Fraction(1)}, self)

    def linear(self, coords: Sequence) -> "Polynomial":
        """The degree-one polynomial ``sum_i coords[i] * x_i``."""
        return Polynomial(
            {tuple(int(k == i) for k in range(self.nvars)): Fraction(c) for i, c in enumerate(coords) if c},
            self,
        )

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(a * (w + 2) for a, w in zip(mono, self.weights) if a)

    def monomial_weight(self, mono: Monomial) -> int:
        return sum(a * w for a, w in zip(mono, self.weights) if a)

    def monomials_of_degree(self, degree: int, variables: Sequence[int]) -> List[Monomial]:
        """All monomials in ``variables`` of Kazhdan degree ``degree``.

        Every variable must have positive Kazhdan degree (true for q-variables).
        """
        degs = [(v, self.weights[v] + 2) for v in variables]
        if any(d <= 0 for _, d in degs):
            raise PolynomialError("monomial enumeration needs positive-degree variables")
        out = []

        def rec(pos, remaining, exps):
            if pos == len(degs):
                if remaining == 0:
                    mono = [0] * self.nvars
                    for (v, _), a in zip(degs, exps):
                        mono[v] = a
                    out.append(tuple(mono))
                return
            d = degs[pos][1]
            for a in range(remaining // d + 1):
                rec(pos + 1, remaining - a * d, exps + [a])

        if degree >= 0:
            rec(0, degree, [])
        return sorted(out, key=lambda m: (-sum(m), tuple(-a for a in m)))


class Polynomial:
    __slots__ = ("terms", "ring")

    def __init__(self, terms: Mapping[Monomial, Fraction], ring: PolyRing):
        self.ring = ring
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}

    # -- ring operations -------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise PolynomialError("polynomials live over different ambient bases")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(out, self.ring)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / Fraction(other))

    def __pow__(self, k: int):
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw({m: c * v for m, v in self.terms.items()}, self.ring)

    @classmethod
    def _raw(cls, terms, ring):
        p = cls.__new__(cls)
        p.terms = terms
        p.ring = ring
        return p

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    # -- calculus and grading ----------------------------------------------
    def partial(self, v: int) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            a = m[v]
            if a:
                mm = m[:v] + (a - 1,) + m[v + 1:]
                out[mm] = c * a
        return Polynomial._raw(out, self.ring)

    def partial_multi(self, counts: Mapping[int, int]) -> "Polynomial":
        """Apply ``prod_v d_v^{counts[v]}`` in one pass."""
        out = {}
        items = [(v, k) for v, k in counts.items() if k]
        for m, c in self.terms.items():
            mm = list(m)
            coef = c
            for v, k in items:
                a = mm[v]
                if a < k:
                    coef = 0
                    break
                for t in range(k):
                    coef *= a - t
                mm[v] = a - k
            if coef:
                key = tuple(mm)
                out[key] = out.get(key, 0) + coef
        return Polynomial({m: c for m, c in out.items() if c}, self.ring)

    def degree(self) -> int:
        """Ordinary polynomial degree (max over monomials)."""
        if not self.terms:
            raise PolynomialError("the zero polynomial has no degree")
        return max(sum(m) for m in self.terms)

    def kazhdan_degree(self) -> int:
        if not self.terms:
            raise PolynomialError("the zero polynomial has no Kazhdan degree")
        return max(self.ring.monomial_degree(m) for m in self.terms)

    def kazhdan_split(self) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.ring.monomial_degree(m), {})[m] = c
        return {d: Polynomial._raw(t, self.ring) for d, t in sorted(parts.items())}

    def is_kazhdan_homogeneous(self) -> bool:
        return len({self.ring.monomial_degree(m) for m in self.terms}) <= 1

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._raw(
            {m: c for m, c in self.terms.items() if sum(m) == degree}, self.ring
        )

    def variables(self) -> List[int]:
        return sorted({i for m in self.terms for i, a in enumerate(m) if a})

    def max_exponents(self) -> Tuple[int, ...]:
        n = self.ring.nvars
        return tuple(max((m[i] for m in self.terms), default=0) for i in range(n))

    def uses_only(self, indices: Iterable[int]) -> bool:
        allowed = set(indices)
        return all(i in allowed for i in self.variables())

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def substitute(self, values: Mapping[int, Fraction]) -> "Polynomial":
        """Replace the listed variables by scalars."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            coef = c
            mm = list(m)
            for v, val in values.items():
                a = mm[v]
                if a:
                    coef *= Fraction(val) ** a
                    mm[v] = 0
                    if not coef:
                        break
            if coef:
                key = tuple(mm)
                nv = out.get(key, 0) + coef
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return Polynomial._raw(out, self.ring)


def restrict_to_affine(P: Polynomial, pol) -> Polynomial:
    """Evaluate every m-coordinate at its value on the affine subspace.

    With the default sign convention ``m_i -> -chi(m_i)``.
    """
    return P.substitute({i: pol.affine_value(i) for i in pol.m_indices})


def kazhdan_split(P: Polynomial) -> Dict[int, Polynomial]:
    return P.kazhdan_split()


def kazhdan_degree(P: Polynomial) -> int:
    return P.kazhdan_degree()


def partial(P: Polynomial, v: int) -> Polynomial:
    return P.partial(v)


# --------------------------------------------------------------------------
# text and machine forms
# --------------------------------------------------------------------------


def _fmt_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def sort_key(mono: Monomial):
    return (sum(mono), tuple(-a for a in mono))


def to_text(P: Polynomial) -> str:
    if not P.terms:
        return "0"
    pieces = []
    for mono in sorted(P.terms, key=sort_key):
        c = P.terms[mono]
        factors = []
        for i, a in enumerate(mono):
            if a == 1:
                factors.append(P.ring.names[i])
            elif a > 1:
                factors.append(f"{P.ring.names[i]}^{a}")
        mag = abs(c)
        if not factors:
            body = _fmt_rat(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_rat(mag)] + factors)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


def to_terms(P: Polynomial) -> List[dict]:
    """Machine-readable term list with rationals as ``{num, den}``."""
    out = []
    for mono in sorted(P.terms, key=sort_key):
        c = P.terms[mono]
        out.append(
            {
                "num": c.numerator,
                "den": c.denominator,
                "exponents": {P.ring.names[i]: a for i, a in enumerate(mono) if a},
            }
        )
    return out


def from_terms(terms: Sequence[Mapping], ring: PolyRing) -> Polynomial:
    out = ring.zero()
    for t in terms:
        mono = [0] * ring.nvars
        for name, a in t.get("exponents", {}).items():
            if name not in ring.names:
                raise PolynomialError(f"unknown variable {name!r}")
            mono[ring.names.index(name)] = int(a)
        out = out + Polynomial({tuple(mono): Fraction(int(t["num"]), int(t.get("den", 1)))}, ring)
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse(text: str, ring: PolyRing, aliases: Optional[Mapping[str, Polynomial]] = None) -> Polynomial:
    """Parse ``coef * name^k * ... + ...`` (parentheses and ``/`` by scalars allowed).

    ``aliases`` maps extra names (for instance the declared basis of the source
    algebra) to polynomials, usually linear ones.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialError(f"cannot parse {text[pos:]!r}")
        num, name, op = m.groups()
        tokens.append(("num", int(num)) if num else ("name", name) if name else ("op", "^" if op == "**" else op))
        pos = m.end()
    aliases = dict(aliases or {})
    idx = [0]

    def peek():
        return tokens[idx[0]] if idx[0] < len(tokens) else (None, None)

    def take():
        tok = peek()
        idx[0] += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = factor()
            if op == "*":
                val = val * rhs
            else:
                if rhs.variables():
                    raise PolynomialError("division by a non-constant")
                c = rhs.constant_term()
                if not c:
                    raise PolynomialError("division by zero")
                val = val.scale(1 / c)
        return val

    def factor():
        if peek() == ("op", "-"):
            take()
            return -factor()
        if peek() == ("op", "+"):
            take()
            return factor()
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, k = take()
            if kind != "num":
                raise PolynomialError("exponent must be a non-negative integer")
            base = base ** k
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return ring.const(val)
        if kind == "name":
            if val in ring.names:
                return ring.var(ring.names.index(val))
            if val in aliases:
                return aliases[val]
            raise PolynomialError(f"unknown variable {val!r}")
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise PolynomialError("unbalanced parentheses")
            return inner
        raise PolynomialError(f"unexpected token {val!r}")

    if not tokens:
        raise PolynomialError("empty polynomial")
    result = expr()
    if idx[0] != len(tokens):
        raise PolynomialError(f"trailing input in {text!r}")
    return result


def source_aliases(pol) -> Dict[str, Polynomial]:
    """Declared basis names of the source algebra as linear polynomials."""
    from . import linalg

    ring = PolyRing.from_polarization(pol)
    n = pol.dim
    P = [[pol.basis_vectors[col][row] for col in range(n)] for row in range(n)]
    Pinv = linalg.inverse(P)
    out = {}
    for k, name in enumerate(pol.source.basis_names):
        if name in ring.names:
            continue
        out[name] = ring.linear([Pinv[a][k] for a in range(n)])
    return out


def iter_monomials(P: Polynomial) -> Iterator[Tuple[Monomial, Fraction]]:
    for mono in sorted(P.terms, key=sort_key):
        yield mono, P.terms[mono]
