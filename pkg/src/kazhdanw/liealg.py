"""Lie algebras by structure constants, sl2-triples and Premet polarizations.

Everything is exact over the rationals.  Vectors are tuples of
:class:`~fractions.Fraction` in the coordinates of the algebra's basis.

A :class:`PolarizationData` carries a second, *polarized* copy of the algebra
whose basis is ordered ``y | z | p``:

* ``y``  -- the declared basis vectors of weight <= -2,
* ``z``  -- a Witt basis ``z_1..z_2s`` of ``g(-1)``; ``z_1..z_s`` span the
  Lagrangian ``l``,
* ``p``  -- the declared basis vectors of weight >= 0 (they span ``p_e``).

``m`` is spanned by the ``y`` block and ``z_1..z_s``, ``q`` by the rest.  All
polynomial and enveloping-algebra code works in this polarized basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg

Vector = Tuple[Fraction, ...]


class LieAlgebraError(ValueError):
    """Malformed structure constants or an unsupported algebra request."""


class PolarizationError(ValueError):
    """The sl2-triple or the basis does not admit the requested polarization."""


def vec(values) -> Vector:
    return tuple(Fraction(v) for v in values)


def unit(dim: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(dim))


def _add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def _scale(c, x: Vector) -> Vector:
    return tuple(c * a for a in x)


@dataclass(frozen=True)
class LieAlgebraData:
    """Finite-dimensional Lie algebra with ``[b_i, b_j] = sum_k c[i,j,k] b_k``.

    Only ``i < j`` entries are stored; the full antisymmetric table is derived.
    """

    dim: int
    basis_names: Tuple[str, ...]
    structure_constants: Mapping[Tuple[int, int, int], Fraction]
    _table: Dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.dim <= 0 or len(self.basis_names) != self.dim:
            raise LieAlgebraError("dim must be positive and match basis_names")
        consts = {}
        for (i, j, k), c in self.structure_constants.items():
            if not (0 <= i < j < self.dim and 0 <= k < self.dim):
                raise LieAlgebraError(f"bad structure-constant index {(i, j, k)}")
            c = Fraction(c)
            if c:
                consts[(i, j, k)] = c
        object.__setattr__(self, "structure_constants", consts)
        table = [[{} for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j, k), c in consts.items():
            table[i][j][k] = c
            table[j][i][k] = -c
        by_output: Dict[int, List[Tuple[int, int, Fraction]]] = {k: [] for k in range(self.dim)}
        for i in range(self.dim):
            for j in range(self.dim):
                for k, c in table[i][j].items():
                    by_output[k].append((i, j, c))
        object.__setattr__(self, "_table", {"br": table, "by_output": by_output})

    def basis_bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        """``[b_i, b_j]`` as a sparse ``{k: coefficient}`` dict."""
        return self._table["br"][i][j]

    def pairs_into(self, k: int) -> List[Tuple[int, int, Fraction]]:
        """All ordered ``(i, j, c)`` with ``c = coefficient of b_k in [b_i, b_j] != 0``."""
        return self._table["by_output"][k]

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise LieAlgebraError(
                f"dimension mismatch: expected {self.dim}, got {len(x)} and {len(y)}"
            )
        out = [Fraction(0)] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in self.basis_bracket(i, j).items():
                    out[k] += xi * yj * c
        return tuple(out)

    def ad_matrix(self, x: Sequence) -> List[List[Fraction]]:
        """Matrix of ``ad x`` acting on column coordinate vectors."""
        cols = [self.bracket(x, unit(self.dim, j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def killing_form(self) -> List[List[Fraction]]:
        ads = [self.ad_matrix(unit(self.dim, i)) for i in range(self.dim)]
        return [
            [linalg.trace(linalg.matmul(ads[i], ads[j])) for j in range(self.dim)]
            for i in range(self.dim)
        ]

    def index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise LieAlgebraError(f"unknown basis element {name!r}") from None


@dataclass(frozen=True)
class Sl2TripleData:
    e: Vector
    h: Vector
    f: Vector

    def validate(self, alg: LieAlgebraData) -> None:
        e, h, f = self.e, self.h, self.f
        if alg.bracket(h, e) != _scale(2, e):
            raise PolarizationError("[h, e] != 2e")
        if alg.bracket(h, f) != _scale(-2, f):
            raise PolarizationError("[h, f] != -2f")
        if alg.bracket(e, f) != tuple(h):
            raise PolarizationError("[e, f] != h")
        ad_e = alg.ad_matrix(e)
        power = ad_e
        for _ in range(alg.dim - 1):
            power = linalg.matmul(power, ad_e)
        if any(v for row in power for v in row):
            raise PolarizationError("e is not ad-nilpotent")


@dataclass
class JacobiReport:
    passed: bool
    failures: List[Tuple[int, int, int]]


def check_jacobi(alg: LieAlgebraData) -> JacobiReport:
    """Check the Jacobi identity on every basis triple ``i < j < k`` (0-based)."""
    failures = []
    n = alg.dim
    for i, j, k in combinations(range(n), 3):
        bi, bj, bk = unit(n, i), unit(n, j), unit(n, k)
        total = _add(
            _add(alg.bracket(alg.bracket(bi, bj), bk), alg.bracket(alg.bracket(bj, bk), bi)),
            alg.bracket(alg.bracket(bk, bi), bj),
        )
        if any(total):
            failures.append((i, j, k))
    return JacobiReport(not failures, failures)


def invariant_form(alg: LieAlgebraData, e: Sequence, f: Sequence) -> List[List[Fraction]]:
    """Killing form rescaled so that ``(e, f) = 1``."""
    kappa = alg.killing_form()
    if linalg.determinant(kappa) == 0:
        raise LieAlgebraError("Killing form is degenerate; algebra is not semisimple")
    kef = pairing(kappa, e, f)
    if kef == 0:
        raise LieAlgebraError("Killing form vanishes on (e, f)")
    return [[v / kef for v in row] for row in kappa]


def pairing(gram, x: Sequence, y: Sequence) -> Fraction:
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    total += xi * gram[i][j] * yj
    return total


def trace_ad(alg: LieAlgebraData, H: Sequence) -> Fraction:
    return linalg.trace(alg.ad_matrix(H))


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


def _sl2() -> Tuple[LieAlgebraData, Dict[str, Sl2TripleData]]:
    # basis (e, h, f)
    consts = {(0, 1, 0): -2, (0, 2, 1): 1, (1, 2, 2): -2}
    alg = LieAlgebraData(3, ("e", "h", "f"), consts)
    triple = Sl2TripleData(unit(3, 0), unit(3, 1), unit(3, 2))
    return alg, {"principal": triple, "minimal": triple}


SL3_BASIS = ("E12", "E13", "E23", "H1", "H2", "E21", "E31", "E32")


def sl3_matrix(coords: Sequence) -> List[List[Fraction]]:
    """3x3 matrix of an sl3 element given in :data:`SL3_BASIS` coordinates."""
    m = [[Fraction(0)] * 3 for _ in range(3)]
    c = dict(zip(SL3_BASIS, (Fraction(x) for x in coords)))
    for name in SL3_BASIS:
        if name[0] == "E":
            m[int(name[1]) - 1][int(name[2]) - 1] += c[name]
    m[0][0] += c["H1"]
    m[1][1] += -c["H1"] + c["H2"]
    m[2][2] += -c["H2"]
    return m


def sl3_coords(matrix) -> Vector:
    out = []
    for name in SL3_BASIS:
        if name[0] == "E":
            out.append(Fraction(matrix[int(name[1]) - 1][int(name[2]) - 1]))
        elif name == "H1":
            out.append(Fraction(matrix[0][0]))
        else:
            out.append(-Fraction(matrix[2][2]))
    return tuple(out)


def sl_basis_names(n: int) -> Tuple[str, ...]:
    """``E_ij`` (i < j), then ``H_1..H_(n-1)``, then ``E_ij`` (i > j)."""
    upper = [f"E{i}{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    lower = [f"E{i}{j}" for i in range(1, n + 1) for j in range(1, i)]
    return tuple(upper + [f"H{k}" for k in range(1, n)] + lower)


def special_linear(n: int) -> Tuple[LieAlgebraData, Dict[str, Sl2TripleData]]:
    """``sl_n`` in the Chevalley-type basis of :func:`sl_basis_names` (``2 <= n <= 9``).

    ``H_k = E_kk - E_(k+1)(k+1)``.  The principal and minimal triples come along.
    """
    if not 2 <= n <= 9:
        raise LieAlgebraError("special_linear supports 2 <= n <= 9")
    names = sl_basis_names(n)
    dim = len(names)

    def matrix(i):
        m = [[Fraction(0)] * n for _ in range(n)]
        name = names[i]
        if name[0] == "E":
            m[int(name[1]) - 1][int(name[2]) - 1] = Fraction(1)
        else:
            k = int(name[1:])
            m[k - 1][k - 1], m[k][k] = Fraction(1), Fraction(-1)
        return m

    def coords(m):
        out = []
        for name in names:
            if name[0] == "E":
                out.append(m[int(name[1]) - 1][int(name[2]) - 1])
            else:
                k = int(name[1:])
                out.append(sum((m[t][t] for t in range(k)), Fraction(0)))
        return tuple(out)

    mats = [matrix(i) for i in range(dim)]
    consts = {}
    for i, j in combinations(range(dim), 2):
        a, b = mats[i], mats[j]
        comm = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(linalg.matmul(a, b), linalg.matmul(b, a))]
        for k, c in enumerate(coords(comm)):
            if c:
                consts[(i, j, k)] = c
    alg = LieAlgebraData(dim, names, consts)

    def elem(entries):
        m = [[Fraction(0)] * n for _ in range(n)]
        for (r, c), v in entries.items():
            m[r - 1][c - 1] = Fraction(v)
        return coords(m)

    principal = Sl2TripleData(
        elem({(i, i + 1): 1 for i in range(1, n)}),
        elem({(i, i): n + 1 - 2 * i for i in range(1, n + 1)}),
        elem({(i + 1, i): i * (n - i) for i in range(1, n)}),
    )
    minimal = Sl2TripleData(elem({(1, n): 1}), elem({(1, 1): 1, (n, n): -1}), elem({(n, 1): 1}))
    return alg, {"principal": principal, "minimal": minimal}


def _sl3() -> Tuple[LieAlgebraData, Dict[str, Sl2TripleData]]:
    return special_linear(3)


_CATALOG = {"sl2": _sl2, "sl3": _sl3}


def catalog_names() -> List[str]:
    return sorted(_CATALOG)


def catalog(name: str) -> Tuple[LieAlgebraData, Dict[str, Sl2TripleData]]:
    """Return ``(algebra, named_triples)`` for a catalog algebra."""
    try:
        return _CATALOG[name]()
    except KeyError:
        raise LieAlgebraError(
            f"unknown catalog algebra {name!r}; choose from {catalog_names()}"
        ) from None


# --------------------------------------------------------------------------
# interchange format
# --------------------------------------------------------------------------


def _rat_to_json(c: Fraction) -> dict:
    return {"num": c.numerator, "den": c.denominator}


def _rat_from_json(obj) -> Fraction:
    if isinstance(obj, dict):
        if obj.get("den", 1) == 0:
            raise LieAlgebraError("zero denominator")
        return Fraction(int(obj["num"]), int(obj.get("den", 1)))
    return Fraction(obj)


def algebra_to_json(alg: LieAlgebraData, triples: Optional[Mapping[str, Sl2TripleData]] = None) -> dict:
    brackets = {}
    for (i, j, k), c in sorted(alg.structure_constants.items()):
        brackets.setdefault((i, j), []).append({"k": k, **_rat_to_json(c)})
    doc = {
        "dim": alg.dim,
        "basis": list(alg.basis_names),
        "brackets": [{"i": i, "j": j, "terms": t} for (i, j), t in sorted(brackets.items())],
    }
    if triples:
        doc["triples"] = {
            name: {part: [_rat_to_json(x) for x in getattr(t, part)] for part in "ehf"}
            for name, t in triples.items()
        }
    return doc


def algebra_from_json(doc: Mapping) -> Tuple[LieAlgebraData, Dict[str, Sl2TripleData]]:
    try:
        dim = int(doc["dim"])
        basis = tuple(str(b) for b in doc["basis"])
        consts = {}
        for entry in doc["brackets"]:
            i, j = int(entry["i"]), int(entry["j"])
            if not i < j:
                raise LieAlgebraError(f"bracket entry needs i < j, got ({i}, {j})")
            for term in entry["terms"]:
                consts[(i, j, int(term["k"]))] = _rat_from_json(term)
        alg = LieAlgebraData(dim, basis, consts)
        triples = {
            name: triple_from_json(t, dim) for name, t in doc.get("triples", {}).items()
        }
    except (KeyError, TypeError) as exc:
        raise LieAlgebraError(f"malformed structure-constant file: {exc}") from exc
    return alg, triples


def triple_from_json(doc: Mapping, dim: int) -> Sl2TripleData:
    parts = []
    for part in "ehf":
        coords = tuple(_rat_from_json(x) for x in doc[part])
        if len(coords) != dim:
            raise LieAlgebraError(f"triple component {part} has length {len(coords)}, expected {dim}")
        parts.append(coords)
    return Sl2TripleData(*parts)


def load_algebra(path) -> Tuple[LieAlgebraData, Dict[str, Sl2TripleData]]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LieAlgebraError(f"{path}: invalid JSON ({exc})") from exc
    return algebra_from_json(doc)


# --------------------------------------------------------------------------
# polarization
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PolarizationData:
    source: LieAlgebraData
    triple: Sl2TripleData
    algebra: LieAlgebraData          # polarized basis y | z | p
    basis_vectors: Tuple[Vector, ...]  # polarized basis in source coordinates
    weights: Tuple[int, ...]          # ad h weight of each polarized basis vector
    grading: Dict[int, Tuple[int, ...]]
    m_indices: Tuple[int, ...]
    q_indices: Tuple[int, ...]
    chi: Dict[int, Fraction]          # chi on the m-basis (polarized indices)
    form: Tuple[Tuple[Fraction, ...], ...]  # invariant form in polarized coordinates
    y_basis: Tuple[Vector, ...]
    witt_z: Tuple[Vector, ...]
    x_basis: Tuple[Vector, ...]
    r: int
    s: int
    e: Vector                         # e, h, f in polarized coordinates
    h: Vector
    f: Vector
    affine_sign: int = -1

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def names(self) -> Tuple[str, ...]:
        return self.algebra.basis_names

    @property
    def m_basis(self) -> Tuple[Vector, ...]:
        return tuple(self.basis_vectors[i] for i in self.m_indices)

    @property
    def q_basis(self) -> Tuple[Vector, ...]:
        return tuple(self.basis_vectors[i] for i in self.q_indices)

    def kazhdan_weight(self, i: int) -> int:
        """Kazhdan degree of the generator ``i``: its ad h weight plus 2."""
        return self.weights[i] + 2

    def affine_value(self, i: int) -> Fraction:
        """Value of the m-coordinate ``i`` on the affine subspace."""
        return self.affine_sign * self.chi[i]

    def with_affine_sign(self, sign: int) -> "PolarizationData":
        if sign not in (-1, 1):
            raise PolarizationError("affine sign must be -1 or +1")
        from dataclasses import replace

        return replace(self, affine_sign=sign)

    def chi_of(self, x: Sequence) -> Fraction:
        """``chi(x) = (e, x)`` for any x in polarized coordinates."""
        return pairing(self.form, self.e, x)


def _weights(alg: LieAlgebraData, h: Vector) -> List[int]:
    ad_h = alg.ad_matrix(h)
    weights = []
    for i in range(alg.dim):
        for j in range(alg.dim):
            if i != j and ad_h[i][j] != 0:
                raise PolarizationError(
                    "declared basis is not an ad h eigenbasis; supply an adapted basis"
                )
        w = ad_h[i][i]
        if w.denominator != 1:
            raise PolarizationError(f"non-integer ad h eigenvalue {w}")
        weights.append(int(w))
    return weights


def _witt_basis(alg, gram, e, vectors):
    """Greedy symplectic Gram-Schmidt for omega(u, v) = (e, [u, v])."""

    def omega(u, v):
        return pairing(gram, e, alg.bracket(u, v))

    remaining = list(vectors)
    lag, coiso = [], []
    while remaining:
        v = remaining.pop(0)
        idx = next((k for k, w in enumerate(remaining) if omega(v, w) != 0), None)
        if idx is None:
            raise PolarizationError("omega_chi is degenerate on g(-1)")
        w = remaining.pop(idx)
        w = _scale(1 / omega(v, w), w)
        remaining = [
            _add(_add(u, _scale(-omega(u, w), v)), _scale(omega(u, v), w)) for u in remaining
        ]
        lag.append(v)
        coiso.append(w)
    return lag, coiso


def _span_complement(basis, candidates):
    chosen = list(basis)
    extra = []
    for c in candidates:
        if linalg.rank(chosen + [c]) > len(chosen):
            chosen.append(c)
            extra.append(c)
    return extra


def build_polarization(
    alg: LieAlgebraData, triple: Sl2TripleData, affine_sign: int = -1, order: Optional[Sequence[int]] = None
) -> PolarizationData:
    """Construct m, q, chi and the adapted bases for the nilpotent ``triple.e``.

    ``order`` optionally permutes the declared basis before the greedy choices
    (Lagrangian and complements); it exists to test tie-break independence.
    """
    triple.validate(alg)
    n = alg.dim
    weights = _weights(alg, triple.h)
    gram = invariant_form(alg, triple.e, triple.f)
    order = list(order) if order is not None else list(range(n))
    if sorted(order) != list(range(n)):
        raise PolarizationError("order must be a permutation of the basis indices")

    y_idx = [i for i in order if weights[i] <= -2]
    g_minus1 = [unit(n, i) for i in order if weights[i] == -1]
    p_idx = [i for i in order if weights[i] >= 0]

    lag, coiso = _witt_basis(alg, gram, triple.e, g_minus1)
    s = len(lag)
    witt = lag + coiso

    # x_1..x_r: ker ad e inside p_e, weight by weight; then a dual complement.
    kernel, complement = [], []
    for w in sorted({weights[i] for i in p_idx}):
        block = [unit(n, i) for i in p_idx if weights[i] == w]
        images = [alg.bracket(triple.e, b) for b in block]
        mat = [[img[k] for img in images] for k in range(n)]
        ker = []
        for coeffs in linalg.nullspace(mat):
            x = tuple(sum((c * b[k] for c, b in zip(coeffs, block)), Fraction(0)) for k in range(n))
            ker.append(x)
        kernel.extend(ker)
        complement.extend(_span_complement(ker, block))
    y_basis = [unit(n, i) for i in y_idx]
    if len(complement) != len(y_basis):
        raise PolarizationError("dimension count for the x/y duality failed")
    N = [[pairing(gram, alg.bracket(y, c), triple.e) for c in complement] for y in y_basis]
    x_rest = []
    if N:
        Ninv = linalg.inverse(N)
        for i in range(len(y_basis)):
            x = (Fraction(0),) * n
            for j, c in enumerate(complement):
                if Ninv[j][i]:
                    x = _add(x, _scale(Ninv[j][i], c))
            x_rest.append(x)
    x_basis = kernel + x_rest

    basis_vectors = y_basis + witt + [unit(n, i) for i in p_idx]
    names = (
        [alg.basis_names[i] for i in y_idx]
        + [f"z{k + 1}" for k in range(2 * s)]
        + [alg.basis_names[i] for i in p_idx]
    )
    P = [[basis_vectors[col][row] for col in range(n)] for row in range(n)]
    Pinv = linalg.inverse(P)

    def to_polarized(x):
        return tuple(sum((Pinv[a][k] * x[k] for k in range(n)), Fraction(0)) for a in range(n))

    consts = {}
    for a, b in combinations(range(n), 2):
        for c, val in enumerate(to_polarized(alg.bracket(basis_vectors[a], basis_vectors[b]))):
            if val:
                consts[(a, b, c)] = val
    palg = LieAlgebraData(n, tuple(names), consts)

    pweights = tuple(
        [weights[i] for i in y_idx] + [-1] * (2 * s) + [weights[i] for i in p_idx]
    )
    grading: Dict[int, List[int]] = {}
    for idx, w in enumerate(pweights):
        grading.setdefault(w, []).append(idx)
    ny = len(y_idx)
    m_indices = tuple(range(ny + s))
    q_indices = tuple(range(ny + s, n))
    pform = tuple(
        tuple(pairing(gram, basis_vectors[a], basis_vectors[b]) for b in range(n)) for a in range(n)
    )
    e_p = to_polarized(triple.e)
    chi = {i: pairing(pform, e_p, unit(n, i)) for i in m_indices}
    return PolarizationData(
        source=alg,
        triple=triple,
        algebra=palg,
        basis_vectors=tuple(basis_vectors),
        weights=pweights,
        grading={w: tuple(v) for w, v in sorted(grading.items())},
        m_indices=m_indices,
        q_indices=q_indices,
        chi=chi,
        form=pform,
        y_basis=tuple(y_basis),
        witt_z=tuple(witt),
        x_basis=tuple(x_basis),
        r=len(kernel),
        s=s,
        e=e_p,
        h=to_polarized(triple.h),
        f=to_polarized(triple.f),
        affine_sign=affine_sign,
    )


def polarize(name: str, nilpotent: str = "principal", affine_sign: int = -1) -> PolarizationData:
    """Shortcut: polarization of a catalog algebra at a named triple."""
    alg, triples = catalog(name)
    if nilpotent not in triples:
        raise LieAlgebraError(f"unknown nilpotent {nilpotent!r} for {name}")
    return build_polarization(alg, triples[nilpotent], affine_sign=affine_sign)


def polarization_violations(pol: PolarizationData) -> List[str]:
    """Check every structural invariant of a polarization; empty list means pass."""
    problems = []
    src, n = pol.source, pol.source.dim
    gram = invariant_form(src, pol.triple.e, pol.triple.f)
    if sum(len(v) for v in pol.grading.values()) != n:
        problems.append("weight spaces do not add up to g")
    for w, idx in pol.grading.items():
        if len(idx) != len(pol.grading.get(-w, ())):
            problems.append(f"dim g({w}) != dim g({-w})")
    for i, w in enumerate(pol.weights):
        if pol.algebra.bracket(pol.h, unit(n, i)) != _scale(w, unit(n, i)):
            problems.append(f"basis vector {pol.names[i]} is not of weight {w}")
    s = pol.s
    minus1 = pol.grading.get(-1, ())
    if minus1:
        om = [[pol.chi_of(pol.algebra.bracket(unit(n, a), unit(n, b))) for b in minus1] for a in minus1]
        if linalg.determinant(om) == 0:
            problems.append("omega_chi degenerate on g(-1)")
    z = pol.witt_z
    for i in range(s):
        for j in range(s):
            if pairing(gram, pol.triple.e, src.bracket(z[i], z[j])) != 0:
                problems.append("l is not isotropic")
            if pairing(gram, pol.triple.e, src.bracket(z[s + i], z[s + j])) != 0:
                problems.append("z_{s+i} not isotropic")
            if pairing(gram, pol.triple.e, src.bracket(z[i], z[s + j])) != int(i == j):
                problems.append("Witt pairing is not the identity")
    m_r = pol.r
    for i, y in enumerate(pol.y_basis):
        for j, x in enumerate(pol.x_basis[m_r:]):
            if pairing(gram, src.bracket(y, x), pol.triple.e) != int(i == j):
                problems.append("([y_i, x_j], e) != delta_ij")
    for x in pol.x_basis[:m_r]:
        if any(src.bracket(pol.triple.e, x)):
            problems.append("x_1..x_r not in ker ad e")
    if linalg.rank([list(v) for v in pol.basis_vectors]) != n:
        problems.append("g != m + q")
    if len(pol.m_indices) + len(pol.q_indices) != n:
        problems.append("dimension count of m + q wrong")
    for a in pol.m_indices:
        for b in pol.m_indices:
            if pol.chi_of(pol.algebra.bracket(unit(n, a), unit(n, b))) != 0:
                problems.append("chi does not vanish on [m, m]")
    return sorted(set(problems))


def witt_brackets_exact(pol: PolarizationData) -> bool:
    """Whether the literal relations ``[z_i, z_{j+s}] = delta_ij f`` hold."""
    src, s, z = pol.source, pol.s, pol.witt_z
    zero = (Fraction(0),) * src.dim
    for i in range(s):
        for j in range(s):
            if src.bracket(z[i], z[j]) != zero or src.bracket(z[s + i], z[s + j]) != zero:
                return False
            want = pol.triple.f if i == j else zero
            if src.bracket(z[i], z[s + j]) != tuple(want):
                return False
    return True
