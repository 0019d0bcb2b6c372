"""Property suites shared by the command line and the test-suite."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

from . import graphs as G
from .envelope import duflo_apply, envelope_for, w_algebra_basis
from .liealg import (
    build_polarization,
    polarize,
    special_linear,
    trace_ad,
)
from .operators import (
    check_degree_lemma,
    compose_exterior,
    eval_two_point,
    wheel_weight_violations,
    weight_additivity_violations,
)
from .poly import PolyRing, to_text
from .reduction import homogenize, kernel_d1
from .sampling import random_homogeneous, random_polys

MAX_FAILURES = 5


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    nonzero: int = 0
    failures: List[dict] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, record: dict):
        self.failures.append(record)

    def to_record(self) -> dict:
        return {
            "suite": self.name,
            "checks": self.checks,
            "nonzero_outputs": self.nonzero,
            "failures": self.failures[:MAX_FAILURES],
            "failure_count": len(self.failures),
            "details": self.details,
            "pass": self.passed,
        }


def default_polarizations():
    return [
        ("sl2/principal", polarize("sl2", "principal")),
        ("sl3/principal", polarize("sl3", "principal")),
        ("sl3/minimal", polarize("sl3", "minimal")),
    ]


def _q_ring(pol):
    return PolyRing.from_polarization(pol)


def _record_report(result: SuiteResult, report, F, G_=None):
    result.checks += 1
    result.nonzero += report.nonzero
    if not report.passed:
        for f in report.failures:
            rec = {"graph": report.graph, "F": to_text(F), **f}
            if G_ is not None:
                rec["G"] = to_text(G_)
            result.fail(rec)


def reduction_graphs(t: int):
    out = list(G.enumerate_bernoulli(t))
    if t >= 4:
        out.extend(G.enumerate_bw(t))
    return out


def bernoulli_suite(pol, samples: int = 50, max_t: int = 4, seed: int = 0, max_poly_deg: int = 5) -> SuiteResult:
    """Degree shift ``wt(e_inf) - 2(t-1)`` for every Bernoulli and BW graph up to ``max_t``."""
    res = SuiteResult("bernoulli")
    rng = random.Random(seed)
    Fs = random_polys(_q_ring(pol), pol.q_indices, samples, rng, max_poly_deg)
    for t in range(1, max_t + 1):
        for g in reduction_graphs(t):
            for F in Fs:
                _record_report(res, check_degree_lemma(g, F, pol), F)
    res.details["graphs"] = sum(len(reduction_graphs(t)) for t in range(1, max_t + 1))
    return res


def wheel_suite(pol, samples: int = 50, max_i: int = 4, seed: int = 0, max_poly_deg: int = 5) -> SuiteResult:
    """Degree shift ``-2i`` for wheels, every edge ordering up to rotation."""
    res = SuiteResult("wheel")
    rng = random.Random(seed)
    Fs = random_polys(_q_ring(pol), pol.q_indices, samples, rng, max_poly_deg)
    for i in range(2, max_i + 1):
        for g in G.enumerate_wheels(i, edge_orders=True):
            for F in Fs:
                _record_report(res, check_degree_lemma(g, F, pol), F)
    bad = weight_additivity_violations(pol.algebra, pol.weights)
    res.details["weight_additivity_violations"] = [[pol.names[x] for x in v] for v in bad[:MAX_FAILURES]]
    return res


def wheel_weight_suite(pol, samples: int = 20, max_i: int = 4, seed: int = 0) -> SuiteResult:
    """Labels on F-edges of a wheel with non-zero output have weights summing to zero."""
    res = SuiteResult("wheel-weights")
    rng = random.Random(seed)
    Fs = random_polys(_q_ring(pol), pol.q_indices, samples, rng)
    for i in range(2, max_i + 1):
        for g in G.enumerate_wheels(i, edge_orders=True):
            for F in Fs:
                res.checks += 1
                for labels in wheel_weight_violations(g, F, pol):
                    res.fail({"graph": g.to_text(), "F": to_text(F), "labels": [pol.names[x] for x in labels]})
    return res


def two_point_suite(pol, max_n: int = 3, sample_n4: int = 20, seed: int = 0, max_poly_deg: int = 4) -> SuiteResult:
    """Degree shift ``-2n`` for all of Q_(n,2), n <= max_n, plus sampled graphs at n = 4."""
    res = SuiteResult("two-point")
    rng = random.Random(seed)
    ring = _q_ring(pol)
    graphs = [g for n in range(1, max_n + 1) for g in G.iter_q_n2(n)]
    graphs += G.sample_q_n2(4, sample_n4, rng)
    for g in graphs:
        F, Gp = random_polys(ring, pol.q_indices, 2, rng, max_poly_deg)
        _record_report(res, check_degree_lemma(g, F, pol, G=Gp), F, Gp)
    res.details["graphs"] = len(graphs)
    return res


def labeled_chain_example() -> SuiteResult:
    """The four-vertex chain with a prescribed labeling on sl4 (minimal nilpotent).

    Labels: ``z4, x_t, z3, z4`` on the edges into F and ``x_p`` into G with
    ``x_t = E24, x_p = E34``; the remaining edges are summed.  The output
    degree must be ``deg_K(FG) - 8``.
    """
    res = SuiteResult("labeled-chain")
    alg, triples = special_linear(4)
    pol = build_polarization(alg, triples["minimal"])
    ring = _q_ring(pol)
    ix = pol.names.index

    def v(name):
        return ring.var(ix(name))

    F = v("E24") * v("z4") ** 2 * v("z3") * v("H1")
    Gp = v("E34") * v("E13") * v("z3")
    fixed = {0: ix("z4"), 2: ix("E24"), 4: ix("z3"), 6: ix("z4"), 7: ix("E34")}
    out = eval_two_point(G.two_point_chain(), F, Gp, pol, colored=True, fixed=fixed)
    res.checks = 1
    res.details.update(F=to_text(F), G=to_text(Gp), output=to_text(out))
    if not out:
        res.fail({"reason": "labeled output vanished"})
        return res
    res.nonzero = 1
    shift = out.kazhdan_degree() - (F * Gp).kazhdan_degree()
    res.details["shift"] = shift
    if not out.is_kazhdan_homogeneous() or shift != -8:
        res.fail({"observed": shift, "predicted": -8})
    return res


def homogenize_suite(seed: int = 0, trials: int = 30) -> SuiteResult:
    """Level equations regroup into the four-step system and respect the group bound."""
    res = SuiteResult("homogenize")
    rng = random.Random(seed)
    pol = polarize("sl3", "principal")
    ring = _q_ring(pol)
    for _ in range(trials):
        n0 = rng.randint(1, 16)
        depth = rng.randint(1, n0 + 1)
        comps = []
        for i in range(depth):
            deg = n0 - i
            monos = ring.monomials_of_degree(deg, pol.q_indices) if deg > 0 else []
            if monos and rng.random() < 0.6:
                m = rng.choice(monos)
                comps.append((_mono(ring, m), deg))
            else:
                comps.append((None, deg))
        system = homogenize(comps)
        res.checks += 1
        for eq in system.levels:
            want = {(k, eq.level - 2 * (k - 1)) for k in range(1, eq.level + 2, 2) if eq.level - 2 * (k - 1) >= 0}
            if set(eq.terms) != want:
                res.fail({"n0": n0, "level": eq.level, "terms": list(eq.terms)})
        for p, eq in enumerate(system.grouped):
            levels = [e for e in system.levels if e.level // 4 == p]
            induced = {(k, i // 4) for e in levels for k, i in e.terms}
            if induced != set(eq):
                res.fail({"n0": n0, "group": p, "grouped": list(eq), "induced": sorted(induced)})
        if not system.bound_holds:
            res.fail({"n0": n0, "p_prime": system.p_prime, "bound": system.bound})
    return res


def _mono(ring, m):
    from .poly import Polynomial

    return Polynomial({m: Fraction(1)}, ring)


def exterior_wheel_suite(pol, samples: int = 10, seed: int = 0) -> SuiteResult:
    """Interior reduction graph followed by exterior wheels."""
    res = SuiteResult("exterior-wheels")
    rng = random.Random(seed)
    Fs = random_polys(_q_ring(pol), pol.q_indices, samples, rng)
    interiors = [G.bernoulli(1), G.bernoulli(2), G.bernoulli(2, (True, False)), G.bernoulli(3)]
    wheel_sets = [[], [G.wheel(2)], [G.wheel(3)], [G.wheel(2), G.wheel(2)]]
    for g in interiors:
        for ws in wheel_sets:
            for F in Fs:
                rep = compose_exterior(g, ws, None, F, pol)
                _record_composition(res, rep, F, pol)
    return res


def exterior_bernoulli_suite(pol, samples: int = 10, seed: int = 0) -> SuiteResult:
    """Interior graph whose dangling edge differentiates the root of an exterior chain."""
    res = SuiteResult("exterior-bernoulli")
    rng = random.Random(seed)
    Fs = random_polys(_q_ring(pol), pol.q_indices, samples, rng)
    interiors = [G.bernoulli(1), G.bernoulli(2), G.bernoulli(1, (True,))]
    wheel_sets = [[], [G.wheel(2)]]
    for g in interiors:
        for ws in wheel_sets:
            for m in (1, 2):
                for F in Fs:
                    rep = compose_exterior(g, ws, m, F, pol)
                    _record_composition(res, rep, F, pol)
    return res


def _record_composition(res: SuiteResult, rep, F, pol):
    res.checks += 1
    for e in rep.entries:
        if e.value:
            res.nonzero += 1
        if not e.passed:
            res.fail({
                "interior": rep.interior, "wheels": rep.exterior_wheels, "chain": rep.exterior_bernoulli,
                "F": to_text(F), "alpha": pol.names[e.alpha],
                "beta": None if e.beta is None else pol.names[e.beta],
                "observed": e.observed, "predicted": e.predicted,
            })


def rho_suite(pols) -> SuiteResult:
    """``tr(ad H) = 0`` for every m-basis element."""
    res = SuiteResult("rho-vanishing")
    for label, pol in pols:
        for i in pol.m_indices:
            res.checks += 1
            vec = tuple(Fraction(int(k == i)) for k in range(pol.dim))
            tr = trace_ad(pol.algebra, vec)
            if tr:
                res.fail({"polarization": label, "element": pol.names[i], "trace": str(tr)})
    return res


def gutt_suite(pol, samples: int = 10, max_n: int = 4, seed: int = 0, max_poly_deg: int = 3) -> SuiteResult:
    """Polynomial-degree components of the transported product drop Kazhdan degree by ``2n``."""
    res = SuiteResult("gutt")
    env = envelope_for(pol)
    ring = _q_ring(pol)
    rng = random.Random(seed)
    everything = list(range(pol.dim))
    for _ in range(samples):
        P = random_homogeneous(ring, everything, rng, max_poly_deg, 2, poly_homogeneous=True)
        Q = random_homogeneous(ring, everything, rng, max_poly_deg, 2, poly_homogeneous=True)
        base = P.kazhdan_degree() + Q.kazhdan_degree()
        for n in range(0, min(max_n, P.degree() + Q.degree()) + 1):
            term = env.gutt_term(P, Q, n)
            res.checks += 1
            if not term:
                continue
            res.nonzero += 1
            parts = term.kazhdan_split()
            if len(parts) != 1 or next(iter(parts)) != base - 2 * n:
                res.fail({"P": to_text(P), "Q": to_text(Q), "n": n, "degrees": sorted(parts), "predicted": base - 2 * n})
    return res


def duflo_suite(trunc_deg: int = 6, max_power: int = 2) -> SuiteResult:
    """Symmetrized Duflo images of Casimir powers commute with every basis letter of sl2."""
    res = SuiteResult("duflo")
    pol = polarize("sl2", "principal")
    env = envelope_for(pol)
    ring = _q_ring(pol)
    ix = pol.names.index
    c = ring.var(ix("h")) ** 2 + ring.var(ix("e")) * ring.var(ix("f")).scale(4)
    for k in range(1, max_power + 1):
        image = env.symmetrize(duflo_apply(c ** k, pol, trunc_deg))
        for i in range(pol.dim):
            res.checks += 1
            comm = env.commutator(env.letter(i), image)
            if comm:
                res.fail({"power": k, "letter": pol.names[i], "commutator": comm.text()})
    res.details["duflo(c)"] = to_text(duflo_apply(c, pol, trunc_deg))
    return res


def compare_tables(pol, cap: int) -> List[dict]:
    kernel = kernel_d1(cap, pol).table()
    oracle = w_algebra_basis(cap, pol).table()
    return [
        {"degree": d, "kernel": kernel[d], "oracle": oracle[d], "equal": kernel[d] == oracle[d]}
        for d in range(cap + 1)
    ]
