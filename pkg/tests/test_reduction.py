import random

import pytest

from kazhdanw.liealg import build_polarization, catalog, polarize
from kazhdanw.poly import Polynomial, PolyRing, to_text
from kazhdanw.reduction import (
    ReductionError,
    d1,
    d_odd_symbolic,
    differential_terms,
    group_bound,
    homogenize,
    kernel_d1,
)
from kazhdanw.sampling import random_polys


def test_d1_examples(sl2, v2):
    assert d1(v2.e, sl2).to_record(sl2.names) == {"f*": "h"}
    assert d1(v2.h, sl2).to_record(sl2.names) == {"f*": "2"}
    assert d1(v2.e - v2.h ** 2 / 4, sl2).is_zero()


def test_d1_kills_constants(all_pols):
    for _, pol in all_pols:
        ring = PolyRing.from_polarization(pol)
        assert d1(ring.const(3), pol).is_zero()


def test_d1_rejects_m_variables(sl2, v2):
    with pytest.raises(ReductionError):
        d1(v2.f * v2.e, sl2)


def test_d1_is_a_derivation(sl3m):
    rng = random.Random(2)
    ring = PolyRing.from_polarization(sl3m)
    for _ in range(10):
        F, G = random_polys(ring, sl3m.q_indices, 2, rng, 3)
        dFG, dF, dG = d1(F * G, sl3m), d1(F, sl3m), d1(G, sl3m)
        for i in sl3m.m_indices:
            zero = ring.zero()
            want = dF.get(i, zero) * G + F * dG.get(i, zero)
            assert dFG.get(i, zero) == want


def test_sl2_kernel_table(sl2):
    basis = kernel_d1(8, sl2)
    assert basis.table() == [1, 0, 0, 0, 1, 0, 0, 0, 1]
    assert [to_text(p) for p in basis.basis[4]] == ["e - 1/4*h^2"]


def test_sl3_principal_kernel_matches_two_generators(sl3p):
    # free algebra on generators of degrees 4 and 6
    want = [sum(1 for a in range(4) for b in range(3) if 4 * a + 6 * b == d) for d in range(13)]
    assert kernel_d1(12, sl3p).table() == want


def test_degree_zero_kernel_is_constants(all_pols):
    for _, pol in all_pols:
        basis = kernel_d1(0, pol)
        assert basis.table() == [1]


def test_kernel_below_first_generator_is_constants_only(sl2):
    assert kernel_d1(3, sl2).table() == [1, 0, 0, 0]


def test_kernel_rejects_negative_degree(sl2):
    with pytest.raises(ReductionError):
        kernel_d1(-1, sl2)


def test_kernel_elements_are_solutions_and_closed(sl3m):
    basis = kernel_d1(6, sl3m).basis
    flat = [(d, p) for d, ps in basis.items() for p in ps if d > 0]
    for _, p in flat:
        assert d1(p, sl3m).is_zero()
    for d1_, p in flat:
        for d2_, q in flat:
            if d1_ + d2_ <= 6:
                assert d1(p * q, sl3m).is_zero()


def test_kernel_table_independent_of_affine_sign():
    for name, nil, cap in (("sl2", "principal", 8), ("sl3", "minimal", 5)):
        a = kernel_d1(cap, polarize(name, nil, affine_sign=-1)).table()
        b = kernel_d1(cap, polarize(name, nil, affine_sign=1)).table()
        assert a == b


def test_flipped_sign_generator(sl2):
    flipped = sl2.with_affine_sign(1)
    assert [to_text(p) for p in kernel_d1(4, flipped).basis[4]] == ["e + 1/4*h^2"]


def test_kernel_table_independent_of_tie_break():
    alg, triples = catalog("sl3")
    base = kernel_d1(6, build_polarization(alg, triples["minimal"])).table()
    permuted = build_polarization(alg, triples["minimal"], order=[7, 6, 5, 4, 3, 2, 1, 0])
    assert kernel_d1(6, permuted).table() == base


def test_kernel_record(sl2):
    rec = kernel_d1(4, sl2).to_record()
    assert rec == {"dimensions": [1, 0, 0, 0, 1], "basis": {"0": ["1"], "4": ["e - 1/4*h^2"]}}


# -- homogeneous decomposition ---------------------------------------------------


def _mono(ring, deg, pol):
    return ring.monomials_of_degree(deg, pol.q_indices)


def test_single_component_gives_single_equation(sl3p):
    ring = PolyRing.from_polarization(sl3p)
    system = homogenize([(ring.var(sl3p.names.index("E13")), 6)])
    assert [e.text() for e in system.levels] == ["d1(F~0) = 0"]
    assert system.grouped_text() == ["d1(F_0) = 0"]


def test_second_group_couples_third_order(sl3p):
    ring = PolyRing.from_polarization(sl3p)
    top = ring.var(sl3p.names.index("E13"))
    low = ring.var(sl3p.names.index("H1"))
    comps = [(top, 6), (None, 5), (None, 4), (None, 3), (low, 2)]
    system = homogenize(comps)
    assert system.levels[4].text() == "d1(F~4) + d3(F~0) = 0"
    assert system.levels[2].text() == "0 = 0"
    assert system.levels[2].text(only_active=False) == "d1(F~2) = 0"
    assert system.grouped_text()[1] == "d1(F_2) + d3(F_0) = 0"
    assert system.groups[1] == [4]
    assert system.symbolic_weights[3][0] == "w3_0"


def test_group_bound_example():
    assert group_bound(9) == 2


def test_homogenize_reports_bound(sl3m):
    ring = PolyRing.from_polarization(sl3m)
    comps = []
    for i in range(10):
        deg = 9 - i
        monos = _mono(ring, deg, sl3m)
        comps.append((Polynomial({monos[0]: 1}, ring) if monos else None, deg))
    system = homogenize(comps)
    assert system.n0 == 9 and system.bound == 2
    assert system.p_prime == 2 and system.bound_holds


def test_homogenize_rejects_bad_degrees(sl2, v2):
    with pytest.raises(ReductionError, match="expected"):
        homogenize([(v2.e, 4), (v2.h, 2)])
    with pytest.raises(ReductionError, match="not homogeneous"):
        homogenize([(v2.h, 4)])
    with pytest.raises(ReductionError):
        homogenize([])


# -- symbolic higher orders ------------------------------------------------------


def test_order_one_is_d1(sl2, v2):
    [term] = d_odd_symbolic(0, v2.e * v2.h, sl2)
    assert term.weight == "1"
    assert (term.value + d1(v2.e * v2.h, sl2).scale(-1)).is_zero()


def test_order_three_shifts(sl2, v2):
    F = v2.e ** 2 * v2.h ** 3
    terms = d_odd_symbolic(1, F, sl2)
    assert len(terms) == 8
    assert len({t.weight for t in terms}) == 8
    for t in terms:
        for i, P in t.value.components.items():
            if P:
                assert P.kazhdan_split().keys() == {F.kazhdan_degree() + sl2.weights[i] - 4}


def test_even_orders_vanish(sl2, v2):
    assert differential_terms(2, v2.e, sl2) == []
    assert differential_terms(4, v2.e, sl2) == []


def test_order_cap(sl2, v2):
    with pytest.raises(ReductionError):
        d_odd_symbolic(3, v2.e, sl2)
    with pytest.raises(ReductionError):
        d_odd_symbolic(-1, v2.e, sl2)
