"""Random Kazhdan-homogeneous polynomials for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence

from .poly import Polynomial, PolyRing


def random_coefficient(rng: random.Random) -> Fraction:
    num = rng.choice([k for k in range(-5, 6) if k])
    return Fraction(num, rng.randint(1, 3))


def random_monomial(ring: PolyRing, variables: Sequence[int], rng: random.Random, max_poly_deg: int,
                    min_poly_deg: int = 1):
    d = rng.randint(min_poly_deg, max_poly_deg)
    mono = [0] * ring.nvars
    for _ in range(d):
        mono[rng.choice(variables)] += 1
    return tuple(mono)


def random_homogeneous(
    ring: PolyRing,
    variables: Sequence[int],
    rng: random.Random,
    max_poly_deg: int = 5,
    max_terms: int = 3,
    poly_homogeneous: bool = False,
) -> Polynomial:
    """Non-zero Kazhdan-homogeneous polynomial in ``variables`` of polynomial degree at most ``max_poly_deg``.

    A random seed monomial fixes the Kazhdan degree; further terms are drawn
    from the other monomials of that degree (and of the same polynomial
    degree when ``poly_homogeneous``).
    """
    seed = random_monomial(ring, variables, rng, max_poly_deg)
    deg = ring.monomial_degree(seed)
    pool: List = [seed]
    if all(ring.weights[v] + 2 > 0 for v in variables):
        pool = [
            m for m in ring.monomials_of_degree(deg, variables)
            if sum(m) <= max_poly_deg and (not poly_homogeneous or sum(m) == sum(seed)) and m != seed
        ]
        pool = [seed] + rng.sample(pool, min(len(pool), max_terms - 1))
    else:
        # non-positive degrees make the homogeneous span infinite; draw instead
        d = sum(seed)
        for _ in range(20 * max_terms):
            if len(pool) >= max_terms:
                break
            m = random_monomial(ring, variables, rng, d, d)
            if ring.monomial_degree(m) == deg and m not in pool:
                pool.append(m)
    return Polynomial({m: random_coefficient(rng) for m in pool}, ring)


def random_polys(ring: PolyRing, variables: Sequence[int], count: int, rng: random.Random,
                 max_poly_deg: int = 5, max_terms: int = 3) -> List[Polynomial]:
    return [random_homogeneous(ring, variables, rng, max_poly_deg, max_terms) for _ in range(count)]


def seeded(seed: Optional[int]) -> random.Random:
    return random.Random(0 if seed is None else seed)
