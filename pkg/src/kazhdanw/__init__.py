"""Exact graph calculus for linear Poisson structures with the Kazhdan grading.

Builds Premet polarizations of small semisimple Lie algebras, evaluates
Kontsevich-type graph operators on polynomials, solves the leading reduction
equation by exact graded linear algebra and cross-checks the result against a
brute-force PBW model of the finite W-algebra.
"""

__version__ = "0.1.0"
