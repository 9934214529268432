import random

import pytest
from gmpy2 import mpq

from pivcheck.algebra import Poly
from pivcheck.moments import recurrence_table

T = Poly([0, 1])


def rand_rational(rng: random.Random, span=9, den=6) -> mpq:
    return mpq(rng.randint(-span, span), rng.randint(1, den))


def rand_poly(rng: random.Random, max_deg=4) -> Poly:
    return Poly([rand_rational(rng) for _ in range(rng.randint(0, max_deg + 1))])


def cofactor_det(m):
    """Laplace expansion along the first row; the oracle for Bareiss."""
    if not m:
        return Poly([1])
    if len(m) == 1:
        return m[0][0]
    total = Poly()
    for j, a in enumerate(m[0]):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = a * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@pytest.fixture(scope="session")
def tables():
    return {K: recurrence_table(K, 7) for K in (1, 2, 3)}


@pytest.fixture(scope="session")
def table_k0():
    return recurrence_table(0, 6)
