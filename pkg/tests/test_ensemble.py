import math

import pytest
from gmpy2 import mpq

from pivcheck.ensemble import (MultiplicityPartition, exact_dn, exact_partition,
                               jpdf_log, mc_dn, mc_partition)


def test_jpdf_examples():
    assert jpdf_log([0, 1], MultiplicityPartition((1, 1))) == -1
    assert jpdf_log([0, 1], MultiplicityPartition((2, 1))) == -1
    # pair exponent 2 m_i m_j = 4 shows up away from unit gaps
    assert jpdf_log([0, 2], MultiplicityPartition((2, 1))) == pytest.approx(4 * math.log(2) - 4)
    assert jpdf_log([1, 1], MultiplicityPartition((1, 1))) == -math.inf


def test_partition_validation():
    with pytest.raises(ValueError):
        MultiplicityPartition((1, 0))
    with pytest.raises(ValueError):
        jpdf_log([0], MultiplicityPartition((1, 1)))
    assert MultiplicityPartition((2, 1, 3)).N == 6


def test_exact_partition_examples():
    assert exact_partition(1, 1) == 1
    assert exact_partition(0, 3) == 1
    assert exact_partition(2, 1) == mpq(3, 4)
    assert exact_dn(1, 1, 1) == mpq(3, 2)
    assert exact_dn(2, 1, "0.7") == (3 + 4 * mpq(7, 10) ** 4) / 8


@pytest.mark.parametrize("n,t", [(1, 1), (2, "0.7")])
def test_mc_dn_within_three_sigma(n, t):
    est = mc_dn(n, 1, t, 400_000, seed=11)
    assert abs(est.z_score(exact_dn(n, 1, t))) < 3


def test_mc_dn_large_t_leading_term():
    est = mc_dn(1, 1, 10, 100_000, seed=5)
    assert est.mean / 10 ** 2 == pytest.approx(1, rel=0.1)


def test_mc_partition():
    est = mc_partition(1, 1, 400_000, seed=3)
    assert abs(est.z_score(1)) < 3
    est = mc_partition(2, 1, 400_000, seed=3)
    assert abs(est.z_score(mpq(3, 4))) < 3
    zero = mc_partition(0, 2, 20_000, seed=1)
    assert zero.mean == 1 and zero.std_error == 0


def test_reproducible_and_worker_independent():
    a = mc_dn(2, 1, "0.7", 150_000, seed=42)
    b = mc_dn(2, 1, "0.7", 150_000, seed=42)
    c = mc_dn(2, 1, "0.7", 150_000, seed=42, workers=3)
    assert a == b == c
    assert mc_dn(2, 1, "0.7", 150_000, seed=43).mean != a.mean


def test_sample_floor():
    with pytest.raises(ValueError):
        mc_dn(1, 1, 0, 100)
