import dataclasses

import pytest
from gmpy2 import mpq

from pivcheck.algebra import Poly, RatFn
from pivcheck.identities import (IDENTITIES, hermite_limit_check, piv_parameters,
                                 verify_ladder_expansions, verify_piv,
                                 verify_piv_canonical, verify_r_chain, verify_s1,
                                 verify_s2, verify_table, verify_toda,
                                 verify_toda_molecule)
from pivcheck.moments import recurrence_table

from conftest import T

ALPHA0 = RatFn(Poly([0, -2]), Poly([1, 0, 2]))


def _all_pass(reports):
    bad = [(r.identity_id, r.n, r.note) for r in reports if r.status == "fail"]
    assert not bad


def _probes_zero(report):
    assert len(report.probes) == 5
    assert all(v == 0 for _, v in report.probes)


def test_s1_examples(tables):
    r = verify_s1(tables[1], 0)
    assert r.passed and r.residual.is_zero()
    _probes_zero(r)
    # hand check at n = 0: beta_1 = 3/2 + alpha_0 (t - alpha_0)
    t0 = mpq(2)
    a = ALPHA0(t0)
    assert tables[1].beta[1](t0) == mpq(3, 2) + a * (t0 - a)
    assert verify_s1(tables[2], 3).passed


def test_s2_examples(tables):
    assert verify_s2(tables[1], 1).passed
    assert verify_s2(tables[2], 2).passed
    with pytest.raises(ValueError, match="n = 0"):
        verify_s2(tables[1], 0)


def test_toda_examples(tables):
    reps = verify_toda(tables[1], 0)
    assert [r.identity_id for r in reps] == ["TODA_ALPHA"]
    assert reps[0].passed
    # flow at n = 0 by hand
    assert ALPHA0.derivative() == 1 - 2 * tables[1].beta[1]
    reps = verify_toda(tables[1], 1)
    assert [r.identity_id for r in reps] == ["TODA_BETA", "TODA_ALPHA"]
    _all_pass(reps)


def test_toda_molecule(tables):
    assert verify_toda_molecule(tables[1], 1).passed
    assert verify_toda_molecule(tables[2], 2).passed
    with pytest.raises(ValueError):
        verify_toda_molecule(tables[1], 0)


def test_r_chain_examples(tables):
    reps = verify_r_chain(tables[1], 0)
    by_id = {r.identity_id: r for r in reps}
    assert by_id["R_SUM"].passed
    assert by_id["R_SQUARE"].status == "skipped"
    r0, r1 = tables[1].r[0], tables[1].r[1]
    want = RatFn(Poly([0, 0, -6, 0, -4]), Poly([1, 0, 2]) ** 2)
    assert (r1 + r0) / 2 == want == (T - ALPHA0) * ALPHA0
    reps = verify_r_chain(tables[1], 1)
    assert len(reps) == 5
    _all_pass(reps)


def test_piv_examples(tables):
    r = verify_piv(tables[1], 0)
    assert r.passed and r.note
    # hand values at t = 1
    t0 = mpq(1)
    a = ALPHA0(t0)
    a1 = ALPHA0.derivative()(t0)
    a2 = ALPHA0.derivative().derivative()(t0)
    assert a2 == mpq(8, 27)
    rhs = a1 * a1 / (2 * a) + 6 * a ** 3 - 8 * a * a + 2 * (1 - 2 - 1) * a - mpq(4, 2) / a
    assert rhs == mpq(8, 27)
    assert verify_piv(tables[1], 1).passed
    assert verify_piv(tables[2], 2).passed


def test_piv_undefined_at_gamma_zero(table_k0):
    with pytest.raises(ValueError, match="gamma=0"):
        verify_piv(table_k0, 1)


def test_piv_canonical_examples(tables):
    # a = 2n + 1 + gamma gives 3 at K=1, n=0; a = 4 is rejected below
    assert piv_parameters(1, 0) == (3, -8)
    assert piv_parameters(2, 1) == (7, -32)
    r = verify_piv_canonical(tables[1], 0)
    assert r.passed
    r = verify_piv_canonical(tables[2], 1)
    assert r.passed and "(7, -32)" in r.note


def test_piv_canonical_rejects_a_equal_4(tables, monkeypatch):
    import pivcheck.identities as ids
    monkeypatch.setattr(ids, "piv_parameters", lambda K, n: (4, -8))
    assert verify_piv_canonical(tables[1], 0).status == "fail"


def test_ladder_examples(tables):
    reps = verify_ladder_expansions(tables[1], 1)
    _all_pass(reps)
    assert verify_ladder_expansions(tables[2], 2)[0].passed
    with pytest.raises(ValueError):
        verify_ladder_expansions(tables[1], 1, order=2)


@pytest.mark.parametrize("K", [1, 2, 3])
def test_full_table(tables, K):
    reps = verify_table(tables[K], 6)
    _all_pass(reps)
    seen = {r.identity_id for r in reps}
    assert seen == set(IDENTITIES)
    for r in reps:
        if r.passed:
            _probes_zero(r)
    keys = [(list(IDENTITIES).index(r.identity_id), r.n) for r in reps]
    assert keys == sorted(keys)


def test_hermite_limit(table_k0):
    assert hermite_limit_check(table_k0)
    reps = verify_table(table_k0, 5)
    _all_pass(reps)
    assert not any(r.identity_id.startswith("PIV") for r in reps)


def test_reflected_table_passes(tables):
    tbl = tables[2]
    refl = dataclasses.replace(
        tbl,
        alpha=tuple(-a.reflect() for a in tbl.alpha),
        beta=tuple(b.reflect() for b in tbl.beta),
        r=tuple(r.reflect() for r in tbl.r),
    )
    # (alpha(-t), beta(-t)) is the data of the same weight at -t: alpha flips sign
    assert refl.alpha == tbl.alpha and refl.beta == tbl.beta
    _all_pass([verify_s1(refl, 2), verify_piv(refl, 2)])


# -- negative controls: the checker must catch corrupted data --------------------

def _perturbed(tbl, n, delta):
    alpha = list(tbl.alpha)
    alpha[n] = alpha[n] + delta
    return dataclasses.replace(tbl, alpha=tuple(alpha))


@pytest.mark.parametrize("delta", [RatFn(mpq(1, 10 ** 6)), RatFn(T ** 3, 1 + T ** 4)])
def test_perturbed_alpha_fails(tables, delta):
    bad = _perturbed(tables[1], 2, delta)
    for rep in (verify_s1(bad, 2), verify_piv(bad, 2), verify_piv_canonical(bad, 2),
                verify_toda(bad, 2)[0]):
        assert rep.status == "fail"
        assert not rep.residual.is_zero()
        assert rep.max_abs_residual_at_probes > 0


def test_wrong_piv_parameter_fails(tables, monkeypatch):
    import pivcheck.identities as ids
    monkeypatch.setattr(ids, "piv_parameters", lambda K, n: (2 * n + 2 * K, -8 * K * K))
    assert verify_piv_canonical(tables[1], 1).status == "fail"


def test_perturbed_beta_fails_ladder(tables):
    tbl = tables[1]
    beta = list(tbl.beta)
    beta[1] = beta[1] + mpq(1, 3)
    bad = dataclasses.replace(tbl, beta=tuple(beta))
    reps = verify_ladder_expansions(bad, 1)
    assert reps[1].status == "fail" and "z^-1" in reps[1].note


def test_report_serialization(tables):
    r = verify_s1(tables[1], 0)
    js = r.to_json()
    assert js["identity"] == "S1_DIFF" and js["statement"] == IDENTITIES["S1_DIFF"]
    assert js["residual"] == [] and js["max_abs_residual_at_probes"] == "0"
    assert r.csv_row() == ["S1_DIFF", 1, 0, "pass", "", "0"]
