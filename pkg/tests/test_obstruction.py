import json
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from szabo.obstruction import (
    INFEASIBLE,
    BundleDescriptor,
    InapplicableError,
    ProofTrace,
    Z2TruncPoly,
    ko_order,
    lema5_solve,
    phi,
    phi_bounds_check,
    phi_direct,
    phi_table,
    subb_dichotomy,
    techn_case1,
    techn_case2,
    techn_case3,
    wolf_verdict,
    z2_mul,
    z2_pow_one_plus_x,
)


def bits(n, coeffs):
    return Z2TruncPoly.from_coeffs(n, coeffs)


def test_truncated_powers():
    assert z2_pow_one_plus_x(2, 10) == bits(10, [1, 0, 1])
    assert z2_pow_one_plus_x(4, 10) == bits(10, [1, 0, 0, 0, 1])
    assert z2_pow_one_plus_x(3, 2) == bits(2, [1, 1, 1])
    with pytest.raises(ValueError):
        z2_mul(Z2TruncPoly.one(2), Z2TruncPoly.one(3))


def test_lucas_matches_pascal_parity():
    rows = oracles.binomial_parity_rows(64)
    for r in range(65):
        for n in range(65):
            expected = [rows[r][i] if i <= r else 0 for i in range(n + 1)]
            assert z2_pow_one_plus_x(r, n).coeffs() == expected


@given(st.integers(0, 40), st.integers(0, 40), st.integers(1, 30))
def test_power_law(a, b, n):
    x = z2_pow_one_plus_x(1, n)
    assert z2_pow_one_plus_x(a, n) * z2_pow_one_plus_x(b, n) == z2_pow_one_plus_x(a + b, n)
    assert x ** a == z2_pow_one_plus_x(a, n)


@given(st.integers(0, 2**20), st.integers(0, 20))
def test_inverse_series(b, n):
    p = Z2TruncPoly(n, b | 1)
    assert (p * p.inverse()).is_one()


def test_phi_examples_and_table():
    assert (phi(1), phi(8), phi(10)) == (1, 4, 6)
    assert phi_table(200) == [oracles.phi_count(n) for n in range(1, 201)]
    assert all(phi(n) == phi_direct(n) for n in range(1, 300))
    with pytest.raises(ValueError):
        phi(0)


def test_phi_increments():
    prev = 0
    for s in range(1, 500):
        step = phi(s) - prev
        assert step == (1 if s % 8 in (0, 1, 2, 4) else 0)
        prev = phi(s)


def test_phi_bounds_examples():
    b = phi_bounds_check(10)
    assert b.j == 3 and b.phi == 6 and b.large_bound and b.passes
    b = phi_bounds_check(7)
    assert 2 ** b.phi == 8 and not b.order_exceeds and b.exceptional and b.passes
    b = phi_bounds_check(13)
    assert b.phi == 7 and b.j == 3 and b.passes


def test_lema5_examples():
    assert lema5_solve(3, 5) == ()
    assert ko_order(4) == 8 and lema5_solve(4, 4) == (2, 6)
    assert lema5_solve(0, 9) == (0, ko_order(9) // 2)
    for n in range(1, 20):
        for r in range(0, 40, 2):
            mod = ko_order(n)
            assert {a for a in range(mod) if (2 * a - r) % mod == 0} == set(lema5_solve(r, n))


def test_subb_dichotomy_examples():
    for n in range(1, 9):
        for r in range(n + 2):
            assert subb_dichotomy(Z2TruncPoly.one(n), r, n).case == "trivial class"
    v = subb_dichotomy(z2_pow_one_plus_x(3, 7), 3, 7)
    assert v.case == "degree = rank"
    assert v.inverse == z2_pow_one_plus_x(5, 7)
    assert v.product_bits == 1 | (1 << 8)
    with pytest.raises(ValueError):
        subb_dichotomy(Z2TruncPoly.one(3), 5, 3)


def test_subb_low_degree_always_contradicts():
    # exhaustive over n <= 8: 0 < deg p < r <= n is impossible
    for n in range(1, 9):
        for b in range(1, 2 ** (n + 1), 2):
            p = Z2TruncPoly(n, b)
            for r in range(p.degree() + 1, n + 1):
                if 0 < p.degree():
                    assert subb_dichotomy(p, r, n).case == "contradiction"


def test_case1_examples():
    t = techn_case1(10, 5)
    assert t.verdict == INFEASIBLE and t.replay()
    assert techn_case1(10, 0).verdict == "consistent"
    assert techn_case1(4, 3).verdict == "vacuous"


def test_case2_examples():
    t = techn_case2(4, 2, 5)
    assert t.verdict == INFEASIBLE and t.replay()
    with pytest.raises(InapplicableError):
        techn_case2(7, 2)
    assert techn_case2(5, 0).verdict == "consistent"
    with pytest.raises(ValueError):
        techn_case2(4, 6, 5)


def test_case2_rank_max_dependence():
    # at n = 15, (1+x)^16 = 1 truncated, so r = 16 = n+1 reaches the KO step;
    # with a larger rank bound, r = 32 is not decided
    t = techn_case2(15, 16)
    assert t.verdict == INFEASIBLE
    assert any(s.rule == "ko_trivial" for s in t.steps)
    assert techn_case2(15, 32, rank_max=40).verdict == "undetermined"


def test_case3_examples():
    t = techn_case3(12, 10, 4)
    assert t.verdict == INFEASIBLE and t.replay()
    assert [s.lemma for s in t.steps] == ["2.7(3)", "2.3(1)", "2.5(2)", "2.7(3)", "2.7(3)", "2.6"]
    with pytest.raises(ValueError, match="k ≥ 10 fails"):
        techn_case3(12, 9, 4)
    with pytest.raises(ValueError, match="n/2 ≤ k fails"):
        techn_case3(30, 11, 4)
    with pytest.raises(ValueError, match="r ≤ n\\+1 fails"):
        techn_case3(12, 10, 14)
    assert techn_case3(12, 10, 0).verdict == "consistent"
    odd = techn_case3(12, 10, 5)
    assert odd.verdict == INFEASIBLE and odd.steps[-1].rule == "ko_halving"


def test_traces_round_trip_and_detect_tampering():
    t = techn_case3(20, 12, 6)
    again = ProofTrace.from_json(json.loads(json.dumps(t.to_json())))
    assert again.replay() and again.to_json() == t.to_json()
    again.steps[2].conclusion = "forged"
    assert not again.replay()


def test_bundle_descriptor():
    d = BundleDescriptor(n=10, rank=3, self_tensor_gamma1=True).derive()
    assert d.ko_residues == () and d.contradiction
    d = BundleDescriptor(n=10, rank=4, self_tensor_gamma1=True, subbundle_of_trivial=11).derive()
    assert d.ko_residues == lema5_solve(4, 10) and d.contradiction is None
    assert json.loads(json.dumps(d.to_json()))["rank"] == 4


def expected_wolf(p, q):
    return (p == q and p not in (2, 4, 8)) or (p != q and max(p, q) >= 11)


def test_wolf_examples():
    assert wolf_verdict(3, 3).symmetric
    assert wolf_verdict(4, 4).verdict == "inconclusive"
    w = wolf_verdict(2, 11)
    assert w.symmetric
    sweep = next(s for s in w.trace.steps if s.rule == "sweep")
    assert sweep.inputs == {"case": 3, "n": 12, "k": 10}


def test_wolf_grid_symmetry_and_replay():
    for p, q in product(range(13), repeat=2):
        w = wolf_verdict(p, q)
        assert w.symmetric == expected_wolf(p, q)
        assert w.verdict == wolf_verdict(q, p).verdict
    assert wolf_verdict(5, 5).trace.replay()
    assert wolf_verdict(12, 3).trace.replay()
