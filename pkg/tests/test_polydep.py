import pytest

import oracles
from szabo.exactpoly import MultiPoly, QuadForm, Signature
from szabo.polydep import (
    PolyMapFamily,
    dependence_certificate,
    dependence_degree,
    descent_chain,
    descent_step,
    evaluated_rank,
    is_zero_ideal,
    minor_generators,
    nullcone_dependent,
    random_family,
)
from szabo.pseudolin import PreconditionError

S12 = Signature(1, 2)
M = S12.m
ONE = MultiPoly.constant(1, M)
ZERO = MultiPoly.zero(M)
Q = QuadForm(S12).poly


def fam(*cols, sig=S12):
    return PolyMapFamily(sig, len(cols[0]), cols)


CONSTANTS = fam((ONE, ZERO), (ZERO, ONE))
QFAM = fam((Q, ZERO), (ZERO, ONE))
SAME = fam((ONE, Q), (ONE, Q))


def test_minor_examples():
    assert minor_generators(CONSTANTS).nonzero() == [((0, 1), ONE)]
    assert minor_generators(QFAM).nonzero() == [((0, 1), Q)]
    assert minor_generators(SAME).nonzero() == []


def test_zero_ideal_and_degree_examples():
    assert is_zero_ideal(minor_generators(SAME))
    assert not is_zero_ideal(minor_generators(CONSTANTS))
    assert dependence_degree(CONSTANTS) == 0
    assert dependence_degree(QFAM) == 1
    l3 = MultiPoly.variable(2, M)
    assert dependence_degree(fam((Q * Q * l3, ZERO), (ZERO, ONE))) == 2
    assert dependence_degree(SAME) is None


def test_nullcone_dependence_examples():
    assert nullcone_dependent(QFAM)
    assert not nullcone_dependent(CONSTANTS)
    assert nullcone_dependent(SAME)
    assert evaluated_rank(QFAM, (5, 3, 4)) == 1


def test_certificate_and_descent_example():
    cert = dependence_certificate(QFAM)
    assert list(cert.coefficients) == [ONE, ZERO]
    assert list(cert.y) == [ONE, ZERO]
    nxt = descent_step(QFAM, cert)
    assert nxt == CONSTANTS
    assert dependence_degree(nxt) == 0
    with pytest.raises(PreconditionError):
        dependence_certificate(CONSTANTS)
    with pytest.raises(PreconditionError):
        dependence_certificate(SAME)


@pytest.mark.parametrize("sig", [(1, 2), (2, 2)])
def test_minor_valuation_matches_cofactor_oracle(sig):
    s = Signature(*sig)
    xs = oracles.symbols(s.m)
    qx = oracles.q_expr(s.p, s.q, xs)
    for seed in range(6):
        w, r, k = 2 + seed % 3, 1 + seed % 2, seed % 3
        F = random_family(s, w, r, k, seed)
        cols = [[oracles.to_sympy(c, xs) for c in x] for x in F.maps]
        vals = [oracles.q_valuation(mn, qx, xs) for mn in oracles.all_minors(cols, w, r)]
        vals = [v for v in vals if v is not None]
        assert dependence_degree(F) == (min(vals) if vals else None)


@pytest.mark.parametrize("seed", range(8))
def test_descent_chain_properties(seed):
    s = Signature(2, 2) if seed % 2 else S12
    F = random_family(s, 3, 2, 1 + seed % 3, seed)
    k = dependence_degree(F)
    chain = descent_chain(F, seed=seed)
    assert len(chain) == k
    for step in chain:
        assert step.identity_holds
        assert step.k_after == step.k_before - 1
    assert not chain or chain[-1].k_after == 0


def test_json_round_trip():
    F = random_family(S12, 3, 2, 1, 5)
    assert PolyMapFamily.from_json(F.to_json()) == F
    with pytest.raises(ValueError):
        PolyMapFamily(S12, 2, [(ONE,)])
