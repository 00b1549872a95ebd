import random
from fractions import Fraction

import pytest

from szabo.curvature import pushforward, random_symmetric_tensor, szabo_polymap
from szabo.exactpoly import InadmissibleSignature, MultiPoly, QuadForm, Signature, cayley_isometry, random_isometry
from szabo.pseudolin import Matrix, PreconditionError
from szabo.szaboclass import (
    HomPolyMap,
    NotDivisibleError,
    equivariance_check,
    factor_out_q,
    generic_fixture,
    nullcone_nilpotent_fixture,
    odd_power,
    p0_trivial_certificate,
    pclass_check,
    pointwise_nilpotent_on_nullcone,
    rank_one_fixture_11,
    trace_power_poly,
    vanishing_order_on_nullcone,
)

S11 = Signature(1, 1)
S12 = Signature(1, 2)


def test_fixture_matrix():
    l1, l2 = MultiPoly.variables(2)
    S = rank_one_fixture_11()
    expected = [[-l1 * l2 * l2, l1 * l1 * l2], [-l1 * l1 * l2, l1 ** 3]]
    assert [list(r) for r in S.entries] == expected
    assert S.evaluate((2, 1)) == Matrix([[-2, 4], [-4, 8]])


def test_membership_examples():
    rep = pclass_check(HomPolyMap.zero(S12, 1))
    assert rep.member and rep.n == 0
    rep = pclass_check(rank_one_fixture_11())
    assert rep.member and rep.n == 1
    cube = odd_power(rank_one_fixture_11(), 3)
    assert cube.degree == 9 and pclass_check(cube).member and pclass_check(cube).n == 4
    assert odd_power(rank_one_fixture_11(), 1) == rank_one_fixture_11()
    with pytest.raises(ValueError):
        odd_power(rank_one_fixture_11(), 2)


def test_membership_failures_are_named():
    l1, l2 = MultiPoly.variables(2)
    z = MultiPoly.zero(2)
    S = HomPolyMap(S11, 1, [[z, l1], [z, z]])
    props = {f["property"] for f in pclass_check(S).failures}
    assert {"self-adjoint", "annihilates argument"} <= props
    even = HomPolyMap(S11, 2, [[l1 * l1, z], [z, z]])
    assert "odd degree" in {f["property"] for f in pclass_check(even).failures}


def test_sum_of_szabo_maps_stays_in_class():
    s = Signature(2, 2)
    a = szabo_polymap(random_symmetric_tensor(s, 1))
    b = szabo_polymap(random_symmetric_tensor(s, 2))
    assert pclass_check(a + b).member
    assert pclass_check(a.scale(Fraction(-2, 3))).member


def test_equivariance():
    S = rank_one_fixture_11()
    assert equivariance_check(S, Matrix.identity(2))
    # the coefficient l1 is not boost invariant, and flips sign under the
    # time reflection, so neither transformation commutes with S
    boost = Matrix(cayley_isometry(S11, 0, 1, Fraction(1, 2)))
    v = (Fraction(3), Fraction(1, 2))
    assert S.evaluate(boost @ v) != boost @ S.evaluate(v) @ boost.inverse()
    assert not equivariance_check(S, boost)
    refl = Matrix.diag([-1, 1])
    assert S.evaluate(refl @ v) == -(refl @ S.evaluate(v) @ refl)
    assert not equivariance_check(S, refl)
    with pytest.raises(PreconditionError):
        equivariance_check(S, Matrix.diag([2, 1]))


def test_szabo_maps_of_pushed_tensors_are_equivariant():
    s = S12
    T = random_symmetric_tensor(s, 9)
    iso = Matrix(random_isometry(s, random.Random(4)))
    S = szabo_polymap(T)
    S2 = szabo_polymap(pushforward(T, iso))
    v = (Fraction(1), Fraction(-2), Fraction(1, 3))
    assert S2.evaluate(iso @ v) == iso @ S.evaluate(v) @ iso.inverse()


def test_traces_of_fixture():
    l1, _ = MultiPoly.variables(2)
    q = QuadForm(S11).poly
    S = rank_one_fixture_11()
    assert trace_power_poly(S, 1) == -l1 * q
    assert trace_power_poly(S, 2) == l1 * l1 * q * q
    assert trace_power_poly(HomPolyMap.zero(S12, 3), 1).is_zero()


def test_nullcone_nilpotency():
    with pytest.raises(InadmissibleSignature):
        pointwise_nilpotent_on_nullcone(rank_one_fixture_11())
    fx = nullcone_nilpotent_fixture(S12)
    assert pclass_check(fx).member
    assert pointwise_nilpotent_on_nullcone(fx).nilpotent
    assert pointwise_nilpotent_on_nullcone(HomPolyMap.zero(S12, 3)).nilpotent
    rep = pointwise_nilpotent_on_nullcone(generic_fixture(S12))
    assert not rep.nilpotent and rep.first_failure == 1


def test_vanishing_orders():
    assert vanishing_order_on_nullcone(HomPolyMap.zero(S12, 3)).order == 1
    assert vanishing_order_on_nullcone(nullcone_nilpotent_fixture(S12)).order == 2
    assert vanishing_order_on_nullcone(generic_fixture(S12)).order is None
    assert vanishing_order_on_nullcone(nullcone_nilpotent_fixture(Signature(2, 2))).order == 2


def test_factor_out_q():
    q = QuadForm(S12).poly
    T0 = generic_fixture(S12)
    assert factor_out_q(T0.scale(q)) == T0
    assert factor_out_q(HomPolyMap.zero(S12, 3)).is_zero()
    with pytest.raises(NotDivisibleError):
        factor_out_q(T0)


@pytest.mark.parametrize("sig", [(1, 1), (2, 2), (1, 3), (1, 2), (2, 3), (3, 3)])
def test_p0_trivial(sig):
    cert = p0_trivial_certificate(Signature(*sig))
    assert cert.dimension == 0 and cert.passes
    assert cert.rank == cert.unknowns


def test_json_round_trip():
    S = nullcone_nilpotent_fixture(S12)
    assert HomPolyMap.from_json(S.to_json()) == S
    with pytest.raises(ValueError):
        HomPolyMap(S11, 3, [[MultiPoly.variable(0, 2)] * 2] * 2)
