"""Spectral profiles, the annihilating operator A(v), and evaluation fibres.

If ``S(v0)`` at a unit timelike ``v0`` has minimal polynomial
``X (X^2 - l_1^2) ... (X^2 - l_l^2)`` and this is the same at every unit
timelike vector, homogeneity turns it into the polynomial identity
``S A = 0`` with

    A(v) = sum_k sigma_k (v,v)^((2n+1)k) S(v)^(2l-2k)

where ``sigma_k`` is the k-th elementary symmetric function of the
``l_i^2``.  Everything here is read off minimal polynomials, so the
``l_i`` themselves never have to be rational.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactpoly import MultiPoly, QuadForm, Signature, check_admissible, null_samples
from .pseudolin import (
    InnerSpace,
    Matrix,
    PreconditionError,
    is_jordan_simple,
    minimal_polynomial,
    span_basis,
    same_span,
    upoly_divmod,
    upoly_eval_matrix,
    upoly_str,
)
from .polydep import PolyMapFamily, dependence_degree, descent_chain, minor_generators, is_zero_ideal
from .szaboclass import HomPolyMap, pclass_check

__all__ = [
    "SpectralProfile",
    "diagnose_profile",
    "spec_profile",
    "a_operator",
    "EqnyReport",
    "eqny_identity_check",
    "KerImReport",
    "jordan_ker_im_at",
    "DeltaModule",
    "delta_module",
    "delta_membership",
    "delta_saturation_check",
    "DeltaAction",
    "delta_isometry_action",
    "column_generators",
    "evaluation_fiber",
    "GluedRankReport",
    "glued_rank_analysis",
    "unit_sphere_points",
    "constant_profile_fixture",
]

Vector = Sequence[MultiPoly]


@dataclass(frozen=True)
class SpectralProfile:
    l: int
    sigma: tuple[Fraction, ...]
    mu_minus: tuple[Fraction, ...]
    """Coefficients of ``X prod (X^2 - l_i^2)``, lowest degree first."""
    source: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "sigma": [str(s) for s in self.sigma],
            "mu_minus": upoly_str(self.mu_minus),
            "source": [str(x) for x in self.source],
        }


def diagnose_profile(mu: Sequence[Fraction]) -> str | None:
    """Why ``mu`` is not of the form ``X prod (X^2 - c_i)``; None if it is."""
    from .pseudolin import upoly_derivative, upoly_gcd

    if len(upoly_gcd(mu, upoly_derivative(mu))) != 1:
        return "minimal polynomial not square-free (operator is not Jordan simple)"
    if mu[0] != 0:
        return "operator is invertible (no zero eigenvalue)"
    if any(c for k, c in enumerate(mu) if k % 2 == 0):
        return "spectrum not symmetric (even-degree terms in the minimal polynomial)"
    return None


def spec_profile(S: HomPolyMap, v0: Sequence | None = None) -> SpectralProfile | None:
    """Profile read off the minimal polynomial of ``S(v0)``, or None.

    ``v0`` defaults to ``e_1``.  ``S = 0`` gives the ``l = 0`` marker.
    """
    sp = InnerSpace(S.signature)
    if v0 is None:
        v0 = [1] + [0] * (S.m - 1)
    v0 = tuple(Fraction(x) for x in v0)
    if sp.ip(v0, v0) != -1:
        raise PreconditionError("v0 must be a unit timelike vector")
    mu = minimal_polynomial(S.evaluate(v0))
    if diagnose_profile(mu) is not None:
        return None
    l = (len(mu) - 2) // 2
    sigma = tuple((-1) ** k * mu[2 * (l - k) + 1] for k in range(1, l + 1))
    return SpectralProfile(l, sigma, tuple(mu), v0)


def _identity_map(sig: Signature) -> HomPolyMap:
    return HomPolyMap.identity(sig)


def _check_odd(S: HomPolyMap):
    if S.degree % 2 == 0:
        raise PreconditionError(f"degree {S.degree} is even")


def a_operator(S: HomPolyMap, profile: SpectralProfile, *, require_member: bool = True) -> HomPolyMap:
    """``A = sum_{k=0..l} sigma_k q^((2n+1)k) S^(2l-2k)`` with ``sigma_0 = 1``.

    ``require_member=False`` skips the class-P check; only oddness is
    required for the identity itself.
    """
    if profile.l < 1:
        raise PreconditionError("profile has l = 0")
    _check_odd(S)
    if require_member and not pclass_check(S).member:
        raise PreconditionError("S is not a member of P")
    return _a_sum(S, profile)


def _a_sum(S: HomPolyMap, profile: SpectralProfile) -> HomPolyMap:
    d = S.degree
    l = profile.l
    q = QuadForm(S.signature).poly
    target = 2 * l * d
    s2 = S @ S
    powers = [_identity_map(S.signature)]
    for _ in range(l):
        powers.append(powers[-1] @ s2)
    total = None
    sigma = (Fraction(1),) + profile.sigma
    for k in range(l + 1):
        term = powers[l - k].scale(q ** (d * k)).scale(sigma[k]) if k else powers[l]
        if term.degree != target and not term.is_zero():
            raise AssertionError(f"summand {k} has degree {term.degree}, expected {target}")
        if term.is_zero():
            continue
        total = term if total is None else total + term
    if total is None:
        return HomPolyMap.zero(S.signature, target)
    return total


@dataclass
class EqnyReport:
    holds: bool
    diagnosis: str | None
    residual_entry: tuple[int, int] | None = None

    def __bool__(self):
        return self.holds


def eqny_identity_check(S: HomPolyMap, profile: SpectralProfile | None) -> EqnyReport:
    """Decide ``S A = 0`` on coefficients.

    ``profile=None`` (no admissible profile at the source point) reports a
    failure carrying the structural diagnosis of ``spec_profile``.
    """
    if profile is None:
        mu = minimal_polynomial(S.evaluate([1] + [0] * (S.m - 1)))
        return EqnyReport(False, diagnose_profile(mu) or "no profile")
    _check_odd(S)
    if profile.l == 0:
        if S.is_zero():
            return EqnyReport(True, None)
        entry = next((i, j) for i in range(S.m) for j in range(S.m) if S[i, j])
        return EqnyReport(False, "profile at the source point is trivial but S is not identically zero", entry)
    prod = S @ _a_sum(S, profile)
    for i in range(S.m):
        for j in range(S.m):
            if prod[i, j]:
                return EqnyReport(False, "minimal polynomial is not constant over the timelike pseudo-sphere", (i, j))
    return EqnyReport(True, None)


@dataclass
class KerImReport:
    holds: bool
    mu: tuple[Fraction, ...]
    m_poly: tuple[Fraction, ...]
    kernel: list
    image: list


def jordan_ker_im_at(Sv: Matrix) -> KerImReport:
    """``Ker m(Sv) = Im Sv`` where ``mu = X m`` (or ``m = mu`` if invertible)."""
    mu = minimal_polynomial(Sv)
    if not is_jordan_simple(Sv):
        raise PreconditionError("operator is not Jordan simple")
    if mu[0] == 0:
        m_poly, rem = upoly_divmod(mu, (Fraction(0), Fraction(1)))
        assert not rem
    else:
        m_poly = mu
    kern = upoly_eval_matrix(m_poly, Sv).kernel_basis()
    img = Sv.image_basis()
    return KerImReport(same_span(kern, img), mu, m_poly, span_basis(kern), img)


# ---------------------------------------------------------------------------
# the module Delta


@dataclass
class DeltaModule:
    S: HomPolyMap
    profile: SpectralProfile
    A: HomPolyMap


def delta_module(S: HomPolyMap, profile: SpectralProfile, *, require_member: bool = True) -> DeltaModule:
    return DeltaModule(S, profile, a_operator(S, profile, require_member=require_member))


def delta_membership(x: Vector, D: DeltaModule) -> bool:
    if len(x) != D.A.m or any(c.nvars != D.A.m for c in x):
        raise ValueError("map does not match the module's dimension")
    return all(c.is_zero() for c in D.A.apply(list(x)))


def delta_saturation_check(x: Vector, P: MultiPoly, D: DeltaModule) -> bool:
    """True when ``P x in Delta`` implies ``x in Delta`` for this ``x``."""
    if P.is_zero():
        raise ValueError("P must be nonzero")
    px_in = delta_membership([P * c for c in x], D)
    return (not px_in) or delta_membership(x, D)


@dataclass
class DeltaAction:
    image: list[MultiPoly]
    equivariant: bool
    """``A(Tv) = T A(v) T^-1`` as a polynomial identity."""
    preserved: bool | None
    """Membership of ``Tx`` when ``x`` is a member, else None."""


def _const_map(sig: Signature, mat: Matrix) -> HomPolyMap:
    return HomPolyMap(sig, 0, [[MultiPoly.constant(x, sig.m) for x in row] for row in mat.rows])


def delta_isometry_action(x: Vector, T: Matrix, D: DeltaModule) -> DeltaAction:
    """``(Tx)(v) = T x(T^-1 v)``."""
    sig = D.A.signature
    if not InnerSpace(sig).is_isometry(T):
        raise PreconditionError("T is not an isometry")
    tinv = T.inverse()
    pulled = [c.linear_substitute(tinv.rows) for c in x]
    image = _const_map(sig, T).apply(pulled)
    lhs = D.A.linear_substitute(T.rows)
    rhs = _const_map(sig, T) @ D.A @ _const_map(sig, tinv)
    equivariant = lhs.entries == rhs.entries
    preserved = delta_membership(image, D) if delta_membership(x, D) else None
    return DeltaAction(image, equivariant, preserved)


def column_generators(S: HomPolyMap) -> list[list[MultiPoly]]:
    """The maps ``w -> S(w) e_j``; they lie in Delta whenever ``S A = 0``."""
    return [[S[i, j] for i in range(S.m)] for j in range(S.m)]


def evaluation_fiber(generators: Sequence[Vector], v: Sequence) -> list[tuple[Fraction, ...]]:
    if not any(Fraction(x) for x in v):
        raise ValueError("the fibre at v = 0 is not defined")
    values = [tuple(c.evaluate(v) for c in x) for x in generators]
    return span_basis(values)


# ---------------------------------------------------------------------------
# rank analysis


def unit_sphere_points(k: int, count: int, seed: int) -> list[tuple[Fraction, ...]]:
    """Rational points on the Euclidean unit sphere in R^k (inverse stereographic)."""
    rng = random.Random(seed)
    out = []
    if k == 1:
        return [(Fraction(rng.choice([1, -1])),) for _ in range(count)]
    for _ in range(count):
        t = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(k - 1)]
        n2 = sum(x * x for x in t)
        pt = [2 * x / (n2 + 1) for x in t] + [(n2 - 1) / (n2 + 1)]
        out.append(tuple(pt))
    return out


@dataclass
class GluedRankReport:
    r_plus: int
    r_minus: int
    r_zero: int
    glued_rank: int
    constant_plus: bool
    constant_minus: bool
    r_zero_sampled: int
    flags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "r_plus": self.r_plus,
            "r_minus": self.r_minus,
            "r_zero": self.r_zero,
            "glued_rank": self.glued_rank,
            "constant_plus": self.constant_plus,
            "constant_minus": self.constant_minus,
            "r_zero_sampled": self.r_zero_sampled,
            "flags": self.flags,
            "witnesses": self.witnesses,
        }


def _subset_rank(S: HomPolyMap, cols: list[list[MultiPoly]], want_k0: bool):
    """Largest r' with an r'-subset of columns whose minor ideal is nonzero
    (and, if ``want_k0``, not contained in (q)); returns (r', subset)."""
    sig = S.signature
    m = S.m
    for size in range(m, 0, -1):
        for subset in itertools.combinations(range(m), size):
            fam = PolyMapFamily(sig, m, [cols[j] for j in subset])
            ideal = minor_generators(fam)
            if is_zero_ideal(ideal):
                continue
            if not want_k0 or dependence_degree(fam, ideal) == 0:
                return size, subset
    return 0, ()


def glued_rank_analysis(S: HomPolyMap, *, samples: int = 12, seed: int = 0) -> GluedRankReport:
    """Ranks of ``S`` on unit spacelike, unit timelike and null vectors.

    ``r_zero`` is the generic rank on the nullcone, decided by dependence
    degrees of column subfamilies; ``glued_rank`` is the rank reached on the
    nullcone after descending a maximal nonzero-ideal subfamily to ``k = 0``.
    The lemma-level relations ``r- = r+`` and ``r0 < r+`` are reported, not
    assumed.
    """
    sig = S.signature
    check_admissible(sig)
    p, q = sig.p, sig.q
    plus = [tuple([Fraction(0)] * p) + u for u in unit_sphere_points(q, samples, seed)]
    minus = [u + tuple([Fraction(0)] * q) for u in unit_sphere_points(p, samples, seed + 1)]
    ranks_plus = [S.evaluate(v).rank() for v in plus]
    ranks_minus = [S.evaluate(v).rank() for v in minus]

    cols = column_generators(S)
    r0, k0_subset = _subset_rank(S, cols, True)
    generic, gen_subset = _subset_rank(S, cols, False)
    glued = 0
    chain_info = []
    if generic:
        fam = PolyMapFamily(sig, S.m, [cols[j] for j in gen_subset])
        chain = descent_chain(fam, seed=seed)
        final = chain[-1].after if chain else fam
        glued = generic if dependence_degree(final) == 0 else 0
        chain_info = [{"k_before": st.k_before, "k_after": st.k_after, "identity": st.identity_holds} for st in chain]

    qf = QuadForm(sig)
    sampled = max((S.evaluate(v).rank() for v in null_samples(qf, samples, seed)), default=0)
    r_plus, r_minus = max(ranks_plus), max(ranks_minus)
    return GluedRankReport(
        r_plus=r_plus,
        r_minus=r_minus,
        r_zero=r0,
        glued_rank=glued,
        constant_plus=len(set(ranks_plus)) == 1,
        constant_minus=len(set(ranks_minus)) == 1,
        r_zero_sampled=sampled,
        flags={
            "r_minus_equals_r_plus": r_minus == r_plus,
            "r_zero_below_r_plus": r0 < r_plus,
            "r_zero_matches_samples": r0 == sampled,
        },
        witnesses={
            "k0_columns": list(k0_subset),
            "generic_columns": list(gen_subset),
            "descent": chain_info,
        },
    )


# ---------------------------------------------------------------------------
# fixtures


def constant_profile_fixture(n: int = 1) -> HomPolyMap:
    """Odd map in signature (2,1) with ``S^3 + q^(2n+1) S = 0``.

    ``S = q^n L`` with ``L(v) = v1 Z + v2 X + v3 E`` on span(e1, e2), where
    ``Z = diag(1,-1)``, ``X = [[0,1],[1,0]]``, ``E = [[0,1],[-1,0]]``
    anticommute with ``Z^2 = X^2 = 1``, ``E^2 = -1``; hence ``L^2 = -q P``.
    The minimal polynomial at every unit timelike vector is ``X^3 - X``.
    This map is not self-adjoint and does not kill its argument, so it is
    not a member of P; no member with a nontrivial constant profile is
    known to us in small signatures.
    """
    sig = Signature(2, 1)
    l1, l2, l3 = MultiPoly.variables(3)
    z = MultiPoly.zero(3)
    L = HomPolyMap(sig, 1, [[l1, l2 + l3, z], [l2 - l3, -l1, z], [z, z, z]])
    return L.scale(QuadForm(sig).poly ** n) if n else L
