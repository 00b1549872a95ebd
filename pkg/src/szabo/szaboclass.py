"""Odd-degree operator-valued polynomial maps and the class P_n.

A member of ``P_n`` is an ``m x m`` matrix ``S(v)`` of homogeneous
polynomials of degree ``2n+1`` which is self-adjoint for the model metric
and kills its argument: ``S(v) v = 0``.  Membership is decided on
coefficients, so a positive answer is a proof and not a sampling result.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactpoly import (
    MultiPoly,
    QuadForm,
    Signature,
    check_admissible,
    divide_by_q,
    parse_rational,
)
from .pseudolin import InnerSpace, Matrix, PreconditionError, nullspace

__all__ = [
    "HomPolyMap",
    "PClassReport",
    "pclass_check",
    "odd_power",
    "equivariance_check",
    "trace_power_poly",
    "NilpotencyReport",
    "pointwise_nilpotent_on_nullcone",
    "VanishingOrder",
    "vanishing_order_on_nullcone",
    "NotDivisibleError",
    "factor_out_q",
    "P0Certificate",
    "p0_trivial_certificate",
    "rank_one_fixture_11",
    "rank_one_map",
    "nullcone_nilpotent_fixture",
    "generic_fixture",
]


class HomPolyMap:
    """Square matrix of homogeneous polynomials of a common degree."""

    __slots__ = ("signature", "degree", "entries")

    def __init__(self, signature: Signature, degree: int, entries: Sequence[Sequence[MultiPoly]]):
        m = signature.m
        rows = tuple(tuple(row) for row in entries)
        if len(rows) != m or any(len(r) != m for r in rows):
            raise ValueError(f"expected a {m}x{m} matrix of polynomials")
        for r in rows:
            for e in r:
                if e.nvars != m:
                    raise ValueError("entry variable count differs from the dimension")
                if not e.is_homogeneous(degree):
                    raise ValueError(f"entry {e} is not homogeneous of degree {degree}")
        self.signature = signature
        self.degree = degree
        self.entries = rows

    @classmethod
    def zero(cls, signature: Signature, degree: int = 1) -> "HomPolyMap":
        m = signature.m
        z = MultiPoly.zero(m)
        return cls(signature, degree, [[z] * m for _ in range(m)])

    @classmethod
    def identity(cls, signature: Signature) -> "HomPolyMap":
        m = signature.m
        return cls(signature, 0, [[MultiPoly.constant(int(i == j), m) for j in range(m)] for i in range(m)])

    @classmethod
    def from_matrix_function(cls, signature: Signature, degree: int, fn) -> "HomPolyMap":
        """Build from ``fn(lam) -> m x m`` nested list of MultiPoly."""
        lam = MultiPoly.variables(signature.m)
        return cls(signature, degree, fn(lam))

    @property
    def m(self) -> int:
        return self.signature.m

    def __getitem__(self, ij) -> MultiPoly:
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def __eq__(self, other):
        return (
            isinstance(other, HomPolyMap)
            and self.signature == other.signature
            and self.entries == other.entries
            and (self.degree == other.degree or self.is_zero())
        )

    def __hash__(self):
        return hash((self.signature, self.entries))

    def __add__(self, other: "HomPolyMap") -> "HomPolyMap":
        if self.signature != other.signature:
            raise ValueError("signature mismatch")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return HomPolyMap(
            self.signature,
            self.degree,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
        )

    def __neg__(self) -> "HomPolyMap":
        return HomPolyMap(self.signature, self.degree, [[-a for a in r] for r in self.entries])

    def __sub__(self, other: "HomPolyMap") -> "HomPolyMap":
        return self + (-other)

    def __matmul__(self, other: "HomPolyMap") -> "HomPolyMap":
        if self.signature != other.signature:
            raise ValueError("signature mismatch")
        m = self.m
        zero = MultiPoly.zero(m)
        out = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = zero
                for k in range(m):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return HomPolyMap(self.signature, self.degree + other.degree, out)

    def scale(self, factor) -> "HomPolyMap":
        """Multiply every entry by a scalar or a homogeneous polynomial."""
        if isinstance(factor, MultiPoly):
            if factor.is_zero():
                return HomPolyMap.zero(self.signature, self.degree)
            deg = factor.degree()
            return HomPolyMap(self.signature, self.degree + deg, [[a * factor for a in r] for r in self.entries])
        c = parse_rational(factor)
        return HomPolyMap(self.signature, self.degree, [[a.scale(c) for a in r] for r in self.entries])

    def apply(self, vec: Sequence[MultiPoly]) -> list[MultiPoly]:
        """Matrix times a vector of polynomials."""
        m = self.m
        out = []
        for i in range(m):
            acc = MultiPoly.zero(m)
            for j in range(m):
                if self.entries[i][j] and vec[j]:
                    acc = acc + self.entries[i][j] * vec[j]
            out.append(acc)
        return out

    def evaluate(self, v: Sequence) -> Matrix:
        return Matrix([[e.evaluate(v) for e in r] for r in self.entries])

    __call__ = evaluate

    def trace(self) -> MultiPoly:
        acc = MultiPoly.zero(self.m)
        for i in range(self.m):
            acc = acc + self.entries[i][i]
        return acc

    def transpose(self) -> "HomPolyMap":
        return HomPolyMap(self.signature, self.degree, list(zip(*self.entries)))

    def linear_substitute(self, matrix: Sequence[Sequence]) -> "HomPolyMap":
        """Entries composed with ``v -> M v``."""
        return HomPolyMap(self.signature, self.degree, [[e.linear_substitute(matrix) for e in r] for r in self.entries])

    def to_json(self) -> dict:
        return {
            "signature": self.signature.to_json(),
            "degree": self.degree,
            "entries": [[e.to_json() for e in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, data) -> "HomPolyMap":
        sig = Signature.from_json(data["signature"])
        entries = [[MultiPoly.from_json(e) for e in r] for r in data["entries"]]
        degree = data.get("degree")
        if degree is None:
            degrees = {e.degree() for r in entries for e in r if e}
            if len(degrees) > 1:
                raise ValueError("entries have different degrees")
            degree = degrees.pop() if degrees else 1
        return cls(sig, int(degree), entries)

    def __repr__(self):
        return f"HomPolyMap({self.signature.p},{self.signature.q}; degree={self.degree})"


# ---------------------------------------------------------------------------
# membership


@dataclass
class PClassReport:
    member: bool
    degree: int
    n: int | None
    failures: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"member": self.member, "degree": self.degree, "n": self.n, "failures": self.failures}


def pclass_check(S: HomPolyMap) -> PClassReport:
    failures = []
    d = S.degree
    if d % 2 == 0:
        failures.append({"property": "odd degree", "detail": f"degree {d} is even"})
    g = S.signature.metric()
    m = S.m
    for i in range(m):
        for j in range(i + 1, m):
            lhs = S[i, j].scale(g[i])
            rhs = S[j, i].scale(g[j])
            if lhs != rhs:
                failures.append({"property": "self-adjoint", "entry": [i, j], "residual": (lhs - rhs).to_json()})
    lam = MultiPoly.variables(m)
    for i, comp in enumerate(S.apply(lam)):
        if comp:
            failures.append({"property": "annihilates argument", "row": i, "residual": comp.to_json()})
    member = not failures
    return PClassReport(member, d, (d - 1) // 2 if d % 2 else None, failures)


def odd_power(S: HomPolyMap, k: int) -> HomPolyMap:
    if k < 1 or k % 2 == 0:
        raise ValueError(f"power must be an odd positive integer, got {k}")
    out = S
    for _ in range(k - 1):
        out = out @ S
    return out


def _rand_vector(m: int, rng: random.Random) -> list[Fraction]:
    while True:
        v = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(m)]
        if any(v):
            return v


def equivariance_check(S: HomPolyMap, T: Matrix, *, samples: int = 8, seed: int = 0) -> bool:
    """Check ``S(Tv) = T S(v) T^-1`` at seeded rational points."""
    sp = InnerSpace(S.signature)
    if T.shape != (S.m, S.m) or not sp.is_isometry(T):
        raise PreconditionError("T is not an isometry of the model metric")
    tinv = T.inverse()
    rng = random.Random(seed)
    for _ in range(samples):
        v = _rand_vector(S.m, rng)
        if S.evaluate(T @ v) != T @ S.evaluate(v) @ tinv:
            return False
    return True


def trace_power_poly(S: HomPolyMap, n: int) -> MultiPoly:
    if n < 1:
        raise ValueError("n must be positive")
    power = S
    for _ in range(n - 1):
        power = power @ S
    return power.trace()


# ---------------------------------------------------------------------------
# behaviour over the nullcone


@dataclass
class NilpotencyReport:
    nilpotent: bool
    first_failure: int | None
    traces: list[MultiPoly]


def pointwise_nilpotent_on_nullcone(S: HomPolyMap) -> NilpotencyReport:
    """``S(v)`` nilpotent for every null ``v`` iff Tr S^k vanishes on N, k = 1..m."""
    check_admissible(S.signature)
    qf = QuadForm(S.signature)
    traces = []
    power = S
    for k in range(1, S.m + 1):
        if k > 1:
            power = power @ S
        t = power.trace()
        traces.append(t)
        if divide_by_q(t, qf) is None:
            return NilpotencyReport(False, k, traces)
    return NilpotencyReport(True, None, traces)


@dataclass
class VanishingOrder:
    order: int | None
    odd_below: int | None
    """Greatest odd integer below ``order`` when ``order >= 4``."""


def _all_divisible(S: HomPolyMap, qf: QuadForm) -> bool:
    return all(divide_by_q(e, qf) is not None for r in S.entries for e in r)


def vanishing_order_on_nullcone(S: HomPolyMap) -> VanishingOrder:
    check_admissible(S.signature)
    qf = QuadForm(S.signature)
    power = S
    for n in range(1, S.m + 1):
        if n > 1:
            power = power @ S
        if _all_divisible(power, qf):
            odd = None
            if n >= 4:
                odd = n - 1 if (n - 1) % 2 else n - 2
            return VanishingOrder(n, odd)
    return VanishingOrder(None, None)


class NotDivisibleError(ValueError):
    def __init__(self, entry: tuple[int, int], poly: MultiPoly):
        super().__init__(f"entry {entry} is not divisible by q: {poly}")
        self.entry = entry
        self.poly = poly


def factor_out_q(S: HomPolyMap) -> HomPolyMap:
    """The map ``T`` with ``S = q T``."""
    qf = QuadForm(S.signature)
    if S.is_zero():
        return HomPolyMap.zero(S.signature, max(S.degree - 2, 1))
    rows = []
    for i, r in enumerate(S.entries):
        row = []
        for j, e in enumerate(r):
            y = divide_by_q(e, qf)
            if y is None:
                raise NotDivisibleError((i, j), e)
            row.append(y)
        rows.append(row)
    return HomPolyMap(S.signature, S.degree - 2, rows)


@dataclass
class P0Certificate:
    signature: Signature
    unknowns: int
    equations: int
    rank: int
    dimension: int

    @property
    def passes(self) -> bool:
        return self.dimension == 0


def p0_trivial_certificate(sig: Signature) -> P0Certificate:
    """Dimension of the space of linear members of P.

    Unknowns are ``c[i][j][k]`` with ``S(v)[i][j] = sum_k c[i][j][k] v_k``.
    Self-adjointness gives ``g_i c[i][j][k] = g_j c[j][i][k]``; ``S(v) v = 0``
    gives ``c[i][j][k] + c[i][k][j] = 0``.
    """
    m = sig.m
    if m < 2:
        raise ValueError("need m >= 2")
    g = sig.metric()

    def idx(i, j, k):
        return (i * m + j) * m + k

    rows = []
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(m):
                row = [0] * m**3
                row[idx(i, j, k)] += g[i]
                row[idx(j, i, k)] -= g[j]
                rows.append(row)
    for i in range(m):
        for j in range(m):
            for k in range(j, m):
                row = [0] * m**3
                row[idx(i, j, k)] += 1
                row[idx(i, k, j)] += 1
                rows.append(row)
    dim = len(nullspace(rows, m**3))
    return P0Certificate(sig, m**3, len(rows), m**3 - dim, dim)


# ---------------------------------------------------------------------------
# fixtures


def rank_one_map(sig: Signature, coeff: MultiPoly, u: Sequence[MultiPoly]) -> HomPolyMap:
    """``S(v) x = c(v) (x, u(v)) u(v)``; a member of P when ``(u(v), v) = 0``."""
    g = sig.metric()
    m = sig.m
    rows = [[coeff * u[i] * u[j].scale(g[j]) for j in range(m)] for i in range(m)]
    degree = coeff.degree() + 2 * max(x.degree() for x in u)
    return HomPolyMap(sig, degree, rows)


def rank_one_fixture_11() -> HomPolyMap:
    """Signature (1,1): ``S(v) x = l1 (x, u) u`` with ``u = (l2, l1)``."""
    sig = Signature(1, 1)
    l1, l2 = MultiPoly.variables(2)
    return rank_one_map(sig, l1, [l2, l1])


def nullcone_nilpotent_fixture(sig: Signature, a: Sequence | None = None, c: Sequence | None = None) -> HomPolyMap:
    """Degree-5 member of P with ``S`` nonzero on N but ``S^2`` vanishing there.

    ``u(v) = q(v) a - (a, v) v`` is orthogonal to ``v`` and equals a multiple
    of ``v`` on the nullcone, so the image direction is null there.
    """
    m = sig.m
    a = [Fraction(1)] + [Fraction(0)] * (m - 1) if a is None else [parse_rational(x) for x in a]
    c = [Fraction(0)] * (m - 1) + [Fraction(1)] if c is None else [parse_rational(x) for x in c]
    g = sig.metric()
    lam = MultiPoly.variables(m)
    q = QuadForm(sig).poly
    a_dot_v = MultiPoly.linear_form([g[i] * a[i] for i in range(m)])
    u = [q.scale(a[i]) - a_dot_v * lam[i] for i in range(m)]
    return rank_one_map(sig, MultiPoly.linear_form(c), u)


def generic_fixture(sig: Signature, i: int | None = None, j: int | None = None) -> HomPolyMap:
    """Cubic member of P whose trace does not vanish on the nullcone.

    ``u = K v`` with ``K`` the rotation generator in the ``(i, j)`` plane of two
    spacelike axes, ``c = l1``.
    """
    m = sig.m
    if sig.q < 2:
        raise ValueError("need two spacelike axes")
    i = sig.p if i is None else i
    j = sig.p + 1 if j is None else j
    lam = MultiPoly.variables(m)
    u = [MultiPoly.zero(m)] * m
    u[i] = -lam[j]
    u[j] = lam[i]
    return rank_one_map(sig, lam[0], u)
