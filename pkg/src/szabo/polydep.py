"""Linear dependence of vector-valued polynomial maps over the nullcone.

A family ``x_1, ..., x_r : V -> W`` is the ``w x r`` matrix ``X`` whose
columns are the maps.  Its r x r minors generate the ideal
``I(x_1, ..., x_r)``; the dependence degree ``k`` is the least power of
``q`` that fails to divide some minor.  A certificate
``c_1 x_1 + ... + c_r x_r = q y`` with some ``c_i`` not divisible by ``q``
lets us swap ``x_i`` for ``y``, and that swap lowers ``k`` by exactly one.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .exactpoly import (
    MultiPoly,
    QuadForm,
    Signature,
    check_admissible,
    divide_by_q,
    null_samples,
    q_valuation,
    random_poly,
)
from .pseudolin import Matrix, PreconditionError, rref

__all__ = [
    "PolyMapFamily",
    "MinorIdeal",
    "minor_generators",
    "is_zero_ideal",
    "dependence_degree",
    "nullcone_dependent",
    "Certificate",
    "dependence_certificate",
    "descent_step",
    "DescentStep",
    "descent_chain",
    "evaluated_rank",
    "random_family",
]


@dataclass(frozen=True)
class PolyMapFamily:
    signature: Signature
    w: int
    maps: tuple[tuple[MultiPoly, ...], ...]

    def __init__(self, signature: Signature, w: int, maps: Sequence[Sequence[MultiPoly]]):
        maps = tuple(tuple(x) for x in maps)
        if len(maps) > w:
            raise ValueError(f"{len(maps)} maps into a space of dimension {w}")
        for x in maps:
            if len(x) != w:
                raise ValueError(f"map has {len(x)} components, expected {w}")
            if any(c.nvars != signature.m for c in x):
                raise ValueError("component variable count differs from the dimension")
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "maps", maps)

    @property
    def r(self) -> int:
        return len(self.maps)

    def entry(self, row: int, col: int) -> MultiPoly:
        return self.maps[col][row]

    def evaluate(self, v) -> Matrix:
        """The ``w x r`` matrix of values at ``v``."""
        return Matrix([[self.maps[c][row].evaluate(v) for c in range(self.r)] for row in range(self.w)])

    def replace(self, col: int, new: Sequence[MultiPoly]) -> "PolyMapFamily":
        maps = list(self.maps)
        maps[col] = tuple(new)
        return PolyMapFamily(self.signature, self.w, maps)

    def permute(self, order: Sequence[int]) -> "PolyMapFamily":
        return PolyMapFamily(self.signature, self.w, [self.maps[i] for i in order])

    def to_json(self) -> dict:
        return {
            "signature": self.signature.to_json(),
            "w": self.w,
            "maps": [[c.to_json() for c in x] for x in self.maps],
        }

    @classmethod
    def from_json(cls, data) -> "PolyMapFamily":
        sig = Signature.from_json(data["signature"])
        return cls(sig, int(data["w"]), [[MultiPoly.from_json(c) for c in x] for x in data["maps"]])


@dataclass(frozen=True)
class MinorIdeal:
    rows: tuple[tuple[int, ...], ...]
    generators: tuple[MultiPoly, ...]

    def nonzero(self) -> list[tuple[tuple[int, ...], MultiPoly]]:
        return [(r, g) for r, g in zip(self.rows, self.generators) if g]


def _det_columns(family: PolyMapFamily, cols: Sequence[int]):
    """Memoised cofactor expansion for square submatrices on ``cols``."""
    cache: dict[tuple[int, ...], MultiPoly] = {}
    m = family.signature.m
    k = len(cols)

    def det(rows: tuple[int, ...]) -> MultiPoly:
        depth = len(rows)
        if depth == 0:
            return MultiPoly.constant(1, m)
        if rows in cache:
            return cache[rows]
        col = cols[depth - 1]
        total = MultiPoly.zero(m)
        for t, row in enumerate(rows):
            a = family.entry(row, col)
            if not a:
                continue
            sub = det(rows[:t] + rows[t + 1:])
            if not sub:
                continue
            term = a * sub
            total = total + term if (t + depth - 1) % 2 == 0 else total - term
        cache[rows] = total
        return total

    assert k <= family.w
    return det


def minor_generators(family: PolyMapFamily) -> MinorIdeal:
    """All r x r minors, row subsets in lexicographic order."""
    r, w = family.r, family.w
    if r > w:
        raise ValueError(f"r = {r} exceeds w = {w}")
    det = _det_columns(family, list(range(r)))
    rows = tuple(itertools.combinations(range(w), r))
    return MinorIdeal(rows, tuple(det(rs) for rs in rows))


def is_zero_ideal(ideal: MinorIdeal) -> bool:
    return all(g.is_zero() for g in ideal.generators)


def dependence_degree(family: PolyMapFamily, ideal: MinorIdeal | None = None) -> int | None:
    """Least k with I not inside (q^(k+1)); None for the zero ideal."""
    check_admissible(family.signature)
    qf = QuadForm(family.signature)
    ideal = minor_generators(family) if ideal is None else ideal
    vals = [q_valuation(g, qf) for g in ideal.generators]
    k = min(vals, default=math.inf)
    return None if k == math.inf else int(k)


def nullcone_dependent(family: PolyMapFamily) -> bool:
    k = dependence_degree(family)
    return k is None or k >= 1


def evaluated_rank(family: PolyMapFamily, v) -> int:
    return family.evaluate(v).rank()


# ---------------------------------------------------------------------------
# certificates and descent


@dataclass
class Certificate:
    coefficients: tuple[MultiPoly, ...]
    y: tuple[MultiPoly, ...]
    pivot: int
    """Column whose coefficient is not divisible by q."""
    sample: tuple
    independent: tuple[int, ...]
    minor_rows: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "coefficients": [c.to_json() for c in self.coefficients],
            "y": [c.to_json() for c in self.y],
            "pivot": self.pivot,
            "sample": [str(x) for x in self.sample],
            "independent": list(self.independent),
            "minor_rows": list(self.minor_rows),
        }


def _independent_columns(mat: Matrix) -> list[int]:
    _, piv = rref(mat.rows)
    return piv


def dependence_certificate(
    family: PolyMapFamily,
    v0=None,
    *,
    samples: int = 50,
    seed: int = 0,
) -> Certificate:
    """Polynomial relation ``sum c_i x_i = q y`` with ``c_pivot`` not in (q).

    Follows the Cramer construction: at a null point of maximal rank pick
    independent columns ``I`` and a nonzero minor ``M`` on rows ``R``; the
    extra column ``x_t`` satisfies ``M x_t - sum_i p_i x_i = 0`` on the
    nullcone, hence is divisible by ``q``.
    """
    check_admissible(family.signature)
    qf = QuadForm(family.signature)
    ideal = minor_generators(family)
    if is_zero_ideal(ideal):
        raise PreconditionError("the minor ideal is zero")
    if dependence_degree(family, ideal) == 0:
        raise PreconditionError("family is independent somewhere on the nullcone (k = 0)")

    if v0 is None:
        best = None
        for v in null_samples(qf, samples, seed):
            rk = evaluated_rank(family, v)
            if best is None or rk > best[0]:
                best = (rk, v)
        v0 = best[1]
    if qf.value(v0) != 0:
        raise PreconditionError("v0 is not a null vector")
    val = family.evaluate(v0)
    indep = _independent_columns(val)
    s = len(indep)
    if s >= family.r:
        raise PreconditionError("columns are independent at v0")
    extra = next(c for c in range(family.r) if c not in indep)
    rows = next(
        (rs for rs in itertools.combinations(range(family.w), s)
         if Matrix([[val[i, c] for c in indep] for i in rs]).det() != 0),
        (),
    )
    m = family.signature.m

    def minor_with(replace_at: int | None) -> MultiPoly:
        sub = [list(family.maps[c]) for c in indep]
        if replace_at is not None:
            sub[replace_at] = list(family.maps[extra])
        sub_family = PolyMapFamily(family.signature, family.w, sub) if sub else None
        if not sub:
            return MultiPoly.constant(1, m)
        det = _det_columns(sub_family, list(range(s)))
        return det(tuple(rows))

    M = minor_with(None)
    coeffs = [MultiPoly.zero(m)] * family.r
    # sign chosen so that c_extra = M
    coeffs[extra] = M
    for pos, c in enumerate(indep):
        coeffs[c] = -minor_with(pos)
    combo = _combine(family, coeffs)
    y = []
    for comp in combo:
        d = divide_by_q(comp, qf)
        if d is None:
            raise PreconditionError("no valid sample: relation is not divisible by q")
        y.append(d)
    return Certificate(tuple(coeffs), tuple(y), extra, tuple(v0), tuple(indep), tuple(rows))


def _combine(family: PolyMapFamily, coeffs: Sequence[MultiPoly]) -> list[MultiPoly]:
    m = family.signature.m
    out = []
    for row in range(family.w):
        acc = MultiPoly.zero(m)
        for c, x in zip(coeffs, family.maps):
            if c and x[row]:
                acc = acc + c * x[row]
        out.append(acc)
    return out


@dataclass
class DescentStep:
    before: PolyMapFamily
    after: PolyMapFamily
    certificate: Certificate
    k_before: int
    k_after: int
    identity_holds: bool
    """``q * minors(after) == c_pivot * minors(before)`` generator by generator."""


def descent_step(family: PolyMapFamily, cert: Certificate) -> PolyMapFamily:
    """Replace the pivot column by ``y``; checks the certificate first."""
    qf = QuadForm(family.signature)
    q = qf.poly
    if _combine(family, cert.coefficients) != [q * c for c in cert.y]:
        raise PreconditionError("certificate identity sum c_i x_i = q y fails")
    if divide_by_q(cert.coefficients[cert.pivot], qf) is not None:
        raise PreconditionError("pivot coefficient is divisible by q")
    return family.replace(cert.pivot, cert.y)


def _verify_step(before: PolyMapFamily, after: PolyMapFamily, cert: Certificate) -> bool:
    q = QuadForm(before.signature).poly
    c = cert.coefficients[cert.pivot]
    old = minor_generators(before).generators
    new = minor_generators(after).generators
    return all(q * n == c * o for n, o in zip(new, old))


def descent_chain(family: PolyMapFamily, *, seed: int = 0, max_steps: int | None = None) -> list[DescentStep]:
    """Iterate certificates and swaps until the dependence degree is 0."""
    steps: list[DescentStep] = []
    k = dependence_degree(family)
    if k is None:
        raise PreconditionError("the minor ideal is zero")
    limit = k if max_steps is None else max_steps
    current = family
    while k > 0 and len(steps) < limit:
        cert = dependence_certificate(current, seed=seed)
        nxt = descent_step(current, cert)
        k_new = dependence_degree(nxt)
        steps.append(DescentStep(current, nxt, cert, k, k_new, _verify_step(current, nxt, cert)))
        current, k = nxt, k_new
    return steps


# ---------------------------------------------------------------------------
# fixtures


def random_family(sig: Signature, w: int, r: int, k: int, seed: int, *, degree: int = 1) -> PolyMapFamily:
    """Seeded family whose dependence degree is at least ``k``.

    The first ``r - 1`` maps are random; when ``k >= 1`` the last one is a
    polynomial combination of them plus ``q^k`` times a random map.
    """
    rng = random.Random(seed)
    m = sig.m
    q = QuadForm(sig).poly

    def rand_map(deg):
        return [random_poly(m, rng.randint(0, deg), rng, nterms=2, coef_range=3) for _ in range(w)]

    maps = [rand_map(degree) for _ in range(r - 1)]
    if k == 0:
        maps.append(rand_map(degree))
    else:
        combo = [MultiPoly.zero(m)] * w
        for x in maps:
            c = random_poly(m, rng.randint(0, 1), rng, nterms=2, coef_range=2)
            combo = [a + c * b for a, b in zip(combo, x)]
        tail = rand_map(max(degree - 1, 0))
        qk = q**k
        maps.append([a + qk * b for a, b in zip(combo, tail)])
    order = list(range(r))
    rng.shuffle(order)
    return PolyMapFamily(sig, w, [maps[i] for i in order])
