"""Exact multivariate polynomials over the rationals.

Polynomials are sparse maps from exponent tuples to nonzero ``Fraction``
coefficients.  The quadratic form of signature ``(p, q)``

    q = -l_1^2 - ... - l_p^2 + l_{p+1}^2 + ... + l_{p+q}^2

gets special treatment: exact division by it, the q-adic valuation, and
rational sampling of its nullcone.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "InadmissibleSignature",
    "Signature",
    "MultiPoly",
    "QuadForm",
    "parse_rational",
    "format_rational",
    "homogeneous_components",
    "divide_by_q",
    "q_valuation",
    "vanishes_on_nullcone",
    "check_admissible",
    "null_samples",
    "cayley_isometry",
    "random_isometry",
    "random_poly",
]


class InadmissibleSignature(ValueError):
    """The signature does not support the nullcone <-> q-divisibility equivalence."""


def parse_rational(value) -> Fraction:
    """Parse ``"num/den"`` strings (or ints) into a reduced ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read a rational from {value!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"negative signature entry: ({self.p}, {self.q})")
        if self.p + self.q < 1:
            raise ValueError("signature must have dimension at least 1")

    @property
    def m(self) -> int:
        return self.p + self.q

    def metric(self) -> tuple[int, ...]:
        """Diagonal of the model metric: -1 on timelike slots, +1 on spacelike."""
        return (-1,) * self.p + (1,) * self.q

    @classmethod
    def parse(cls, text: str) -> "Signature":
        p, q = (int(t) for t in text.split(","))
        return cls(p, q)

    def to_json(self) -> list[int]:
        return [self.p, self.q]

    @classmethod
    def from_json(cls, data) -> "Signature":
        p, q = data
        return cls(int(p), int(q))


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables with ``Fraction`` coefficients.

    Instances are immutable.  Terms are kept in graded-lex order, highest
    degree first, which is also the serialization order.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        if nvars < 0:
            raise ValueError("negative variable count")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = parse_rational(coef)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.nvars = nvars
        self._terms = dict(sorted(clean.items(), key=lambda t: _grlex_key(t[0]), reverse=True))
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        # terms already clean (nonzero Fractions, valid exponents)
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = dict(sorted(terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True))
        obj._hash = None
        return obj

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, value, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "MultiPoly":
        """The coordinate function ``l_{index+1}`` (0-based ``index``)."""
        if not 0 <= index < nvars:
            raise IndexError(index)
        exp = [0] * nvars
        exp[index] = 1
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def variables(cls, nvars: int) -> list["MultiPoly"]:
        return [cls.variable(i, nvars) for i in range(nvars)]

    @classmethod
    def linear_form(cls, coeffs: Sequence, nvars: int | None = None) -> "MultiPoly":
        nvars = len(coeffs) if nvars is None else nvars
        terms = {}
        for i, c in enumerate(coeffs):
            exp = [0] * nvars
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(nvars, terms)

    # -- inspection ------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return MultiPoly.zero(self.nvars)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, factor) -> "MultiPoly":
        factor = parse_rational(factor)
        if not factor:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: c * factor for e, c in self._terms.items()})

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(self._terms.items())))
        return self._hash

    # -- evaluation and substitution -------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [parse_rational(x) for x in point]
        total = Fraction(0)
        for exp, c in self._terms.items():
            term = c
            for x, e in zip(pt, exp):
                if e:
                    term *= x**e
            total += term
        return total

    __call__ = evaluate

    def compose(self, substitutions: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``substitutions[i]`` for variable ``i``."""
        if len(substitutions) != self.nvars:
            raise ValueError("need one substitution per variable")
        if not substitutions:
            return self
        target = substitutions[0].nvars
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.constant(1, target)} for _ in substitutions]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * substitutions[i]
            return cache[e]

        out = MultiPoly.zero(target)
        for exp, c in self._terms.items():
            term = MultiPoly.constant(c, target)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def linear_substitute(self, matrix: Sequence[Sequence]) -> "MultiPoly":
        """Return ``v -> p(M v)`` for a square rational matrix ``M``."""
        subs = [MultiPoly.linear_form(row, self.nvars) for row in matrix]
        return self.compose(subs)

    def derivative(self, index: int) -> "MultiPoly":
        out = {}
        for exp, c in self._terms.items():
            e = exp[index]
            if e:
                new = list(exp)
                new[index] -= 1
                out[tuple(new)] = c * e
        return MultiPoly._raw(self.nvars, out)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "terms": [{"exp": list(e), "coef": format_rational(c)} for e, c in self._terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        nvars = int(data["vars"])
        terms: dict[tuple[int, ...], Fraction] = {}
        for t in data.get("terms", []):
            exp = tuple(int(e) for e in t["exp"])
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp}")
            terms[exp] = parse_rational(t["coef"])
        return cls(nvars, terms)

    # -- display ---------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self._terms.items():
            mono = "*".join(
                f"l{i + 1}" if e == 1 else f"l{i + 1}^{e}" for i, e in enumerate(exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def homogeneous_components(p: MultiPoly) -> list[tuple[int, MultiPoly]]:
    """Split ``p`` into ``(degree, component)`` pairs, ascending degree."""
    buckets: dict[int, dict] = {}
    for exp, c in p.items():
        buckets.setdefault(sum(exp), {})[exp] = c
    return [(d, MultiPoly._raw(p.nvars, buckets[d])) for d in sorted(buckets)]


@dataclass(frozen=True)
class QuadForm:
    """The signature quadratic form as a polynomial."""

    signature: Signature

    @property
    def nvars(self) -> int:
        return self.signature.m

    @property
    def poly(self) -> MultiPoly:
        m = self.signature.m
        terms = {}
        for i, s in enumerate(self.signature.metric()):
            exp = [0] * m
            exp[i] = 2
            terms[tuple(exp)] = s
        return MultiPoly(m, terms)

    def value(self, v: Sequence) -> Fraction:
        if len(v) != self.nvars:
            raise ValueError("dimension mismatch")
        return sum((s * parse_rational(x) ** 2 for s, x in zip(self.signature.metric(), v)), Fraction(0))

    def pivot(self) -> tuple[int, int]:
        """Variable index and sign of its square used as the division pivot."""
        if self.signature.q >= 1:
            return self.signature.m - 1, 1
        return 0, -1


def divide_by_q(p: MultiPoly, qf: QuadForm) -> MultiPoly | None:
    """Exact quotient ``p / q``, or ``None`` when ``q`` does not divide ``p``.

    ``q = s*x^2 + r`` with ``x`` the pivot variable and ``s = +-1``; ``p`` is
    divided as a polynomial in ``x`` whose coefficients live in the other
    variables.
    """
    if p.nvars != qf.nvars:
        raise ValueError(f"variable count mismatch: {p.nvars} vs {qf.nvars}")
    if p.is_zero():
        return MultiPoly.zero(p.nvars)
    k, s = qf.pivot()
    metric = qf.signature.metric()
    # rest r = q - s*x^2, as (exponent, coef) pairs
    rest = []
    for i, sign in enumerate(metric):
        if i != k:
            exp = [0] * p.nvars
            exp[i] = 2
            rest.append((tuple(exp), sign))

    remainder = dict(p.items())
    quotient: dict[tuple[int, ...], Fraction] = {}
    top = max(e[k] for e in remainder)
    for deg in range(top, 1, -1):
        layer = [(e, c) for e, c in remainder.items() if e[k] == deg]
        for exp, c in layer:
            qexp = list(exp)
            qexp[k] -= 2
            qexp = tuple(qexp)
            qc = c * s  # c / s with s = +-1
            quotient[qexp] = quotient.get(qexp, 0) + qc
            del remainder[exp]
            for rexp, rc in rest:
                e = tuple(a + b for a, b in zip(qexp, rexp))
                val = remainder.get(e, 0) - qc * rc
                if val:
                    remainder[e] = val
                else:
                    remainder.pop(e, None)
    if remainder:
        return None
    return MultiPoly._raw(p.nvars, {e: c for e, c in quotient.items() if c})


def q_valuation(p: MultiPoly, qf: QuadForm) -> float | int:
    """Largest ``k`` with ``q^k | p``; ``math.inf`` for the zero polynomial."""
    if p.is_zero():
        return math.inf
    k = 0
    while True:
        nxt = divide_by_q(p, qf)
        if nxt is None:
            return k
        p, k = nxt, k + 1


def check_admissible(sig: Signature) -> None:
    """Raise unless vanishing on the nullcone is equivalent to q-divisibility."""
    if sig.p < 1 or sig.q < 1:
        raise InadmissibleSignature(f"signature ({sig.p},{sig.q}) is definite; nullcone is {{0}}")
    if sig.m <= 2:
        raise InadmissibleSignature(
            f"signature ({sig.p},{sig.q}): q is reducible when p+q <= 2"
        )


def vanishes_on_nullcone(p: MultiPoly, qf: QuadForm) -> bool:
    check_admissible(qf.signature)
    return divide_by_q(p, qf) is not None


# -- rational isometries and null samples ---------------------------------


def cayley_isometry(sig: Signature, i: int, j: int, t) -> list[list[Fraction]]:
    """Rational rotation (or boost) in the ``(i, j)`` coordinate plane.

    Both slots of the same type give a circular rotation with cosine
    ``(1-t^2)/(1+t^2)``; mixed types give a hyperbolic one with
    ``cosh = (1+t^2)/(1-t^2)``, which needs ``|t| != 1``.
    """
    t = parse_rational(t)
    m = sig.m
    metric = sig.metric()
    mat = [[Fraction(int(a == b)) for b in range(m)] for a in range(m)]
    if metric[i] == metric[j]:
        c = (1 - t * t) / (1 + t * t)
        s = 2 * t / (1 + t * t)
        mat[i][i], mat[i][j], mat[j][i], mat[j][j] = c, -s, s, c
    else:
        if abs(t) == 1:
            raise ValueError("boost parameter must differ from +-1")
        ch = (1 + t * t) / (1 - t * t)
        sh = 2 * t / (1 - t * t)
        mat[i][i], mat[i][j], mat[j][i], mat[j][j] = ch, sh, sh, ch
    return mat


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def _rand_param(rng: random.Random, hyperbolic: bool) -> Fraction:
    while True:
        t = Fraction(rng.randint(-4, 4), rng.randint(1, 5))
        if not hyperbolic or abs(t) < 1:
            return t


def random_isometry(sig: Signature, rng: random.Random, steps: int = 3) -> list[list[Fraction]]:
    """Product of a few random Cayley rotations/boosts and coordinate sign flips."""
    m = sig.m
    metric = sig.metric()
    mat = [[Fraction(int(a == b)) for b in range(m)] for a in range(m)]
    if m >= 2:
        for _ in range(steps):
            i, j = rng.sample(range(m), 2)
            g = cayley_isometry(sig, i, j, _rand_param(rng, metric[i] != metric[j]))
            mat = _matmul(g, mat)
    for i in range(m):
        if rng.random() < 0.5:
            mat[i] = [-x for x in mat[i]]
    return mat


def null_samples(qf: QuadForm, count: int, seed: int = 0) -> list[tuple[Fraction, ...]]:
    """``count`` exact nonzero null vectors, deterministic in ``seed``."""
    sig = qf.signature
    if sig.p < 1 or sig.q < 1:
        raise InadmissibleSignature("definite signature: the nullcone is {0}")
    rng = random.Random(seed)
    base = [Fraction(0)] * sig.m
    base[0] = Fraction(1)
    base[sig.p] = Fraction(1)
    out = []
    for _ in range(count):
        iso = random_isometry(sig, rng, steps=2 + sig.m)
        scale = Fraction(rng.choice([1, 2, 3, 1, 1]), rng.choice([1, 1, 2]))
        v = tuple(scale * sum((iso[i][k] * base[k] for k in range(sig.m)), Fraction(0)) for i in range(sig.m))
        out.append(v)
    return out


def random_poly(nvars: int, degree: int, rng: random.Random, *, nterms: int = 4,
                homogeneous: bool = True, coef_range: int = 5) -> MultiPoly:
    """Random polynomial with small integer coefficients (test fixtures)."""
    terms = {}
    for _ in range(nterms):
        d = degree if homogeneous else rng.randint(0, degree)
        exp = [0] * nvars
        for _ in range(d):
            exp[rng.randrange(nvars)] += 1
        terms[tuple(exp)] = rng.randint(-coef_range, coef_range)
    return MultiPoly(nvars, terms)


def poly_vector_to_json(vec: Iterable[MultiPoly]) -> list[dict]:
    return [p.to_json() for p in vec]
