"""Exact linear algebra on R^(p,q) with the diagonal model metric.

The metric is ``G = diag(-1,...,-1, +1,...,+1)`` (``p`` minus signs).  All
matrices hold ``Fraction`` entries; eigenvalues are never computed, only
ranks, kernels, images and minimal polynomials.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactpoly import Signature, format_rational, parse_rational, random_isometry

__all__ = [
    "Matrix",
    "InnerSpace",
    "PreconditionError",
    "rref",
    "nullspace",
    "sparse_nullspace",
    "span_basis",
    "same_span",
    "upoly_mul",
    "upoly_divmod",
    "upoly_gcd",
    "upoly_derivative",
    "upoly_eval_matrix",
    "upoly_str",
    "minimal_polynomial",
    "is_jordan_simple",
    "is_totally_isotropic",
    "Lemma45Report",
    "lema4_report",
    "cube_nilpotent_fixture",
]


class PreconditionError(ValueError):
    """An operation's hypothesis does not hold for the given input."""


# ---------------------------------------------------------------------------
# dense elimination


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[parse_rational(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def sparse_nullspace(equations: Iterable[dict[int, object]], ncols: int) -> list[dict[int, Fraction]]:
    """Nullspace of a sparse homogeneous system.

    Each equation is ``{column: coefficient}``.  Returns sparse basis
    vectors, one per free column, in increasing free-column order.
    """
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for eq in equations:
        row = {c: parse_rational(v) for c, v in eq.items() if v}
        # reduce against existing pivots until the leading column is new
        while row:
            lead = min(row)
            if lead not in pivot_rows:
                break
            f = row[lead]
            for c, v in pivot_rows[lead].items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        pivot_rows[lead] = {c: v * inv for c, v in row.items()}
    # back substitution to full reduction, highest pivot first
    for lead in sorted(pivot_rows, reverse=True):
        row = pivot_rows[lead]
        for c in sorted(k for k in list(row) if k != lead and k in pivot_rows):
            if c not in row:
                continue
            f = row[c]
            for cc, v in pivot_rows[c].items():
                nv = row.get(cc, 0) - f * v
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
    free = [c for c in range(ncols) if c not in pivot_rows]
    free_set = set(free)
    basis = []
    by_free: dict[int, dict[int, Fraction]] = {f: {f: Fraction(1)} for f in free}
    for lead, row in pivot_rows.items():
        for c, v in row.items():
            if c in free_set:
                by_free[c][lead] = -v
    for f in free:
        basis.append(by_free[f])
    return basis


def span_basis(vectors: Iterable[Sequence]) -> list[tuple[Fraction, ...]]:
    """Echelon basis of the span of ``vectors`` (empty list for {0})."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    red, _ = rref(vecs)
    return [tuple(r) for r in red]


def same_span(a: Iterable[Sequence], b: Iterable[Sequence]) -> bool:
    return span_basis(a) == span_basis(b)


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix of ``Fraction`` entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(parse_rational(x) for x in row) for row in rows)
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls(list(zip(*cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, scalar) -> "Matrix":
        s = parse_rational(scalar)
        return Matrix([[a * s for a in r] for r in self.rows])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            cols = list(zip(*other.rows))
            return Matrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows])
        vec = [parse_rational(x) for x in other]
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows)

    def __pow__(self, k: int) -> "Matrix":
        result = Matrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def rank(self) -> int:
        return len(rref(self.rows)[1]) if self.rows else 0

    def kernel_basis(self) -> list[tuple[Fraction, ...]]:
        return [tuple(v) for v in nullspace(self.rows, self.shape[1])]

    def image_basis(self) -> list[tuple[Fraction, ...]]:
        return span_basis(self.T.rows)

    def det(self) -> Fraction:
        a = [list(r) for r in self.rows]
        n = len(a)
        det = Fraction(1)
        for c in range(n):
            pr = next((i for i in range(c, n) if a[i][c]), None)
            if pr is None:
                return Fraction(0)
            if pr != c:
                a[c], a[pr] = a[pr], a[c]
                det = -det
            det *= a[c][c]
            for i in range(c + 1, n):
                if a[i][c]:
                    f = a[i][c] / a[c][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return det

    def inverse(self) -> "Matrix":
        n = self.n
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix([r[n:] for r in red])

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "Matrix":
        return cls([[parse_rational(x) for x in r] for r in data])

    def __repr__(self):
        return "Matrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"


# ---------------------------------------------------------------------------
# the model inner space


@dataclass(frozen=True)
class InnerSpace:
    signature: Signature

    @property
    def m(self) -> int:
        return self.signature.m

    @property
    def metric(self) -> Matrix:
        return Matrix.diag(self.signature.metric())

    def ip(self, u: Sequence, v: Sequence) -> Fraction:
        if len(u) != self.m or len(v) != self.m:
            raise ValueError(f"vectors must have length {self.m}")
        return sum(
            (s * parse_rational(a) * parse_rational(b) for s, a, b in zip(self.signature.metric(), u, v)),
            Fraction(0),
        )

    def phi_map(self) -> Matrix:
        """The reflection ``rho_+ - rho_-``; it flips the timelike block."""
        return Matrix.diag(self.signature.metric())

    def g(self, u: Sequence, v: Sequence) -> Fraction:
        """Positive definite companion form ``g(u, v) = (u, Phi v)``."""
        return self.ip(u, self.phi_map() @ v)

    def phi_twist(self, a: Matrix) -> Matrix:
        return a @ self.phi_map()

    def is_self_adjoint(self, a: Matrix) -> bool:
        g = self.metric
        return g @ a == a.T @ g

    def adjoint(self, a: Matrix) -> Matrix:
        g = self.metric
        return g @ a.T @ g

    def is_isometry(self, t: Matrix) -> bool:
        g = self.metric
        return t.T @ g @ t == g

    def gram(self, basis: Sequence[Sequence]) -> Matrix:
        return Matrix([[self.ip(u, v) for v in basis] for u in basis])


def is_totally_isotropic(basis: Sequence[Sequence], sp: InnerSpace) -> bool:
    return all(sp.ip(u, v) == 0 for u in basis for v in basis)


# ---------------------------------------------------------------------------
# univariate polynomials: tuples of Fractions, lowest degree first


def _trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def upoly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def upoly_divmod(a, b):
    a, b = list(_trim(a)), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        quot[shift] = f
        for i, y in enumerate(b):
            a[shift + i] -= f * y
        a = list(_trim(a))
    return _trim(quot), tuple(a)


def upoly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    if not a:
        return ()
    lead = a[-1]
    return tuple(x / lead for x in a)


def upoly_derivative(a):
    return _trim(i * x for i, x in enumerate(a) if i)


def upoly_eval_matrix(coeffs, a: Matrix) -> Matrix:
    """Horner evaluation ``coeffs(A)``."""
    n = a.n
    out = Matrix.zeros(n)
    ident = Matrix.identity(n)
    for c in reversed(_trim(coeffs)):
        out = out @ a + ident * c
    return out


def upoly_str(coeffs, var: str = "X") -> str:
    coeffs = _trim(coeffs)
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def minimal_polynomial(a: Matrix) -> tuple[Fraction, ...]:
    """Monic minimal polynomial, coefficients lowest degree first.

    Powers ``I, A, A^2, ...`` are flattened and reduced one at a time; the
    first power that falls in the span of the earlier ones yields the
    relation.
    """
    n = a.n
    # echelon rows carry (vector, combination of powers that produced it)
    echelon: list[tuple[int, list[Fraction], list[Fraction]]] = []
    power = Matrix.identity(n)
    for k in range(n + 1):
        vec = [x for r in power.rows for x in r]
        combo = [Fraction(0)] * (n + 1)
        combo[k] = Fraction(1)
        for lead, evec, ecombo in echelon:
            f = vec[lead]
            if f:
                vec = [x - f * y for x, y in zip(vec, evec)]
                combo = [x - f * y for x, y in zip(combo, ecombo)]
        lead = next((i for i, x in enumerate(vec) if x), None)
        if lead is None:
            poly = _trim(combo)
            return tuple(x / poly[-1] for x in poly)
        inv = 1 / vec[lead]
        echelon.append((lead, [x * inv for x in vec], [x * inv for x in combo]))
        power = power @ a
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def is_jordan_simple(a: Matrix) -> bool:
    mu = minimal_polynomial(a)
    return len(upoly_gcd(mu, upoly_derivative(mu))) == 1


# ---------------------------------------------------------------------------
# self-adjoint operators with A^3 = 0


@dataclass
class Lemma45Report:
    """Four assertions about a self-adjoint ``A`` with ``A^3 = 0``."""

    rank_a2: int
    rank_a_phi_a2: int
    rank_a2_phi_a2: int
    image_a2: list
    image_a_phi_a2: list
    isotropic: bool
    ranks_equal: bool
    restriction_iso: bool
    gram: Matrix
    nondegenerate: bool
    orthogonal: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.isotropic and self.ranks_equal and self.restriction_iso and self.nondegenerate and self.orthogonal


def lema4_report(a: Matrix, sp: InnerSpace) -> Lemma45Report:
    if a.shape != (sp.m, sp.m):
        raise PreconditionError(f"operator is {a.shape}, space has dimension {sp.m}")
    if not sp.is_self_adjoint(a):
        raise PreconditionError("hypothesis failed: A is not self-adjoint")
    if not (a @ a @ a).is_zero():
        raise PreconditionError("hypothesis failed: A^3 != 0")
    phi = sp.phi_map()
    a2 = a @ a
    a_phi_a2 = a @ phi @ a2
    a2_phi_a2 = a2 @ phi @ a2
    im_a2 = a2.image_basis()
    im_f = a_phi_a2.image_basis()
    r1, r2, r3 = a2.rank(), a_phi_a2.rank(), a2_phi_a2.rank()

    isotropic = is_totally_isotropic(im_a2, sp)
    ranks_equal = r1 == r2 == r3
    # A maps Im(A Phi A^2) onto Im(A^2) injectively
    mapped = [a @ v for v in im_f]
    restriction_iso = len(span_basis(mapped)) == len(im_f) and same_span(mapped, im_a2) if im_f else not im_a2
    gram = sp.gram(im_f)
    nondegenerate = gram.det() != 0 if im_f else True
    cross = [[sp.ip(x, y) for y in im_f] for x in im_a2]
    orthogonal = all(c == 0 for row in cross for c in row)
    return Lemma45Report(
        rank_a2=r1,
        rank_a_phi_a2=r2,
        rank_a2_phi_a2=r3,
        image_a2=im_a2,
        image_a_phi_a2=im_f,
        isotropic=isotropic,
        ranks_equal=ranks_equal,
        restriction_iso=restriction_iso,
        gram=gram,
        nondegenerate=nondegenerate,
        orthogonal=orthogonal,
        witnesses={"gram_det": gram.det() if im_f else Fraction(1), "cross_products": cross},
    )


def _null_pair(sig: Signature, t: int, s: int):
    """Vectors ``f, h`` spanning the (t, s) hyperbolic plane with (f, h) = 1, f, h null."""
    m = sig.m
    f = [Fraction(0)] * m
    h = [Fraction(0)] * m
    f[t], f[s] = Fraction(1), Fraction(1)
    h[t], h[s] = Fraction(-1, 2), Fraction(1, 2)
    return f, h


def cube_nilpotent_fixture(sig: Signature, seed: int, *, blocks: Sequence[tuple[int, int]] | None = None) -> Matrix:
    """Random self-adjoint ``A`` with ``A^3 = 0`` in the model space.

    ``A`` is assembled from nilpotent Jordan blocks of size <= 3 on
    mutually orthogonal subspaces, each block realised on a rational basis
    where the form is anti-diagonal with sign ``eps``, scaled by a random
    rational, and finally conjugated by a random rational isometry.
    ``blocks`` lists ``(size, eps)``; when omitted it is chosen at random.
    """
    rng = random.Random(seed)
    p, q = sig.p, sig.q
    free_t = list(range(p))
    free_s = list(range(p, p + q))
    if blocks is None:
        blocks = []
        while True:
            opts = []
            if free_t and len(free_s) >= 2:
                opts.append((3, 1))
            if len(free_t) >= 2 and free_s:
                opts.append((3, -1))
            if free_t and free_s:
                opts += [(2, 1), (2, -1)]
            if not opts or (blocks and rng.random() < 0.3):
                break
            size, eps = rng.choice(opts)
            blocks.append((size, eps))
            if size == 3 and eps == 1:
                free_t.pop(); free_s.pop(); free_s.pop()
            elif size == 3:
                free_t.pop(); free_t.pop(); free_s.pop()
            else:
                free_t.pop(); free_s.pop()
        free_t = list(range(p))
        free_s = list(range(p, p + q))

    m = sig.m
    a = [[Fraction(0)] * m for _ in range(m)]

    def add_map(src, dst, c):
        # A += c * dst (src^flat), with src^flat(x) = (src, x) in the model metric
        metric = sig.metric()
        for i in range(m):
            for j in range(m):
                a[i][j] += c * dst[i] * metric[j] * src[j]

    for size, eps in blocks:
        c = Fraction(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2, 3]))
        if size == 3:
            if eps == 1:
                t, s1, s2 = free_t.pop(), free_s.pop(), free_s.pop()
                f1, f3 = _null_pair(sig, t, s1)
                f2 = [Fraction(int(i == s2)) for i in range(m)]
            else:
                t1, t2, s = free_t.pop(), free_t.pop(), free_s.pop()
                f1, f3 = _null_pair(sig, t1, s)
                f3 = [-x for x in f3]
                f2 = [Fraction(int(i == t2)) for i in range(m)]
            # form: (f1,f3) = (f2,f2) = eps; A f1 = f2, A f2 = f3, A f3 = 0.
            # With dual basis f1* = eps f3, f2* = eps f2, f3* = eps f1:
            # A = c*(f2 (x) f1* + f3 (x) f2*)
            add_map([eps * x for x in f3], f2, c)
            add_map([eps * x for x in f2], f3, c)
        elif size == 2:
            t, s = free_t.pop(), free_s.pop()
            f1, f2 = _null_pair(sig, t, s)
            if eps == -1:
                f2 = [-x for x in f2]
            # (f1, f2) = eps; A f1 = f2, A f2 = 0; f1* = eps f2
            add_map([eps * x for x in f2], f2, c)
        else:
            raise ValueError(f"unsupported block size {size}")

    iso = Matrix(random_isometry(sig, rng, steps=2 * m))
    return iso @ Matrix(a) @ iso.inverse()
