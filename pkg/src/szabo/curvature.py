"""Covariant-derivative curvature tensors and their Szabo operators.

A tensor ``T[x, y, z, w; v]`` is stored by its nonzero components in the
model orthonormal basis, all indices lowered.  Valid tensors satisfy

* ``T(x,y,z,w;v) = T(z,w,x,y;v) = -T(y,x,z,w;v)``
* ``T(x,y,z,w;v) + T(y,z,x,w;v) + T(z,x,y,w;v) = 0``
* ``T(x,y,z,w;v) + T(x,y,w,v;z) + T(x,y,v,z;w) = 0``

and the Szabo operator is defined by ``(S(v)x, y) = T(x, v, v, y; v)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .exactpoly import MultiPoly, Signature, format_rational, parse_rational
from .pseudolin import Matrix, sparse_nullspace
from .szaboclass import HomPolyMap

__all__ = [
    "CovDerivTensor",
    "SymmetryViolation",
    "check_symmetries",
    "symmetric_space_dimension",
    "symmetric_space_basis",
    "random_symmetric_tensor",
    "szabo_at",
    "szabo_polymap",
    "Thm2Report",
    "thm2_check",
    "pushforward",
    "MAX_FIXTURE_DIM",
]

MAX_FIXTURE_DIM = 6

Index = tuple[int, int, int, int, int]


class CovDerivTensor:
    """Five-index rational tensor over the model space of a signature."""

    __slots__ = ("signature", "_entries")

    def __init__(self, signature: Signature, entries: Mapping[Index, object] | None = None):
        m = signature.m
        clean: dict[Index, Fraction] = {}
        for idx, c in (entries or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != 5 or any(not 0 <= i < m for i in idx):
                raise ValueError(f"index {idx} out of range for dimension {m}")
            c = parse_rational(c)
            if c:
                clean[idx] = c
        self.signature = signature
        self._entries = dict(sorted(clean.items()))

    @property
    def m(self) -> int:
        return self.signature.m

    @property
    def entries(self) -> dict[Index, Fraction]:
        return dict(self._entries)

    def __getitem__(self, idx) -> Fraction:
        return self._entries.get(tuple(idx), Fraction(0))

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other):
        return isinstance(other, CovDerivTensor) and self.signature == other.signature and self._entries == other._entries

    def __hash__(self):
        return hash((self.signature, tuple(self._entries.items())))

    def scale(self, c) -> "CovDerivTensor":
        c = parse_rational(c)
        return CovDerivTensor(self.signature, {k: v * c for k, v in self._entries.items()})

    def __add__(self, other: "CovDerivTensor") -> "CovDerivTensor":
        if self.signature != other.signature:
            raise ValueError("signature mismatch")
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) + v
        return CovDerivTensor(self.signature, out)

    def with_entry(self, idx: Index, value) -> "CovDerivTensor":
        out = dict(self._entries)
        out[tuple(idx)] = parse_rational(value)
        return CovDerivTensor(self.signature, out)

    def to_json(self) -> dict:
        return {
            "signature": self.signature.to_json(),
            "entries": [{"idx": list(k), "coef": format_rational(v)} for k, v in self._entries.items()],
        }

    @classmethod
    def from_json(cls, data) -> "CovDerivTensor":
        sig = Signature.from_json(data["signature"])
        return cls(sig, {tuple(e["idx"]): parse_rational(e["coef"]) for e in data["entries"]})

    def __repr__(self):
        return f"CovDerivTensor({self.signature.p},{self.signature.q}; {len(self._entries)} nonzero)"


# ---------------------------------------------------------------------------
# symmetry identities


@dataclass(frozen=True)
class SymmetryViolation:
    identity: str
    index: Index
    residual: Fraction

    def to_json(self) -> dict:
        return {"identity": self.identity, "index": list(self.index), "residual": format_rational(self.residual)}


IDENTITIES = ("antisymmetry", "pair symmetry", "first Bianchi", "second Bianchi")


def _residual(T: CovDerivTensor, name: str, i: Index) -> Fraction:
    x, y, z, w, v = i
    if name == "antisymmetry":
        return T[x, y, z, w, v] + T[y, x, z, w, v]
    if name == "pair symmetry":
        return T[x, y, z, w, v] - T[z, w, x, y, v]
    if name == "first Bianchi":
        return T[x, y, z, w, v] + T[y, z, x, w, v] + T[z, x, y, w, v]
    return T[x, y, z, w, v] + T[x, y, w, v, z] + T[x, y, v, z, w]


def check_symmetries(T: CovDerivTensor, *, limit: int | None = None) -> list[SymmetryViolation]:
    """All violated identities, in index order (first ``limit`` of them)."""
    out = []
    for i in itertools.product(range(T.m), repeat=5):
        for name in IDENTITIES:
            r = _residual(T, name, i)
            if r:
                out.append(SymmetryViolation(name, i, r))
                if limit is not None and len(out) >= limit:
                    return out
    return out


# ---------------------------------------------------------------------------
# solution space of the identities
#
# Antisymmetry and pair symmetry are built into the coordinates: a component
# is determined by the unordered pair of ordered pairs (x<y), (z<w) and v.


def _pairs(m):
    return [(a, b) for a in range(m) for b in range(a + 1, m)]


@lru_cache(maxsize=None)
def _coordinates(m: int):
    pairs = _pairs(m)
    pid = {p: k for k, p in enumerate(pairs)}
    coords = {}
    n = 0
    for a in range(len(pairs)):
        for b in range(a, len(pairs)):
            for v in range(m):
                coords[(a, b, v)] = n
                n += 1
    return pid, coords, n


def _coord(m: int, x, y, z, w, v):
    """(sign, coordinate) of component T[x,y,z,w;v], or None when forced to 0."""
    if x == y or z == w:
        return None
    pid, coords, _ = _coordinates(m)
    sign = 1
    if x > y:
        x, y, sign = y, x, -sign
    if z > w:
        z, w, sign = w, z, -sign
    a, b = pid[(x, y)], pid[(z, w)]
    if a > b:
        a, b = b, a
    return sign, coords[(a, b, v)]


def _identity_rows(m: int):
    seen = set()
    for x, y, z, w, v in itertools.product(range(m), repeat=5):
        for pattern in (
            ((x, y, z, w, v), (y, z, x, w, v), (z, x, y, w, v)),
            ((x, y, z, w, v), (x, y, w, v, z), (x, y, v, z, w)),
        ):
            row: dict[int, int] = {}
            for idx in pattern:
                c = _coord(m, *idx)
                if c is not None:
                    row[c[1]] = row.get(c[1], 0) + c[0]
            row = {k: s for k, s in row.items() if s}
            if not row:
                continue
            # normalise sign so duplicates are detected
            lead = min(row)
            if row[lead] < 0:
                row = {k: -s for k, s in row.items()}
            key = tuple(sorted(row.items()))
            if key not in seen:
                seen.add(key)
                yield row


@lru_cache(maxsize=None)
def symmetric_space_basis(m: int) -> tuple[dict[int, Fraction], ...]:
    """Sparse basis of the identities' solution space in reduced coordinates."""
    if m > MAX_FIXTURE_DIM:
        raise ValueError(f"fixture generation is capped at dimension {MAX_FIXTURE_DIM}")
    _, _, n = _coordinates(m)
    return tuple(sparse_nullspace(_identity_rows(m), n))


def symmetric_space_dimension(m: int) -> int:
    return len(symmetric_space_basis(m))


def _expand(sig: Signature, reduced: Mapping[int, Fraction]) -> CovDerivTensor:
    m = sig.m
    entries = {}
    for idx in itertools.product(range(m), repeat=5):
        c = _coord(m, *idx)
        if c is not None and c[1] in reduced:
            entries[idx] = c[0] * reduced[c[1]]
    return CovDerivTensor(sig, entries)


def random_symmetric_tensor(sig: Signature, seed: int, *, terms: int | None = None) -> CovDerivTensor:
    """Seeded small-integer combination of solution-space basis vectors."""
    m = sig.m
    if m < 2:
        # the solution space is {0}
        return CovDerivTensor(sig)
    basis = symmetric_space_basis(m)
    rng = random.Random(seed)
    chosen = range(len(basis)) if terms is None else sorted(rng.sample(range(len(basis)), min(terms, len(basis))))
    reduced: dict[int, Fraction] = {}
    for k in chosen:
        c = rng.randint(-3, 3)
        if not c:
            continue
        for col, val in basis[k].items():
            reduced[col] = reduced.get(col, 0) + c * val
    return _expand(sig, {k: v for k, v in reduced.items() if v})


# ---------------------------------------------------------------------------
# Szabo operator


class SymmetryError(ValueError):
    def __init__(self, violations):
        super().__init__(f"tensor violates {violations[0].identity} at {violations[0].index}")
        self.violations = violations


def _require_valid(T: CovDerivTensor):
    bad = check_symmetries(T, limit=1)
    if bad:
        raise SymmetryError(bad)


def szabo_at(T: CovDerivTensor, v, *, validate: bool = True) -> Matrix:
    """Matrix of ``S(v)``; ``M = G B`` where ``B[x][y] = T(x,v,v,y;v)``."""
    if validate:
        _require_valid(T)
    m = T.m
    vec = [parse_rational(x) for x in v]
    if len(vec) != m:
        raise ValueError(f"vector has length {len(vec)}, expected {m}")
    g = T.signature.metric()
    b = [[Fraction(0)] * m for _ in range(m)]
    for (x, a, c, y, e), val in T.entries.items():
        b[x][y] += val * vec[a] * vec[c] * vec[e]
    return Matrix([[g[x] * b[x][y] for y in range(m)] for x in range(m)])


def szabo_polymap(T: CovDerivTensor, *, validate: bool = True) -> HomPolyMap:
    if validate:
        _require_valid(T)
    m = T.m
    g = T.signature.metric()
    acc: list[list[dict]] = [[{} for _ in range(m)] for _ in range(m)]
    for (x, a, c, y, e), val in T.entries.items():
        exp = [0] * m
        exp[a] += 1
        exp[c] += 1
        exp[e] += 1
        exp = tuple(exp)
        cell = acc[x][y]
        cell[exp] = cell.get(exp, 0) + g[x] * val
    return HomPolyMap(T.signature, 3, [[MultiPoly(m, acc[i][j]) for j in range(m)] for i in range(m)])


@dataclass
class Thm2Report:
    szabo_zero: bool
    tensor_zero: bool

    @property
    def equivalent(self) -> bool:
        return self.szabo_zero == self.tensor_zero


def thm2_check(T: CovDerivTensor) -> Thm2Report:
    """Compare vanishing of the Szabo map with vanishing of the tensor."""
    return Thm2Report(szabo_polymap(T).is_zero(), T.is_zero())


def pushforward(T: CovDerivTensor, iso: Matrix) -> CovDerivTensor:
    """``(iso_* T)(x, ...) = T(iso^-1 x, ...)`` on every slot."""
    m = T.m
    inv = iso.inverse()
    current: dict[Index, Fraction] = T.entries
    for slot in range(5):
        nxt: dict[Index, Fraction] = {}
        for idx, val in current.items():
            a = idx[slot]
            for i in range(m):
                f = inv[a, i]
                if f:
                    new = idx[:slot] + (i,) + idx[slot + 1:]
                    nxt[new] = nxt.get(new, 0) + val * f
        current = {k: v for k, v in nxt.items() if v}
    return CovDerivTensor(T.signature, current)
