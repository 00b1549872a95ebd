"""Stiefel-Whitney and KO arithmetic over real projective space.

Bundles are never built; the engine manipulates exactly the data the
rank arguments need: a rank, the class ``w(V)`` in ``Z2[x]/(x^(n+1))`` and
KO residues modulo ``2^phi(n)``.  Derivations are emitted as traces whose
steps can be re-executed from their recorded inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

__all__ = [
    "Z2TruncPoly",
    "z2_mul",
    "z2_pow_one_plus_x",
    "phi",
    "phi_direct",
    "phi_table",
    "PhiBounds",
    "phi_bounds_check",
    "ko_order",
    "lema5_solve",
    "SubbVerdict",
    "subb_dichotomy",
    "BundleDescriptor",
    "TraceStep",
    "ProofTrace",
    "InapplicableError",
    "techn_case1",
    "techn_case2",
    "techn_case3",
    "WolfVerdict",
    "wolf_verdict",
    "EXCEPTIONAL_N",
    "INFEASIBLE",
]

EXCEPTIONAL_N = frozenset({1, 3, 7})
INFEASIBLE = "infeasible: rank forced to 0"


class InapplicableError(ValueError):
    """The hypotheses of a rank argument cannot be met for these parameters."""


# ---------------------------------------------------------------------------
# Z2[x]/(x^(n+1))


@dataclass(frozen=True)
class Z2TruncPoly:
    """Bit ``i`` of ``bits`` is the coefficient of ``x^i``."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("truncation index must be nonnegative")
        object.__setattr__(self, "bits", self.bits & ((1 << (self.n + 1)) - 1))

    @classmethod
    def one(cls, n: int) -> "Z2TruncPoly":
        return cls(n, 1)

    @classmethod
    def from_coeffs(cls, n: int, coeffs) -> "Z2TruncPoly":
        bits = 0
        for i, c in enumerate(coeffs):
            if c % 2:
                bits |= 1 << i
        return cls(n, bits)

    def coeffs(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.n + 1)]

    def degree(self) -> int:
        return self.bits.bit_length() - 1

    def is_one(self) -> bool:
        return self.bits == 1

    def _check(self, other: "Z2TruncPoly"):
        if self.n != other.n:
            raise ValueError(f"truncation mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Z2TruncPoly") -> "Z2TruncPoly":
        self._check(other)
        return Z2TruncPoly(self.n, self.bits ^ other.bits)

    def __mul__(self, other: "Z2TruncPoly") -> "Z2TruncPoly":
        self._check(other)
        return Z2TruncPoly(self.n, _clmul(self.bits, other.bits))

    def __pow__(self, k: int) -> "Z2TruncPoly":
        out, base = Z2TruncPoly.one(self.n), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Z2TruncPoly":
        """Formal inverse series truncated at ``x^n``; needs constant term 1."""
        if not self.bits & 1:
            raise ZeroDivisionError("constant term is 0")
        # Newton step x -> x(2 - a x) = a x^2 in characteristic 2; each
        # round doubles the number of correct terms
        inv = Z2TruncPoly.one(self.n)
        prec = 1
        while prec <= self.n:
            prec *= 2
            inv = self * inv * inv
        return inv

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs()):
            if c:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return " + ".join(terms) or "0"


def _clmul(a: int, b: int) -> int:
    """Carry-less product of bit polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def z2_mul(a: Z2TruncPoly, b: Z2TruncPoly) -> Z2TruncPoly:
    return a * b


def z2_pow_one_plus_x(r: int, n: int) -> Z2TruncPoly:
    """``(1+x)^r``; by Lucas the coefficient of ``x^i`` is odd iff ``i & r == i``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    bits = 0
    for i in range(min(r, n) + 1):
        if i & r == i:
            bits |= 1 << i
    return Z2TruncPoly(n, bits)


# ---------------------------------------------------------------------------
# Adams' count


def phi(n: int) -> int:
    """Number of ``1 <= s <= n`` with ``s = 0, 1, 2, 4 (mod 8)``."""
    if n < 1:
        raise ValueError("phi is defined for n >= 1")
    q, rem = divmod(n, 8)
    return 4 * q + (rem >= 1) + (rem >= 2) + (rem >= 4)


def phi_direct(n: int) -> int:
    return sum(1 for s in range(1, n + 1) if s % 8 in (0, 1, 2, 4))


def phi_table(limit: int) -> list[int]:
    """``[phi(1), ..., phi(limit)]`` by running count."""
    out, count = [], 0
    for s in range(1, limit + 1):
        if s % 8 in (0, 1, 2, 4):
            count += 1
        out.append(count)
    return out


def _dyadic_j(n: int) -> int:
    """The ``j`` with ``2^j <= n < 2^(j+1)``."""
    return n.bit_length() - 1


@dataclass(frozen=True)
class PhiBounds:
    n: int
    phi: int
    j: int
    sandwich: bool
    large_bound: bool | None
    order_exceeds: bool
    exceptional: bool

    @property
    def passes(self) -> bool:
        return (
            self.sandwich
            and self.large_bound is not False
            and self.order_exceeds == (not self.exceptional)
        )


def phi_bounds_check(n: int) -> PhiBounds:
    f = phi(n)
    j = _dyadic_j(n)
    return PhiBounds(
        n=n,
        phi=f,
        j=j,
        sandwich=(n - 1) <= 2 * f <= (n + 2),
        large_bound=(f >= j + 3) if n >= 10 else None,
        order_exceeds=f >= (n + 1).bit_length(),  # 2^f > n+1 without big powers
        exceptional=n in EXCEPTIONAL_N,
    )


def ko_order(n: int) -> int:
    return 2 ** phi(n)


def lema5_solve(r: int, n: int) -> tuple[int, ...]:
    """Residues ``a`` mod ``2^phi(n)`` with ``2a = r``."""
    if r < 0:
        raise ValueError("rank must be nonnegative")
    mod = ko_order(n)
    if r % 2:
        return ()
    half = (r // 2) % mod
    return tuple(sorted({half, (half + mod // 2) % mod}))


# ---------------------------------------------------------------------------
# sub-bundles of a trivial bundle


@dataclass(frozen=True)
class SubbVerdict:
    case: str
    """``trivial class``, ``degree = rank`` or ``contradiction``."""
    inverse: Z2TruncPoly
    product_bits: int
    reason: str | None = None


def subb_dichotomy(p: Z2TruncPoly, r: int, n: int) -> SubbVerdict:
    """Classify ``w(V) = p`` for a rank-``r`` sub-bundle of the trivial rank ``n+1``.

    The complement has class ``p^-1`` (computed as a truncated series) and
    rank ``n+1-r``, so its degree is at most ``n+1-r``; the untruncated
    product is then ``1`` or ``1 + x^(n+1)``.
    """
    if p.n != n:
        raise ValueError("truncation mismatch")
    if r > n + 1:
        raise ValueError(f"rank {r} exceeds n+1 = {n + 1}")
    inv = p.inverse()
    product = _clmul(p.bits, inv.bits)
    if p.degree() > r:
        return SubbVerdict("contradiction", inv, product, "degree of w(V) exceeds its rank")
    if inv.degree() > n + 1 - r:
        return SubbVerdict("contradiction", inv, product, "complement class exceeds the complement rank")
    if p.is_one():
        return SubbVerdict("trivial class", inv, product)
    assert product == 1 | (1 << (n + 1))
    return SubbVerdict("degree = rank", inv, product)


@dataclass
class BundleDescriptor:
    """Symbolic bundle over RP^n: rank, hypothesis flags and derived data."""

    n: int
    rank: int
    subbundle_of_trivial: int | None = None
    self_tensor_gamma1: bool = False
    nowhere_zero_section: bool = False
    restriction_self_tensor: int | None = None
    sw: Z2TruncPoly | None = None
    ko_residues: tuple[int, ...] | None = None
    contradiction: str | None = None

    def derive(self) -> "BundleDescriptor":
        if self.subbundle_of_trivial is not None and self.rank > self.subbundle_of_trivial:
            self.contradiction = "rank exceeds the ambient trivial bundle"
        if self.self_tensor_gamma1 and self.n >= 1:
            self.ko_residues = lema5_solve(self.rank, self.n)
            if not self.ko_residues:
                self.contradiction = "2a = r has no solution for odd r"
        if self.nowhere_zero_section and self.rank == 0:
            self.contradiction = "a rank 0 bundle has no nowhere vanishing section"
        return self

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rank": self.rank,
            "subbundle_of_trivial": self.subbundle_of_trivial,
            "self_tensor_gamma1": self.self_tensor_gamma1,
            "nowhere_zero_section": self.nowhere_zero_section,
            "restriction_self_tensor": self.restriction_self_tensor,
            "sw": None if self.sw is None else self.sw.coeffs(),
            "ko_residues": None if self.ko_residues is None else list(self.ko_residues),
            "contradiction": self.contradiction,
        }


# ---------------------------------------------------------------------------
# traces
#
# Each rule recomputes its conclusion and witness from plain JSON inputs, so
# a stored trace can be replayed step by step.


Rule = Callable[..., tuple[str, dict]]
RULES: dict[str, tuple[str, Rule]] = {}


def _rule(name: str, label: str):
    def register(fn: Rule) -> Rule:
        RULES[name] = (label, fn)
        return fn

    return register


@_rule("rank_bound", "2.7(1)")
def _r_rank_bound(n, r):
    ok = 2 * r <= n + 1
    return (f"2r = {2 * r} <= n+1 = {n + 1}, so r <= n" if ok else f"2r = {2 * r} > n+1: hypothesis impossible"), {
        "holds": ok,
        "contradiction": False,
    }


@_rule("sw_sum", "2.5(1)")
def _r_sw_sum(n, r):
    w = z2_pow_one_plus_x(r, n)
    return f"w(V + V(x)g1) = (1+x)^{r} = {w}, degree {w.degree()}", {"bits": w.coeffs(), "degree": w.degree(), "contradiction": False}


@_rule("subb_degree", "2.6")
def _r_subb_degree(n, rank, degree):
    allowed = sorted({0, rank}) if rank <= n + 1 else []
    bad = degree not in allowed
    text = f"degree {degree} must lie in {allowed}" + (": contradiction" if bad else "")
    return text, {"allowed": allowed, "contradiction": bad}


@_rule("section", "2.4(4)")
def _r_section(r):
    return f"rank {r} > 0 gives a nowhere vanishing section, so w_{r}(V) = 0 and deg w(V) < {r}", {"degree_below": r, "contradiction": False}


@_rule("subb_trivial", "2.6")
def _r_subb_trivial(n, r):
    return f"deg w(V) < {r} and deg w(V) in {{0, {r}}} force w(V) = 1", {"w": [1] + [0] * n, "contradiction": False}


@_rule("self_tensor_sw", "2.5(1)")
def _r_self_tensor_sw(n, r):
    w = z2_pow_one_plus_x(r, n)
    holds = w.is_one()
    c = math.ceil(math.log2(n + 1)) if n >= 1 else 0
    text = f"V = V(x)g1 and w(V) = 1 give (1+x)^{r} = 1 mod x^{n + 1}: " + ("holds" if holds else "fails, contradiction")
    return text, {"bits": w.coeffs(), "holds": holds, "period": 2**c, "contradiction": not holds}


@_rule("rank_max", "2.7(2)")
def _r_rank_max(n, r, rank_max):
    if r == n + 1:
        return f"r = n+1 = {r}: V is the whole trivial bundle", {"forced": r, "contradiction": False, "undetermined": False}
    if r > rank_max or (rank_max <= n + 1 and r > n + 1):
        return f"r = {r} exceeds the rank bound {min(rank_max, n + 1)}: contradiction", {"forced": None, "contradiction": True, "undetermined": False}
    if r < n + 1:
        return f"r = {r} < n+1 cannot satisfy (1+x)^r = 1: contradiction", {"forced": None, "contradiction": True, "undetermined": False}
    return f"r = {r} > n+1 is outside the sub-bundle hypothesis; not decided", {"forced": None, "contradiction": False, "undetermined": True}


@_rule("ko_trivial", "2.7(2)")
def _r_ko_trivial(n):
    order = ko_order(n)
    divides = (n + 1) % order == 0
    text = f"V trivial and V = V(x)g1 give (n+1){{g1}} = 0, so 2^phi(n) = {order} divides n+1 = {n + 1}: " + (
        "holds" if divides else "fails, contradiction"
    )
    return text, {"phi": phi(n), "order": order, "divides": divides, "contradiction": not divides}


@_rule("phi_order", "2.3(2)")
def _r_phi_order(n):
    b = phi_bounds_check(n)
    return f"2^phi({n}) = {2 ** b.phi} " + ("> " if b.order_exceeds else "<= ") + f"n+1 = {n + 1}", {
        "phi": b.phi,
        "exceeds": b.order_exceeds,
        "contradiction": False,
    }


@_rule("dyadic", "2.7(3)")
def _r_dyadic(n, k):
    j = _dyadic_j(k)
    ok = n < 2 ** (j + 2)
    return f"2^{j} <= k = {k} < 2^{j + 1} and n = {n} < 2^{j + 2} = {2 ** (j + 2)}", {"j": j, "holds": ok, "contradiction": False}


@_rule("phi_large", "2.3(1)")
def _r_phi_large(k):
    b = phi_bounds_check(k)
    return f"phi({k}) = {b.phi} >= j+3 = {b.j + 3}", {"phi": b.phi, "j": b.j, "holds": bool(b.large_bound), "contradiction": False}


@_rule("ko_halving", "2.5(2)")
def _r_ko_halving(r, k):
    res = lema5_solve(r, k)
    if not res:
        return f"2a = {r} mod 2^phi({k}) has no solution: contradiction", {"residues": [], "contradiction": True}
    return f"2a = {r} mod {ko_order(k)}: a in {list(res)}", {"residues": list(res), "contradiction": False}


@_rule("reduce_mod", "2.7(3)")
def _r_reduce_mod(n, r, j):
    mod = 2 ** (j + 2)
    ok = 0 <= r // 2 <= n < mod
    return f"a = r/2 = {r // 2} mod {mod}, with 0 <= r/2 <= n < {mod}", {"modulus": mod, "holds": ok, "contradiction": False}


@_rule("sw_half", "2.7(3)")
def _r_sw_half(n, r):
    w = z2_pow_one_plus_x(r // 2, n)
    return f"w(V) = (1+x)^{r // 2} = {w}, degree {w.degree()}", {"bits": w.coeffs(), "degree": w.degree(), "contradiction": False}


@_rule("cite", "")
def _r_cite(statement, **_):
    return statement, {"contradiction": False}


@_rule("sweep", "2.7")
def _r_sweep(case, n, k=None):
    if case == 1:
        rs = range(1, (n + 1) // 2 + 1)
        traces = [techn_case1(n, r) for r in rs]
    elif case == 2:
        rs = range(1, n + 2)
        traces = [techn_case2(n, r) for r in rs]
    else:
        rs = range(1, n + 2)
        traces = [techn_case3(n, k, r) for r in rs]
    ok = all(t.verdict == INFEASIBLE and t.replay() for t in traces)
    label = {1: "(1)", 2: "(2)", 3: "(3)"}[case]
    return f"case {label} rules out every rank 1..{rs.stop - 1 if len(rs) else 0}" if ok else "some rank not ruled out", {
        "ranks_checked": len(rs),
        "all_infeasible": ok,
        "contradiction": False,
    }


@dataclass
class TraceStep:
    lemma: str
    rule: str
    inputs: dict
    conclusion: str
    witness: dict

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "rule": self.rule, "inputs": self.inputs, "conclusion": self.conclusion, "witness": self.witness}

    @classmethod
    def from_json(cls, d) -> "TraceStep":
        return cls(d["lemma"], d["rule"], dict(d["inputs"]), d["conclusion"], dict(d["witness"]))

    def replay(self) -> bool:
        _, fn = RULES[self.rule]
        conclusion, witness = fn(**self.inputs)
        return conclusion == self.conclusion and witness == self.witness


def _step(rule: str, lemma: str | None = None, **inputs) -> TraceStep:
    label, fn = RULES[rule]
    conclusion, witness = fn(**inputs)
    return TraceStep(lemma if lemma is not None else label, rule, inputs, conclusion, witness)


@dataclass
class ProofTrace:
    case: str
    params: dict
    steps: list[TraceStep] = field(default_factory=list)
    verdict: str = "consistent"

    @property
    def contradiction(self) -> bool:
        return any(s.witness.get("contradiction") for s in self.steps)

    def replay(self) -> bool:
        return all(s.replay() for s in self.steps)

    def to_json(self) -> dict:
        return {"case": self.case, "params": self.params, "verdict": self.verdict, "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, d) -> "ProofTrace":
        return cls(d["case"], dict(d["params"]), [TraceStep.from_json(s) for s in d["steps"]], d["verdict"])

    def render(self) -> str:
        lines = [f"{self.case} {self.params}: {self.verdict}"]
        for i, s in enumerate(self.steps, 1):
            tag = f"[{s.lemma}] " if s.lemma else ""
            lines.append(f"  {i}. {tag}{s.conclusion}")
        return "\n".join(lines)


def _finish(trace: ProofTrace, r: int) -> ProofTrace:
    if r == 0:
        trace.verdict = "consistent"
    elif trace.contradiction:
        trace.verdict = INFEASIBLE
    else:
        trace.verdict = "undetermined"
    return trace


def techn_case1(n: int, r: int) -> ProofTrace:
    """``V + V(x)g1`` inside the trivial rank ``n+1`` forces ``r = 0``."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    trace = ProofTrace("case1", {"n": n, "r": r})
    first = _step("rank_bound", n=n, r=r)
    trace.steps.append(first)
    if not first.witness["holds"]:
        trace.verdict = "vacuous"
        return trace
    if r == 0:
        return _finish(trace, r)
    s = _step("sw_sum", n=n, r=r)
    trace.steps.append(s)
    trace.steps.append(_step("subb_degree", n=n, rank=2 * r, degree=s.witness["degree"]))
    return _finish(trace, r)


def techn_case2(n: int, r: int, rank_max: int | None = None) -> ProofTrace:
    """Image bundle of an odd self-adjoint constant-rank map on ``S^n``."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    if n in EXCEPTIONAL_N:
        raise InapplicableError(f"n = {n} is one of 1, 3, 7")
    rank_max = n + 1 if rank_max is None else rank_max
    if r > rank_max:
        raise ValueError(f"r = {r} exceeds rank_max = {rank_max}")
    trace = ProofTrace("case2", {"n": n, "r": r, "rank_max": rank_max})
    if r == 0:
        return _finish(trace, r)
    trace.steps.append(_step("section", r=r))
    trace.steps.append(_step("subb_trivial", n=n, r=r))
    st = _step("self_tensor_sw", n=n, r=r)
    trace.steps.append(st)
    if st.witness["holds"]:
        rm = _step("rank_max", n=n, r=r, rank_max=rank_max)
        trace.steps.append(rm)
        if rm.witness["forced"] == n + 1:
            trace.steps.append(_step("ko_trivial", n=n))
            trace.steps.append(_step("phi_order", n=n))
    return _finish(trace, r)


def techn_case3(n: int, k: int, r: int) -> ProofTrace:
    """Restriction to ``RP^k`` with ``V = V(x)g1`` there, ``k >= 10``."""
    if not 2 * k >= n:
        raise ValueError(f"n/2 ≤ k fails: n = {n}, k = {k}")
    if not k <= n:
        raise ValueError(f"k ≤ n fails: n = {n}, k = {k}")
    if not k >= 10:
        raise ValueError(f"k ≥ 10 fails: k = {k}")
    if not 0 <= r <= n + 1:
        raise ValueError(f"r ≤ n+1 fails: r = {r}")
    trace = ProofTrace("case3", {"n": n, "k": k, "r": r})
    if r == 0:
        return _finish(trace, r)
    d = _step("dyadic", n=n, k=k)
    trace.steps.append(d)
    trace.steps.append(_step("phi_large", k=k))
    h = _step("ko_halving", r=r, k=k)
    trace.steps.append(h)
    if h.witness["contradiction"]:
        return _finish(trace, r)
    trace.steps.append(_step("reduce_mod", n=n, r=r, j=d.witness["j"]))
    sw = _step("sw_half", n=n, r=r)
    trace.steps.append(sw)
    trace.steps.append(_step("subb_degree", n=n, rank=r, degree=sw.witness["degree"]))
    return _finish(trace, r)


# ---------------------------------------------------------------------------
# the verdict


@dataclass
class WolfVerdict:
    p: int
    q: int
    verdict: str
    trace: ProofTrace

    @property
    def symmetric(self) -> bool:
        return self.verdict == "locally symmetric"

    def to_json(self) -> dict:
        return {"signature": [self.p, self.q], "verdict": self.verdict, "trace": self.trace.to_json()}


def _cite(trace: ProofTrace, lemma: str, statement: str):
    trace.steps.append(_step("cite", lemma=lemma, statement=statement))


def wolf_verdict(p: int, q: int) -> WolfVerdict:
    """Locally isotropic of signature (p, q) implies locally symmetric?"""
    if p < 0 or q < 0:
        raise ValueError("signature entries must be nonnegative")
    trace = ProofTrace("wolf", {"p": p, "q": q})
    if p == q:
        if p in (2, 4, 8):
            _cite(trace, "Thm 1.3(1)", f"p = q = {p} is excluded (p in {{2, 4, 8}})")
            trace.verdict = "inconclusive"
            return WolfVerdict(p, q, "inconclusive", trace)
        if p == 0:
            _cite(trace, "", "dimension 0: there are no tangent vectors and nabla R = 0")
        elif p == 1:
            _cite(trace, "Thm 4.1", "S(v) is nilpotent on the nullcone")
            _cite(trace, "", "p = 1: RP^0 is a point and the rank argument on S^0 gives no contradiction "
                             "(2^phi is not defined at n = 0); signature (1,1) is covered by the Lorentzian base case, "
                             "where boost invariance forces nabla R = 0")
            _cite(trace, "Thm 1.1", "S = 0 iff nabla R = 0")
        else:
            n = p - 1
            _cite(trace, "Thm 4.1", "S(v) is nilpotent for every null v")
            trace.steps.append(_step("sweep", lemma="2.7(2)", case=2, n=n))
            _cite(trace, "Lemma 4.3", f"S^2 = 0 on N implies S = 0 on N (image bundle over RP^{n} inside a trivial rank {p})")
            _cite(trace, "Lemma 4.4", "S^3 = 0 over the nullcone")
            _cite(trace, "Lemma 4.5", "Im(S Phi S^2) and Im(S^2) are orthogonal; Im(S^2) is totally isotropic")
            trace.steps.append(_step("sweep", lemma="2.7(1)", case=1, n=n))
            _cite(trace, "", f"F- + S F- and Im(S Phi S^2) + Im(S^2) embed in a trivial rank {p}; both ranks are 0")
            _cite(trace, "Lemma 4.3", "S^2 = 0 on N, hence S = 0 on N")
            _cite(trace, "Lemma 4.2(2)", "S in P_1 vanishing on N vanishes identically")
            _cite(trace, "Thm 1.1", "S = 0 iff nabla R = 0")
        trace.verdict = "locally symmetric"
        return WolfVerdict(p, q, trace.verdict, trace)

    lo, hi = min(p, q), max(p, q)
    if hi < 11:
        _cite(trace, "Thm 1.3(2)", f"max(p, q) = {hi} < 11")
        trace.verdict = "inconclusive"
        return WolfVerdict(p, q, "inconclusive", trace)
    if p > q:
        _cite(trace, "", f"reverse the sign of the metric: ({p},{q}) -> ({q},{p})")
    n, k = lo + hi - 1, hi - 1
    if lo < 2:
        _cite(trace, "", f"min(p, q) = {lo} < 2: the spacelike-restriction argument is run unchanged")
    _cite(trace, "Lemma 5.1", "r- = r+ = r")
    _cite(trace, "", f"E is a rank r bundle over RP^{n}, a sub-bundle of the trivial rank {n + 1}")
    _cite(trace, "2.4(3)", f"its restriction to RP^{k} satisfies V = V(x)g1")
    trace.steps.append(_step("sweep", lemma="2.7(3)", case=3, n=n, k=k))
    _cite(trace, "Thm 1.1", "S = 0 iff nabla R = 0")
    trace.verdict = "locally symmetric"
    return WolfVerdict(p, q, trace.verdict, trace)
