"""Acceptance suite: one recorded pass/fail line per criterion.

Each check computes its verdict against an independent oracle, records a
line (printed in the pytest terminal summary), then asserts.  Run directly
with ``python3 tests/test_acceptance.py`` to print the lines without pytest.
"""

import itertools
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from acceptance_log import record  # noqa: E402
from szabo.curvature import CovDerivTensor, check_symmetries, random_symmetric_tensor, szabo_polymap, thm2_check  # noqa: E402
from szabo.exactpoly import QuadForm, Signature, divide_by_q, null_samples, random_poly, vanishes_on_nullcone  # noqa: E402
from szabo.obstruction import (  # noqa: E402
    INFEASIBLE,
    phi,
    phi_bounds_check,
    phi_table,
    techn_case1,
    techn_case2,
    techn_case3,
    wolf_verdict,
    z2_pow_one_plus_x,
)
from szabo.polydep import dependence_degree, descent_chain, random_family  # noqa: E402
from szabo.pseudolin import InnerSpace, Matrix, cube_nilpotent_fixture, is_jordan_simple, lema4_report  # noqa: E402
from szabo.spectral import constant_profile_fixture, eqny_identity_check, jordan_ker_im_at, spec_profile  # noqa: E402
from szabo.szaboclass import generic_fixture, p0_trivial_certificate, pclass_check, rank_one_fixture_11  # noqa: E402


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_phi_table():
    limit = 2**16
    with Timer() as t:
        table = phi_table(limit)
        reports = [phi_bounds_check(n) for n in range(1, limit + 1)]
    # running-count oracle, kept outside the timed region
    count, expected = 0, []
    for n in range(1, limit + 1):
        count += n % 8 in (0, 1, 2, 4)
        expected.append(count)
    table_ok = table == expected and all(phi(n) == expected[n - 1] for n in range(1, limit + 1))
    large_ok = all(r.large_bound for r in reports if r.n >= 10)
    exceptions = {r.n for r in reports if 2 ** r.phi <= r.n + 1}
    flags_ok = all(r.order_exceeds == (r.n not in exceptions) for r in reports)
    ok = table_ok and large_ok and flags_ok and exceptions == {1, 3, 7} and t.elapsed < 2
    record(1, "phi table and bounds", ok,
           f"n <= 2^16, table {table_ok}, phi >= j+3 {large_ok}, 2^phi <= n+1 at {sorted(exceptions)}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_02_lucas():
    with Timer() as t:
        rows = oracles.binomial_parity_rows(64)
        ok = all(
            z2_pow_one_plus_x(r, n).coeffs() == [rows[r][i] if i <= r else 0 for i in range(n + 1)]
            for r in range(65) for n in range(65)
        )
    ok = ok and t.elapsed < 1
    record(2, "Lucas / Stiefel-Whitney arithmetic", ok, f"r, n <= 64 against Pascal parity, {t.elapsed:.2f}s")
    assert ok


def test_criterion_03_obstruction_exhaustion():
    counts = [0, 0, 0]
    bad = []
    with Timer() as t:
        for n in range(1, 65):
            for r in range(1, (n + 1) // 2 + 1):
                tr = techn_case1(n, r)
                counts[0] += 1
                if tr.verdict != INFEASIBLE or not tr.replay():
                    bad.append(("case1", n, r))
            if n not in (1, 3, 7):
                for r in range(1, n + 2):
                    tr = techn_case2(n, r)
                    counts[1] += 1
                    if tr.verdict != INFEASIBLE or not tr.replay():
                        bad.append(("case2", n, r))
        for n in range(10, 65):
            for k in range(max(10, (n + 1) // 2), n + 1):
                for r in range(1, n + 2):
                    tr = techn_case3(n, k, r)
                    counts[2] += 1
                    if tr.verdict != INFEASIBLE or not tr.replay():
                        bad.append(("case3", n, k, r))
    ok = not bad and t.elapsed < 10
    record(3, "obstruction exhaustion", ok,
           f"{counts[0]} + {counts[1]} + {counts[2]} traces forced to rank 0 and replayed, failures {bad[:3]}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_04_wolf_grid():
    mismatches = []
    for p, q in itertools.product(range(17), repeat=2):
        expected = (p == q and p not in (2, 4, 8)) or (p != q and max(p, q) >= 11)
        w = wolf_verdict(p, q)
        label = "locally symmetric" if expected else "inconclusive"
        if w.verdict != label or not w.trace.replay():
            mismatches.append((p, q))
    ok = not mismatches
    record(4, "verdict table", ok, f"289 cells on p, q <= 16, mismatches {mismatches}")
    assert ok


FIXTURE_SIGNATURES = [(1, 2), (2, 1), (1, 3), (2, 2), (3, 1), (1, 4), (2, 3), (3, 2)]


def test_criterion_05_curvature_suite():
    fixtures = 0
    bad = []
    with Timer() as t:
        for idx, (p, q) in enumerate(FIXTURE_SIGNATURES):
            sig = Signature(p, q)
            for seed in range(3):
                T = random_symmetric_tensor(sig, 100 * idx + seed)
                fixtures += 1
                if check_symmetries(T, limit=1):
                    bad.append((p, q, seed, "symmetries"))
                if not pclass_check(szabo_polymap(T)).member:
                    bad.append((p, q, seed, "P1"))
                if not thm2_check(T).equivalent:
                    bad.append((p, q, seed, "equivalence"))
        zero = thm2_check(CovDerivTensor(Signature(2, 2)))
        if not (zero.equivalent and zero.szabo_zero):
            bad.append("zero tensor")
    ok = fixtures >= 20 and not bad and t.elapsed < 60
    record(5, "curvature suite", ok, f"{fixtures} fixtures in dimensions 3-5 plus the zero tensor, failures {bad}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_06_p0_trivial():
    dims = {}
    for m in range(2, 7):
        for p in range(m + 1):
            dims[(p, m - p)] = p0_trivial_certificate(Signature(p, m - p)).dimension
    ok = all(d == 0 for d in dims.values())
    record(6, "P0 = {0}", ok, f"{len(dims)} signatures with 2 <= m <= 6, nonzero dimensions {[s for s, d in dims.items() if d]}")
    assert ok


def test_criterion_07_divisibility():
    rng = random.Random(7)
    round_trip, agree, total = 0, 0, 0
    for p, q in [(1, 2), (2, 2), (1, 3), (2, 3)]:
        sig = Signature(p, q)
        qf = QuadForm(sig)
        pts = null_samples(qf, 50, seed=p * 10 + q)
        for _ in range(100):
            y = random_poly(sig.m, rng.randint(0, 3), rng, homogeneous=False)
            round_trip += divide_by_q(qf.poly * y, qf) == y
        for i in range(200):
            base = random_poly(sig.m, 2, rng, nterms=4)
            poly = qf.poly * base if i % 2 else base
            by_eval = all(poly.evaluate(v) == 0 for v in pts)
            agree += vanishes_on_nullcone(poly, qf) == by_eval
            total += 1
    ok = round_trip == 400 and agree == total
    record(7, "divisibility oracle", ok, f"round trips {round_trip}/400, nullcone agreement {agree}/{total} (100 divisible and 100 non-divisible per signature) at 50 null samples")
    assert ok


def test_criterion_08_dependence():
    families = 0
    bad = []
    with Timer() as t:
        for seed in range(48):
            sig = Signature(1, 2) if seed % 3 else Signature(2, 2)
            w = 2 + seed % 4
            r = 1 + seed % 3
            if r > w:
                r = w
            k = seed % 3
            F = random_family(sig, w, r, k, seed)
            families += 1
            xs = oracles.symbols(sig.m)
            qx = oracles.q_expr(sig.p, sig.q, xs)
            cols = [[oracles.to_sympy(c, xs) for c in x] for x in F.maps]
            vals = [oracles.q_valuation(mn, qx, xs) for mn in oracles.all_minors(cols, w, r)]
            vals = [v for v in vals if v is not None]
            expected = min(vals) if vals else None
            got = dependence_degree(F)
            if got != expected:
                bad.append((seed, "degree", got, expected))
                continue
            if got is None:
                continue
            chain = descent_chain(F, seed=seed)
            if len(chain) != got:
                bad.append((seed, "chain length"))
            if any(not s.identity_holds or s.k_after != s.k_before - 1 for s in chain):
                bad.append((seed, "step"))
            if (chain[-1].k_after if chain else got) != 0:
                bad.append((seed, "final k"))
    ok = not bad and t.elapsed < 60
    record(8, "dependence machinery", ok, f"{families} families (w <= 5, r <= 3) against cofactor minors, failures {bad[:3]}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_09_lemma45():
    results = []
    for p, q in [(2, 2), (3, 3), (2, 4)]:
        sig = Signature(p, q)
        sp = InnerSpace(sig)
        for seed in range(7):
            a = cube_nilpotent_fixture(sig, seed)
            results.append((lema4_report(a, sp).holds, (a @ a).is_zero()))
        a = cube_nilpotent_fixture(sig, 99, blocks=[(2, 1), (2, -1)])
        results.append((lema4_report(a, sp).holds, (a @ a).is_zero()))
    degenerate = sum(1 for _, d in results if d)
    ok = len(results) >= 20 and all(h for h, _ in results) and degenerate > 0
    record(9, "cube-nilpotent operator suite", ok, f"{sum(h for h, _ in results)}/{len(results)} operators pass, {degenerate} with A^2 = 0")
    assert ok


def test_criterion_10_spectral():
    rng = random.Random(10)
    sp = InnerSpace(Signature(1, 1))
    S11 = rank_one_fixture_11()
    points = 0
    ker_ok = True
    while points < 10:
        v = (Fraction(rng.randint(-6, 6), rng.randint(1, 4)), Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        if sp.ip(v, v) == 0:
            continue
        ker_ok &= jordan_ker_im_at(S11.evaluate(v)).holds
        points += 1
    ops = 0
    while ops < 20:
        n = rng.randint(2, 4)
        d = Matrix.diag([rng.choice([0, 0, 1, -1, 3]) for _ in range(n)])
        p = Matrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if p.det() == 0:
            continue
        a = p @ d @ p.inverse()
        ker_ok &= is_jordan_simple(a) and jordan_ker_im_at(a).holds
        ops += 1
    constant = [eqny_identity_check(S, spec_profile(S)).holds for S in map(constant_profile_fixture, (0, 1, 2))]
    generic_maps = [szabo_polymap(random_symmetric_tensor(Signature(1, 2), s)) for s in range(3)]
    generic_maps.append(generic_fixture(Signature(1, 2)))
    generic = [eqny_identity_check(S, spec_profile(S)) for S in generic_maps]
    generic_ok = all(not g.holds and g.diagnosis for g in generic)
    ok = ker_ok and all(constant) and generic_ok
    record(10, "spectral pointwise lemma", ok,
           f"Ker = Im at 10 points and 20 operators {ker_ok}; identity on constant-profile fixtures {constant} "
           f"(fixtures lie outside the class P); generic fixtures fail with diagnosis {generic_ok}")
    assert ok


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
