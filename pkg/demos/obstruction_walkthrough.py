"""Walk through the topological obstruction and the final verdict table.

Run with ``python3 demos/obstruction_walkthrough.py``.
"""

from szabo.obstruction import phi_bounds_check, techn_case3, wolf_verdict, z2_pow_one_plus_x

# Stiefel-Whitney classes live in Z2[x]/(x^(n+1)); (1+x)^r follows Lucas.
print("(1+x)^6 mod x^8 has coefficients", z2_pow_one_plus_x(6, 7).coeffs())

# The Radon-Hurwitz style count phi(n) and the bound 2^phi > n+1.
for n in (7, 10, 13):
    b = phi_bounds_check(n)
    print(f"n={n}: phi={b.phi}, j={b.j}, 2^phi > n+1: {b.order_exceeds}")

# A single case-3 trace: every positive rank is ruled out.
trace = techn_case3(12, 10, 4)
print()
print(trace.render())
print("replays:", trace.replay())

# The verdict table for small signatures.
print()
print("    " + " ".join(f"{q:>2}" for q in range(13)))
for p in range(13):
    row = ["S " if wolf_verdict(p, q).symmetric else ". " for q in range(13)]
    print(f"{p:>2}  " + " ".join(row))
