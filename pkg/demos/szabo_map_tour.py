"""Build a Szabo map from a random curvature derivative and inspect it.

Run with ``python3 demos/szabo_map_tour.py``.
"""

from fractions import Fraction

from szabo.curvature import check_symmetries, random_symmetric_tensor, szabo_polymap, thm2_check
from szabo.exactpoly import Signature
from szabo.polydep import dependence_degree, descent_chain, random_family
from szabo.spectral import constant_profile_fixture, eqny_identity_check, spec_profile
from szabo.szaboclass import pclass_check

sig = Signature(1, 2)
T = random_symmetric_tensor(sig, seed=4)
print("symmetry violations:", check_symmetries(T))

S = szabo_polymap(T)
print("S is a cubic map; S(1, 1/2, 0) =")
for row in S.evaluate((1, Fraction(1, 2), 0)).rows:
    print("   ", [str(x) for x in row])
print("member of P_1:", pclass_check(S).member)
print("zero iff pointwise zero:", thm2_check(T).equivalent)

# Dependence along the nullcone: k factors of q come off one at a time.
F = random_family(Signature(2, 2), 3, 2, 2, seed=1)
print()
print("dependence degree k =", dependence_degree(F))
for step in descent_chain(F, seed=1):
    print(f"  descent {step.k_before} -> {step.k_after}, identity holds: {step.identity_holds}")

# A map with constant spectral profile (it lies outside P, see README).
C = constant_profile_fixture(1)
prof = spec_profile(C)
print()
print("constant-profile fixture: l =", prof.l, "sigma =", [str(s) for s in prof.sigma])
print("identity holds:", eqny_identity_check(C, prof).holds)
print("generic map:", eqny_identity_check(S, spec_profile(S)).diagnosis)
