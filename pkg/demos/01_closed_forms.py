"""Tour of exact expected real-root counts.

For a system of random polynomial equations in k blocks of projective
variables, the expected number of real roots has an exact closed form
whenever the degree matrix factors as degrees[i][j] = d_i * e_j.  This
covers the classical dense homogeneous case (expected count = square root
of the Bezout number), unmixed systems, and the two-player game systems.
"""

import math

from mhroots import closed_form, expectation, game_shape, validate

print("univariate degree d: expected real projective roots = sqrt(d)")
for d in (1, 2, 4, 9, 16):
    res = expectation(validate((1,), [[d]]))
    print(f"  d={d:<3d} -> {res.value:.6f}  (sqrt(d) = {math.sqrt(d):.6f})")

print()
print("dense homogeneous system, degrees (2, 3, 4): sqrt(2*3*4)")
res = expectation(validate((3,), [[2], [3], [4]]))
print(f"  value = {res.value:.6f}   sqrt(24) = {math.sqrt(24):.6f}")

print()
print("bilinear 2x2 system: two blocks of one variable, all degrees 1")
res = expectation(validate((1, 1), [[1, 1], [1, 1]]))
cf = res.closed
print(f"  value = {res.value:.6f}  = pi/2")
print(f"  exact factors: {cf.rational} * pi^({cf.pi_sqrt_power}/2) * sqrt({cf.radicand})")

print()
print("a factoring mixed shape: degrees [[2,4],[3,6]] = (2,3) x (1,2)")
cf = closed_form(validate((1, 1), [[2, 4], [3, 6]]))
print(f"  value = {cf.value:.6f}  = (pi/2) * sqrt(12)")

print()
print("two-player game systems: 1 expected equilibrium when blocks match")
for sizes in ((1, 1), (2, 2), (3, 3), (1, 2), (2, 3)):
    res = expectation(game_shape(sizes))
    print(f"  blocks {sizes}: expected count = {res.value}")

print()
print("block-triangular systems factor; coupling degrees below the diagonal")
print("do not affect the expectation:")
for coupling in (0, 5, 50):
    res = expectation(validate((1, 1), [[2, 0], [coupling, 3]]))
    print(f"  coupling degree {coupling:<3d} -> {res.value:.6f}  (sqrt(6) = {math.sqrt(6):.6f})")
