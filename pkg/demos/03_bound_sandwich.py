"""Two-sided bounds on the expected real-root count.

For every shape, the expectation is sandwiched between the square root of
the generic complex-root count (below) and the scaled permanent of the
square-rooted degree matrix (above).  The bounds are attained exactly on
the simply reducible shapes and are strict otherwise.
"""

from mhroots import bounds, validate
from mhroots.corpus import random_shape

print(f"{'degrees':<34} {'lower':>9} {'estimate':>9} {'upper':>9}  tight")
shown = 0
t = 0
while shown < 12:
    spec = random_shape(2024, t, max_n=4, max_degree=3)
    t += 1
    if spec.n == 0:
        continue
    rep = bounds(spec, samples=50_000, seed=100 + t)
    label = str([list(r) for r in spec.degrees])
    if len(label) > 33:
        label = label[:30] + "..."
    print(
        f"{label:<34} {rep.lower:>9.4f} {rep.estimate.value:>9.4f} {rep.upper:>9.4f}"
        f"  {'yes' if rep.equality else 'no'}"
    )
    shown += 1

print()
print("the bilinear case has macroscopic gaps:")
rep = bounds(validate((1, 1), [[1, 1], [1, 1]]))
print(f"  upper  {rep.upper:.6f}   (= 2, the generic complex count)")
print(f"  value  {rep.estimate.value:.6f}   (= pi/2)")
print(f"  lower  {rep.lower:.6f}   (= sqrt(2))")
print(f"  margins: {rep.margin_upper:.4f} above, {rep.margin_lower:.4f} below")
