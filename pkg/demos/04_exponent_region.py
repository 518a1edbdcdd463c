"""Where the contraction argument closes.

For each (sigma, gamma) the working interval of spatial exponents r is the
intersection of three intervals.  The raster below marks feasible cells with
'#'; the gamma = 3 row is feasible exactly for sigma <= 1/2.
"""
from fractions import Fraction as F

from fsps import derived_exponents, region_raster, scaling_sigma, working_interval

sig = [F(k, 40) for k in range(1, 40)]
gam = [F(k, 10) for k in range(50, 10, -2)]
ras = region_raster(sig, gam)
for g, row in zip(gam, ras.feasible):
    print(f"gamma={float(g):4.1f} |" + "".join("#" if v else "." for v in row) + "|")
print(" " * 11 + f"sigma from {float(sig[0])} to {float(sig[-1])}")

rep = working_interval(F(1, 3), 3)
print(f"I(1/3, 3) = [{rep.interval.lo}, {rep.interval.hi}], sample r = {rep.sample_r}")
d = derived_exponents(3, F(1, 3), 3)
pairs = ", ".join(f"({q}, {r})" for q, r in d.dual_pairs)
print(f"dual pairs at r=3: {pairs}; consistent: {d.consistent}")
p = scaling_sigma(F(5, 2))
print("scale-invariant sigma for gamma=5/2:", p.sigma, "amplitude exponent:", p.amplitude_exponent)
