"""Free Schroedinger flow of a Gaussian.

The Gaussian exp(-x^2) spreads as (1+2it)^{-1/2} exp(-x^2/(1+2it)); its peak
decays like (1+4t^2)^{-1/4}.  The spectral propagator reproduces both to
roundoff as long as the wave stays away from the box edge.
"""
import numpy as np

from fsps import WaveField, free_propagate, lp_norm, make_grid

grid = make_grid(20.0, 2048)
f = WaveField(grid, np.exp(-grid.x ** 2))

print(f"{'t':>5} {'rel L2 err':>12} {'peak*(1+4t^2)^1/4':>20}")
for t in (0.0, 0.5, 1.0, 2.0, 4.0):
    psi = free_propagate(f, t)
    exact = (1 + 2j * t) ** -0.5 * np.exp(-grid.x ** 2 / (1 + 2j * t))
    err = np.linalg.norm(psi.values - exact) / np.linalg.norm(exact)
    print(f"{t:5.1f} {err:12.2e} {lp_norm(psi, np.inf) * (1 + 4 * t * t) ** 0.25:20.12f}")

# the flow is a group: running backwards undoes it
back = free_propagate(free_propagate(f, 3.0), -3.0)
print("group inverse error:", np.linalg.norm(back.values - f.values) / np.linalg.norm(f.values))
