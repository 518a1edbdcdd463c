"""Mass, energy and momentum along a defocusing cubic run.

Strang splitting keeps the L^2 norm to roundoff.  The energy error is
second order in dt, so halving the step cuts the drift by four.
"""
import numpy as np

from fsps import InitialCondition, SimConfig, make_grid, run_simulation

grid = make_grid(20.0, 1024)
drifts = []
for dt in (2e-3, 1e-3, 5e-4):
    cfg = SimConfig(sigma=1 / 3, gamma=3, alpha=1, grid=grid, dt=dt, t_end=1.0,
                    initial=InitialCondition(kind="plane_modulated", wavenumber=0.5),
                    record_every=int(round(0.05 / dt)))
    tr = run_simulation(cfg)
    d = tr.diagnostics
    mass = max(abs(r.mass - d[0].mass) for r in d) / d[0].mass
    energy = max(abs(r.energy - d[0].energy) for r in d) / abs(d[0].energy)
    mom = max(abs(r.momentum - d[0].momentum) for r in d) / abs(d[0].momentum)
    drifts.append(energy)
    print(f"dt={dt:.0e}: mass {mass:.1e}  energy {energy:.2e}  momentum {mom:.1e}  {tr.status.kind}")
print("energy drift ratios:", np.round(np.array(drifts[:-1]) / drifts[1:], 3))
