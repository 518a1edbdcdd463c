"""Focusing quintic runs below and above the mass threshold.

Below delta = (2/3)^{1/4} (pi/2)^{1/2} the H^1 norm stays put.  A narrow
Gaussian with three times that mass collapses; the detector reruns at dt/2
before labelling the event.
"""
import numpy as np

from fsps import InitialCondition, SimConfig, critical_threshold, make_grid, run_simulation

delta = critical_threshold()
grid = make_grid(10.0, 1024)
for factor, width, cap in ((0.5, 1.0, 1e4), (3.0, 0.25, 100.0)):
    cfg = SimConfig(sigma=0.1, gamma=5, alpha=-1, grid=grid, dt=1e-4, t_end=1.0,
                    initial=InitialCondition(width=width, l2_norm=factor * delta),
                    blowup_h1_cap=cap, record_every=500)
    tr = run_simulation(cfg)
    h1 = np.array([r.h1 for r in tr.diagnostics])
    print(f"mass {factor} delta: status={tr.status.kind}  max H1/H1(0)={h1.max() / h1[0]:.2f}")
    if tr.status.message:
        print("   ", tr.status.message)
