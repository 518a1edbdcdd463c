import numpy as np
import pytest

from fsps.config import InitialCondition
from fsps.dynamics import run_simulation
from fsps.errors import ConfigurationError
from fsps.io import diagnostics_csv, read_snapshot, snapshot_text, write_snapshot
from fsps.spectral import WaveField, make_grid


def test_snapshot_format_and_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    g = make_grid(np.pi, 16)
    f = WaveField(g, rng.normal(size=16) + 1j * rng.normal(size=16))
    p = write_snapshot(tmp_path / "s.txt", f, 0.1)
    lines = p.read_text().splitlines()
    assert lines[0] == f"FSPS1 16 {repr(np.pi)} 0.1"
    assert len(lines) == 17
    back, t = read_snapshot(p)
    assert t == 0.1 and back.grid == g and np.array_equal(back.values, f.values)


def test_snapshot_as_initial_condition(tmp_path, make_cfg):
    cfg = make_cfg(t_end=0.02)
    tr = run_simulation(cfg)
    p = write_snapshot(tmp_path / "s.txt", tr.final, tr.times[-1])
    f = InitialCondition(kind="from_file", path=str(p)).build(cfg.grid)
    assert np.array_equal(f.values, tr.final.values)
    with pytest.raises(ConfigurationError):
        InitialCondition(kind="from_file", path=str(p)).build(make_grid(20.0, 512))


def test_bad_snapshot(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("FSPS2 8 1.0 0.0\n")
    with pytest.raises(ConfigurationError):
        read_snapshot(p)
    p.write_text("FSPS1 8 1.0 0.0\n0.0 0.0\n")
    with pytest.raises(ConfigurationError):
        read_snapshot(p)


def test_diagnostics_csv_header_and_floats(make_cfg):
    tr = run_simulation(make_cfg(t_end=0.01, record_every=5))
    text = diagnostics_csv(tr.diagnostics)
    rows = text.splitlines()
    assert rows[0] == "t,mass,energy,momentum,h1,sup_norm,theta,l4linf_accum"
    first = rows[1].split(",")
    assert float(first[1]) == tr.diagnostics[0].mass
    assert first[1] == repr(tr.diagnostics[0].mass)


def test_snapshot_text_deterministic():
    g = make_grid(2.0, 8)
    f = WaveField(g, np.exp(-g.x ** 2))
    assert snapshot_text(f, 0.0) == snapshot_text(WaveField(g, f.values.copy()), 0.0)
