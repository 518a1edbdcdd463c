import json
import subprocess
import sys

import pytest

from fsps.cli import ConfigError, canonical_text, config_hash, main, parse_config, _parser_from_text
from fsps.errors import FSPSError

MINIMAL = """
[problem]
sigma = 0.3333333333333333
gamma = 3
alpha = +1
[grid]
L = 20
N = 256
[time]
dt = 1e-3
t_end = 0.02
"""


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_parse_minimal_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.gamma == 3 and cfg.alpha == 1 and cfg.grid.n_points == 256
    assert cfg.record_every == 1 and cfg.poisson_backend == "spectral"
    assert cfg.blowup_h1_cap == 1e4 and cfg.initial.kind == "gaussian"


def test_parse_fraction_sigma():
    assert parse_config(MINIMAL.replace("0.3333333333333333", "1/3")).sigma == pytest.approx(1 / 3)


@pytest.mark.parametrize("old,new,msg", [
    ("gamma = 3", "gamma = 0.5", "gamma must exceed 1"),
    ("sigma = 0.3333333333333333", "sigma = 1.0", r"sigma must lie strictly inside \(0,1\)"),
    ("alpha = +1", "alpha = 2", "problem.alpha"),
    ("N = 256", "N = 100", "power of two"),
    ("N = 256", "N = 25x", "grid.N"),
    ("[time]", "[time]\nfoo = 1", "unknown key time.foo"),
    ("[time]", "[extra]\n[time]", r"unknown section \[extra\]"),
    ("L = 20\n", "", "missing required key grid.L"),
])
def test_parse_errors(old, new, msg):
    with pytest.raises((ConfigError, FSPSError), match=msg):
        parse_config(MINIMAL.replace(old, new))


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "blowup_h1_cap" in out and "default '1e4'" in out


def test_hash_canonical():
    a = _parser_from_text(MINIMAL)
    b = _parser_from_text(MINIMAL.replace("gamma = 3", "gamma   =   3"))
    assert canonical_text(a) == canonical_text(b) and config_hash(a) == config_hash(b)
    c = _parser_from_text(MINIMAL.replace("gamma = 3", "gamma = 2"))
    assert config_hash(a) != config_hash(c)


def test_simulate_outputs_and_determinism(tmp_path):
    cfgp = write(tmp_path, MINIMAL + "record_every = 10\n")
    for out in ("a", "b"):
        assert main(["simulate", "--config", str(cfgp), "--out", str(tmp_path / out)]) == 0
    for name in ("diagnostics.csv", "snapshots/snapshot_00000.txt", "snapshots/snapshot_00002.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    m = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert m["status"] == "completed" and len(m["config_hash"]) == 64
    assert m["config_hash"] == json.loads((tmp_path / "b" / "manifest.json").read_text())["config_hash"]
    assert {"start", "end", "tool_version", "artifacts"} <= set(m)


def test_simulate_exit_codes(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.ini"), "--out", str(tmp_path)]) == 64
    assert main(["simulate", "--out", str(tmp_path)]) == 64
    bad = write(tmp_path, MINIMAL.replace("gamma = 3", "gamma = 0.5"), "bad.ini")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 65
    blow = write(tmp_path, """
[problem]
sigma = 0.1
gamma = 5
alpha = -1
[grid]
L = 10
N = 1024
[time]
dt = 1e-4
t_end = 1
record_every = 1000
[initial]
width = 0.25
l2_norm = 3.397491496892491
[numerics]
blowup_h1_cap = 100
""", "blow.ini")
    assert main(["simulate", "--config", str(blow), "--out", str(tmp_path / "bl")]) == 2
    nan = write(tmp_path, MINIMAL.replace("gamma = 3", "gamma = 5") +
                "[initial]\namplitude = 1e100\n[numerics]\nblowup_h1_cap = 1e300\n", "nan.ini")
    assert main(["simulate", "--config", str(nan), "--out", str(tmp_path / "nan")]) == 3


def test_usage_errors():
    assert main([]) == 64
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 64


def test_region(tmp_path):
    assert main(["region", "--sigma", "0.01:0.99:99", "--gamma", "3", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "region.csv").read_text().splitlines()
    assert rows[0] == "sigma,gamma,feasible,interval_lo,interval_hi,lo_open,hi_open"
    feas = {float(r.split(",")[0]): r.split(",")[2] == "true" for r in rows[1:]}
    assert all(v == (s <= 0.5) for s, v in feas.items())
    assert (tmp_path / "region.svg").read_text().startswith("<svg")
    assert main(["region", "--sigma", "a:b", "--gamma", "3", "--out", str(tmp_path)]) == 65


def test_sweep(tmp_path, monkeypatch):
    cfgp = write(tmp_path, MINIMAL)
    monkeypatch.setenv("FSPS_WORKERS", "2")
    out = tmp_path / "sw"
    code = main(["sweep", "--config", str(cfgp), "--param", "problem.alpha=1,-1",
                 "--param", "problem.gamma=2,3", "--out", str(out)])
    assert code == 0
    rows = (out / "summary.csv").read_text().splitlines()
    assert rows[0].startswith("run,problem.alpha,problem.gamma,status")
    assert len(rows) == 5 and all(",completed," in r for r in rows[1:])
    assert all((out / f"run_{i:04d}" / "manifest.json").exists() for i in range(4))
    out2 = tmp_path / "sw2"
    main(["sweep", "--config", str(cfgp), "--param", "problem.alpha=1,-1",
          "--param", "problem.gamma=2,3", "--workers", "1", "--out", str(out2)])
    assert (out / "summary.csv").read_text() == (out2 / "summary.csv").read_text()
    assert main(["sweep", "--config", str(cfgp), "--out", str(out)]) == 64


def test_gronwall_cli(tmp_path):
    spec = tmp_path / "g.json"
    spec.write_text(json.dumps({"instances": 3, "mesh_sizes": [128],
                                "bounds": [{"kind": "gamma", "C1": 1, "rho": 1, "a_norm": 1},
                                           {"kind": "exp", "C2": 1, "p": "inf", "q": 1,
                                            "a_norm": 1}]}))
    assert main(["gronwall", "--config", str(spec), "--seed", "5", "--out", str(tmp_path / "a")]) == 0
    assert main(["gronwall", "--config", str(spec), "--seed", "5", "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "gronwall_report.json").read_text()
    assert a == (tmp_path / "b" / "gronwall_report.json").read_text()
    rep = json.loads(a)
    assert rep["passed"] and rep["bounds"][0]["value"] == 12.0
    assert main(["gronwall", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path)]) == 64
    spec.write_text('{"bogus": 1}')
    assert main(["gronwall", "--config", str(spec), "--out", str(tmp_path)]) == 65


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "fsps", "region", "--sigma", "0.5", "--gamma", "3",
                        "--out", str(tmp_path)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
