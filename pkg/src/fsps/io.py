"""Text file formats: wave-field snapshots and diagnostics CSV.

Floats are written with ``repr`` (shortest round-trip decimal), so reading a
file back reproduces the in-memory values bit for bit.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .spectral import Grid1D, WaveField

SNAPSHOT_MAGIC = "FSPS1"
DIAGNOSTIC_COLUMNS = ("t", "mass", "energy", "momentum", "h1", "sup_norm",
                      "theta", "l4linf_accum")


def fmt(x) -> str:
    return repr(float(x))


def snapshot_text(field: WaveField, t: float) -> str:
    g = field.grid
    lines = [f"{SNAPSHOT_MAGIC} {g.n_points} {fmt(g.half_length)} {fmt(t)}"]
    lines.extend(f"{fmt(z.real)} {fmt(z.imag)}" for z in field.values)
    return "\n".join(lines) + "\n"


def write_snapshot(path, field: WaveField, t: float) -> Path:
    path = Path(path)
    path.write_text(snapshot_text(field, t), encoding="utf-8")
    return path


def read_snapshot(path):
    """Return ``(field, t)`` from a snapshot file."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise ConfigurationError(f"{path}: empty snapshot file")
    head = text[0].split()
    if len(head) != 4 or head[0] != SNAPSHOT_MAGIC:
        raise ConfigurationError(f"{path}: bad snapshot header {text[0]!r}")
    n, half_length, t = int(head[1]), float(head[2]), float(head[3])
    body = text[1:1 + n]
    if len(body) != n:
        raise ConfigurationError(f"{path}: expected {n} samples, found {len(body)}")
    vals = np.empty(n, dtype=complex)
    for j, line in enumerate(body):
        re, im = line.split()
        vals[j] = complex(float(re), float(im))
    return WaveField(Grid1D(half_length, n), vals), t


def diagnostics_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DIAGNOSTIC_COLUMNS)
    for rec in records:
        w.writerow([fmt(getattr(rec, c)) for c in DIAGNOSTIC_COLUMNS])
    return buf.getvalue()


def write_diagnostics(path, records) -> Path:
    path = Path(path)
    path.write_text(diagnostics_csv(records), encoding="utf-8")
    return path
