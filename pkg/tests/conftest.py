import pytest

from fsps.config import InitialCondition, SimConfig
from fsps.spectral import make_grid


@pytest.fixture
def make_cfg():
    def build(**kw):
        base = dict(sigma=1 / 3, gamma=3, alpha=1, grid=make_grid(20.0, 256), dt=1e-3,
                    t_end=0.1, initial=InitialCondition(), record_every=10 ** 9)
        base.update(kw)
        return SimConfig(**base)
    return build


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
