import numpy as np
import pytest

from vortex_waves import PhysicalParams, SurfaceField, make_grid


def band_limited(grid, rng, jmax, scale=1.0):
    """Random real field whose spectrum is confined to ``1 <= j <= jmax``."""
    n = grid.n_points
    c = np.zeros(n // 2 + 1, dtype=complex)
    c[1:jmax + 1] = rng.normal(size=jmax) + 1j * rng.normal(size=jmax)
    return SurfaceField(grid, scale * grid.to_physical(c * n / np.sqrt(jmax)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def lab():
    """Reference long-wave setting: h = 10 m, K = 0.05 1/m, 800 m box."""
    return make_grid(1024, 800.0, -400.0), PhysicalParams(h=10.0, g=9.81, K=0.05)


# acceptance criteria report ---------------------------------------------

_CRITERIA: dict[int, tuple] = {}


@pytest.fixture
def criterion():
    """Record ``(number, name, measured, bound, passed)`` for the end-of-run report."""
    def record(number, name, measured, bound, passed):
        passed = bool(passed)
        _CRITERIA[number] = (name, measured, bound, passed)
        print(f"criterion {number:2d} {name}: {'PASS' if passed else 'FAIL'}")
        return passed
    return record


def _fmt(v):
    if isinstance(v, (tuple, list)):
        return "; ".join(_fmt(x) for x in v)
    if isinstance(v, str):
        return v
    return f"{float(v):.4g}"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        if n not in _CRITERIA:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN")
            continue
        name, measured, bound, passed = _CRITERIA[n]
        terminalreporter.write_line(
            f"criterion {n:2d} {name}: measured {_fmt(measured)}, bound {_fmt(bound)}: "
            f"{'PASS' if passed else 'FAIL'}")
