import numpy as np
import pytest

from newton_ellipsoid.poly import Polynomial

ACCEPTANCE = {}


def poly(*descending):
    """Polynomial from descending coefficients, highest power first."""
    return Polynomial.from_descending(descending)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_roots(gen, n, radius=4.0, min_sep=0.0):
    """``n`` roots uniform in the disk ``|z| <= radius``, pairwise >= ``min_sep`` apart."""
    roots = []
    while len(roots) < n:
        r = radius * np.sqrt(gen.random())
        z = complex(r * np.cos(2 * np.pi * gen.random()), r * np.sin(2 * np.pi * gen.random()))
        if all(abs(z - w) >= min_sep for w in roots):
            roots.append(z)
    return roots


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): exit criterion n")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.keywords.get("acceptance_id")
    if marker is not None:
        ACCEPTANCE[report.nodeid] = (report.outcome, report.duration)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            item.keywords["acceptance_id"] = m.args


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (outcome, duration) in sorted(ACCEPTANCE.items(), key=lambda kv: _order(kv[0])):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {nodeid.split('::')[-1]}  ({duration:.3f}s)")


def _order(nodeid):
    name = nodeid.split("::")[-1]
    digits = "".join(ch for ch in name.split("_")[1] if ch.isdigit()) if "_" in name else ""
    return int(digits) if digits else 0
