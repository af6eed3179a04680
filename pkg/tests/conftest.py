import numpy as np
import pytest


def ring3() -> np.ndarray:
    g = np.ones((3, 3))
    g[1, 1] = 0.0
    return g


def two_rings5() -> np.ndarray:
    # two unit rings sharing one corner pixel, holes at (1, 1) and (3, 3)
    return np.array(
        [
            [1, 1, 1, 0, 0],
            [1, 0, 1, 0, 0],
            [1, 1, 1, 1, 1],
            [0, 0, 1, 0, 1],
            [0, 0, 1, 1, 1],
        ],
        dtype=float,
    )


def disc_or_annulus(size: int, center, r_out: float, r_in: float = 0.0) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size]
    rr = np.hypot(yy - center[0], xx - center[1])
    return ((rr <= r_out) & (rr >= r_in)).astype(float)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance reporting: one PASS/FAIL line per criterion -------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if "criterion" in report.keywords:
            _criteria[report.nodeid] = report


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            item.user_properties.append(("criterion", mark.args))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    rows = []
    for report in _criteria.values():
        props = dict(report.user_properties)
        number, title = props["criterion"]
        status = "PASS" if report.passed else "FAIL"
        rows.append((number, f"AC{number:02d} {status}  {title}  {props.get('detail', '')}".rstrip()))
    for _, line in sorted(rows):
        terminalreporter.write_line(line)
