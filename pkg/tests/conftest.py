import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gwright import WrightParams, load_family, validate  # noqa: E402

_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        number, title = mark.args
        ok = outcome.excinfo is None
        _CRITERIA.append((number, title, ok, time.perf_counter() - start))
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {title}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, secs in sorted(_CRITERIA):
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.1f} s)")


@pytest.fixture(scope="session")
def gaussian():
    return load_family("gaussian")


@pytest.fixture(scope="session")
def ml05():
    return load_family("ml05")


@pytest.fixture(scope="session")
def ml09():
    return load_family("ml09")


@pytest.fixture(scope="session")
def gamma_family():
    """Mixing density tau e^-tau (not entire; radius 1)."""
    return validate(WrightParams(upper=(), lower=((1.0, 1.0),)))


@pytest.fixture(scope="session", params=["ml05", "ml09"])
def ml_family(request):
    return load_family(request.param)
