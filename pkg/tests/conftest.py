import numpy as np
import pytest

_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def criterion(request):
    """Record one acceptance-criterion outcome for the end-of-run summary."""
    store = request.config.stash.setdefault(_CRITERIA, [])

    def record(number, title, ok, detail=""):
        # ok=None marks a criterion that could not be evaluated here
        store.append((number, title, None if ok is None else bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(_CRITERIA, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(rows, key=lambda r: r[0]):
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        terminalreporter.write_line(f"[{status}] {number}. {title}  {detail}")
