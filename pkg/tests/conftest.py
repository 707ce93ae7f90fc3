import numpy as np
import pytest

from reliable_fd.data import Dataset
from reliable_fd.datasets import tic_tac_toe

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion, summarized at the end of the run")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        if report.failed and call.excinfo is not None:
            detail = str(call.excinfo.value).strip().splitlines()[0][:160]
        _ACCEPTANCE.append((marker.args[0], "PASS" if report.passed else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in _ACCEPTANCE:
        line = f"{status}  {label}"
        if detail:
            line += f"  -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def tic():
    return tic_tac_toe()


def random_dataset(rng: np.random.Generator, n: int, d: int, max_domain: int = 4,
                   noise: float | None = None) -> Dataset:
    """Random categorical data where the target depends (noisily) on a few inputs."""
    domains = rng.integers(2, max_domain + 1, size=d)
    cols = {f"A{i}": rng.integers(0, domains[i], size=n) for i in range(d)}
    drivers = rng.choice(d, size=min(d, int(rng.integers(1, 4))), replace=False)
    y = np.zeros(n, dtype=np.int64)
    for j in drivers:
        y = y * 3 + cols[f"A{j}"]
    y = y % int(rng.integers(2, 4))
    flip = rng.random(n) < (rng.uniform(0.0, 0.5) if noise is None else noise)
    y[flip] = rng.integers(0, 3, size=int(flip.sum()))
    if len(np.unique(y)) < 2:
        y[0] = (y[0] + 1) % 3
    cols["Y"] = y
    return Dataset.from_codes(cols, target="Y", name="random")


@pytest.fixture
def make_dataset():
    return random_dataset
