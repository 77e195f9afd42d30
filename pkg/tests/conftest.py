"""Shared fixtures and the acceptance-line reporter.

Tests marked ``@pytest.mark.acceptance("<name>")`` are release gate
checks; after the run a summary block prints one line per check:

    ACCEPTANCE <name>: PASS|FAIL|SKIP
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from indiv_probe import consecutive_profile, distance_stack
from indiv_probe.kernels import HAVE_NUMBA

_ACCEPTANCE = pytest.StashKey()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or not mark.args:
        return
    name = mark.args[0]
    results = item.config.stash[_ACCEPTANCE]
    if report.skipped:
        results[name] = "SKIP"
    elif report.failed:
        results[name] = "FAIL"
    elif report.when == "call" and report.passed:
        # setup/teardown success alone is not a pass
        results.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.write_sep("-", "acceptance gate")
    for name, status in results.items():
        terminalreporter.write_line(f"ACCEPTANCE {name}: {status}")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return Path(str(resources.files("indiv_probe") / "data"))


@pytest.fixture(scope="session")
def bundled_lexicon_path(data_dir) -> Path:
    return data_dir / "table1_lexicon.tsv"


@pytest.fixture(scope="session")
def fixtures_dir(data_dir) -> Path:
    return data_dir / "fixtures"


@pytest.fixture(scope="session")
def warm_kernels():
    """Trigger any jit compilation before timing-sensitive tests run."""
    stack = np.random.default_rng(0).normal(size=(2, 3, 4))
    for backend in ("numpy",) + (("numba",) if HAVE_NUMBA else ()):
        distance_stack(stack, backend=backend)
        consecutive_profile(stack, backend=backend)
