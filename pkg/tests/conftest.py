import os
import time

import pytest

from toricseeds.pipeline import run_pipeline
from toricseeds.seeddb import SeedDatabase

SLOW = os.environ.get("TORICSEEDS_SLOW") == "1"


@pytest.fixture(scope="session")
def pipeline_runs():
    """Pipeline results for n = 2, 3, 4 with wall times, plus the database they build."""
    db = SeedDatabase.bootstrap()
    results = {}
    for n in (2, 3, 4):
        t0 = time.perf_counter()
        res = run_pipeline(n, db, threads=1)
        results[n] = (res, time.perf_counter() - t0)
        db.set_stratum(n, 4, res.final)
    return db, results


@pytest.fixture(scope="session")
def seed_db(pipeline_runs):
    return pipeline_runs[0]


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.skipped:
        _acceptance.setdefault(name, "SKIP")
    elif report.failed:
        _acceptance[name] = "FAIL"
    elif report.when == "call":
        _acceptance.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _acceptance.items():
        terminalreporter.write_line(f"{status:4} {name}")
