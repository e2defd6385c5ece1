"""Shared fixtures and the acceptance report channel.

Acceptance tests append one line per checked bullet to ACCEPTANCE_LINES via
`record`; the terminal-summary hook prints the collected report after the
run so the pass/fail lines survive pytest's output capture.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spinwall import MaterialParams

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=120,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

ACCEPTANCE_LINES: list[str] = []


def record(tag: str, ok: bool, detail: str) -> bool:
    """Append a pass/fail line for one acceptance bullet; returns ok."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance report")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def params_factory():
    def make(h, ccp=0.0, alpha=1.0, beta=0.75, mu=-1.0):
        return MaterialParams(alpha=alpha, beta=beta, mu=mu, ccp=ccp, h=h)

    return make


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260825)
