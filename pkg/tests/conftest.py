import os

import pytest
from hypothesis import HealthCheck, settings

from pluckerflag.exactalg import GF, QQ

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FINITE = [GF(2), GF(3), GF(5)]
ALL_FIELDS = FINITE + [QQ]


@pytest.fixture(params=FINITE, ids=lambda f: repr(f))
def finite_field(request):
    return request.param


@pytest.fixture(params=ALL_FIELDS, ids=lambda f: repr(f))
def any_field(request):
    return request.param


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, title, target seconds)."""
    import time

    state = {}

    def start(number, title, target):
        state.update(number=number, title=title, target=target, t0=time.perf_counter())

    yield start
    if state:
        elapsed = time.perf_counter() - state["t0"]
        call = getattr(request.node, "rep_call", None)
        ok = call is not None and call.passed
        line = f"criterion {state['number']:>2}: {'PASS' if ok else 'FAIL'}  {state['title']}  ({elapsed:.2f}s, target < {state['target']}s)"
        ACCEPTANCE_LINES.append(line)
        print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[-1])):
            terminalreporter.write_line(line)
