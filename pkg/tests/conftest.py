import sys

import pytest

from multiamdahl import Scenario, UnitModel, Workload, preset_hpc, preset_multi_accelerator


@pytest.fixture
def hpc():
    return preset_hpc()


@pytest.fixture
def multi():
    return preset_multi_accelerator()


def make_scenario(units, times, area=1.0, **kw):
    """Scenario from ``(alpha, beta, efficiency)`` triples."""
    return Scenario(
        area_budget=area,
        units=tuple(UnitModel(f"u{i}", *u) for i, u in enumerate(units)),
        workload=Workload(tuple(times)),
        **kw,
    )


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(k))
