import math

import pytest

from multiamdahl import (
    Scenario,
    SystemPowerSpec,
    UnitModel,
    Workload,
    fraction_to_power,
    power_to_fraction,
    preset_hpc,
    preset_multi_accelerator,
    validate,
)
from multiamdahl.config import scenario_from_dict, scenario_to_dict

from conftest import make_scenario


def test_presets_are_valid(hpc, multi):
    assert validate(hpc) == []
    assert validate(multi) == []


def test_positive_alpha_is_one_violation(hpc):
    bad = hpc.with_unit(0, alpha=0.5)
    out = validate(bad)
    assert len(out) == 1
    assert "alpha" in out[0].field
    assert "< 0" in out[0].rule


def test_workload_length_mismatch(multi):
    bad = multi.with_times(multi.workload.times[:4])
    out = validate(bad)
    assert len(out) == 1
    assert out[0].field == "workload"
    assert "length" in out[0].rule


@pytest.mark.parametrize(
    "changes, field",
    [
        (dict(area_budget=0.0), "area_budget"),
        (dict(dynamic_weight=0.5), "dynamic_weight"),
        (dict(objective_kind="speed"), "objective_kind"),
        (dict(system_power=SystemPowerSpec("fraction", 1.0)), "system_power.value"),
        (dict(system_power=SystemPowerSpec("absolute", -1.0)), "system_power.value"),
        (dict(system_power=SystemPowerSpec("watts", 1.0)), "system_power.mode"),
        (dict(workload=Workload((0.0, 0.0))), "workload"),
        (dict(units=()), "units"),
    ],
)
def test_each_rule_is_reported(hpc, changes, field):
    out = validate(hpc.replace(**changes))
    assert field in [v.field for v in out]


def test_beta_and_efficiency_rules():
    sc = make_scenario([(-0.5, 0.0, 1.0), (-1.0, 1.0, -2.0)], [1, 1])
    fields = [v.field for v in validate(sc)]
    assert any(f.endswith(".beta") for f in fields)
    assert any(f.endswith(".efficiency") for f in fields)


def test_hpc_split():
    sc = preset_hpc(0.5)
    assert sc.workload.times == (0.5, 0.5)
    sc = preset_hpc(0.9)
    assert sc.workload.times[1] == 0.9
    assert sc.workload.times[0] == pytest.approx(0.1, abs=1e-15)
    assert (sc.units[0].alpha, sc.units[0].beta) == (-0.5, 0.875)
    assert (sc.units[1].alpha, sc.units[1].beta) == (-1.0, 1.0)
    assert sc.area_budget == 1.0


@pytest.mark.parametrize("f", [0.01, 0.3, 0.5, 0.77, 0.99])
def test_hpc_times_sum_to_one(f):
    assert math.isclose(sum(preset_hpc(f).workload.times), 1.0, rel_tol=0, abs_tol=1e-15)


@pytest.mark.parametrize("f", [0.0, 1.0, -0.1, 1.5])
def test_hpc_rejects_fraction(f):
    with pytest.raises(ValueError):
        preset_hpc(f)


@pytest.mark.parametrize("kw", [dict(alpha_vpu=-0.5), dict(alpha_vpu=-1.1), dict(beta_vpu=0.9), dict(beta_vpu=1.3)])
def test_hpc_exponent_overrides_stay_in_range(kw):
    with pytest.raises(ValueError):
        preset_hpc(**kw)


def test_multi_accelerator_table():
    sc = preset_multi_accelerator()
    eff = {u.name: u.efficiency for u in sc.units}
    assert eff == {"CPU": 1.0, "DMM": 39.0, "FFT1024": 692.0, "FFT16": 2804.0, "BlackScholes": 24.0}
    times = dict(zip(sc.unit_names, sc.workload.times))
    assert times["CPU"] == 0.4
    assert all(times[n] == 0.9 for n in ("DMM", "FFT1024", "FFT16", "BlackScholes"))
    cpu = sc.units[0]
    assert (cpu.alpha, cpu.beta) == (-0.5, 0.875)


def test_efficiencies_round_trip(multi):
    again = scenario_from_dict(scenario_to_dict(multi))
    assert again == multi
    assert [u.efficiency for u in again.units] == [1.0, 39.0, 692.0, 2804.0, 24.0]


@pytest.mark.parametrize("s", [0.0, 0.02, 0.5, 0.95])
def test_fraction_mapping(s):
    p = fraction_to_power(s)
    assert p / (p + 1.0) == pytest.approx(s, rel=1e-14, abs=1e-15)
    assert power_to_fraction(p) == pytest.approx(s, rel=1e-14, abs=1e-15)


def test_fraction_95_percent_is_19():
    assert fraction_to_power(0.95) == pytest.approx(19.0, rel=1e-12)


def test_system_power_spec():
    sc = preset_hpc(system_power=SystemPowerSpec.fraction(0.5))
    assert sc.p_sys == pytest.approx(1.0)
    assert preset_hpc(system_power=SystemPowerSpec("absolute", 3.0)).p_sys == 3.0
    with pytest.raises(ValueError):
        fraction_to_power(1.0)


def test_scenarios_are_immutable(hpc):
    with pytest.raises(AttributeError):
        hpc.area_budget = 2.0
    assert isinstance(hpc.units, tuple)


def test_gamma():
    assert UnitModel("x", -0.5, 0.875).gamma == pytest.approx(0.375)
