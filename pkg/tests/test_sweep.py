import math

import numpy as np
import pytest

from multiamdahl import preset_hpc, solve_delay, solve_energy, solve_two_unit, verify
from multiamdahl.sweep import (
    NAMED_FRACTIONS,
    curve_energy_vs_allocation,
    datacenter_sweep,
    default_s_grid,
    limit_check,
    log_s_grid,
    sweep_psys,
)

from conftest import make_scenario

CORNERS = [(-1.0, 1.0), (-1.0, 1.25), (-0.75, 1.0), (-0.75, 1.25)]


def test_default_grid_includes_named_shares():
    g = default_s_grid()
    assert np.all(np.diff(g) > 0)
    assert len(log_s_grid()) == 33
    for s in NAMED_FRACTIONS:
        assert s in g
    assert g[0] == pytest.approx(0.005) and g[-1] == pytest.approx(0.99)


class TestSweepPsys:
    def test_hpc_cpu_share_nondecreasing(self, hpc):
        t = sweep_psys(hpc)
        a = t.column("CPU")
        assert np.all(np.diff(a) >= 0)
        assert t.rows[-1].label == "delay" and t.rows[-1].s == 1.0
        assert math.isinf(t.rows[-1].p_sys)

    @pytest.mark.parametrize("alpha,beta", CORNERS)
    def test_exponent_corners_keep_trend(self, alpha, beta):
        t = sweep_psys(preset_hpc(alpha_vpu=alpha, beta_vpu=beta))
        a = t.column("CPU")
        assert not np.isnan(a).any()
        assert np.all(np.diff(a) >= 0)

    def test_rows_sorted_and_feasible(self, multi):
        t = sweep_psys(multi, NAMED_FRACTIONS)
        s = [r.s for r in t.rows]
        assert s == sorted(s)
        for r in t.rows:
            assert r.error is None
            assert abs(r.areas.sum() - 1.0) <= 1e-9

    def test_rows_reverify(self, multi):
        t = sweep_psys(multi, NAMED_FRACTIONS)
        for r in t.rows[:-1]:
            res = solve_energy(multi, r.p_sys)
            assert np.array_equal(res.areas, r.areas)
            assert verify(multi, res, r.p_sys, "energy", run_oracle=False).passed

    def test_multi_low_power_structure(self, multi):
        t = sweep_psys(multi, [0.02])
        a = t.rows[0].areas
        names = t.unit_names
        assert np.argmin(a) == names.index("CPU")
        acc = {n: a[k] for k, n in enumerate(names) if n != "CPU"}
        assert max(acc, key=acc.get) == "FFT16"

    def test_multi_high_power_favours_cpu(self, multi):
        a = sweep_psys(multi, [0.95]).rows[0].areas
        assert np.argmax(a) == 0

    def test_unsorted_rejected(self, hpc):
        with pytest.raises(ValueError):
            sweep_psys(hpc, [0.4, 0.1])
        with pytest.raises(ValueError):
            sweep_psys(hpc, [0.1, 1.0])

    def test_failures_are_recorded_per_row(self, hpc, monkeypatch):
        import multiamdahl.sweep as sw

        real = sw.solve_two_unit

        def flaky(scenario, p, settings=None, kind="energy"):
            if p > 1:
                raise sw.ConvergenceError("no convergence")
            return real(scenario, p, settings, kind=kind)

        monkeypatch.setattr(sw, "solve_two_unit", flaky)
        t = sweep_psys(hpc, [0.1, 0.95])
        assert t.rows[0].error is None
        assert t.rows[1].error == "no convergence"
        assert np.isnan(t.rows[1].areas).all()
        assert t.rows[2].label == "delay"


class TestCurves:
    def test_normalized_minimum_is_one(self, hpc):
        ct = curve_energy_vs_allocation(hpc)
        for c in ct.curves:
            assert c.normalized[c.argmin] == 1.0
            assert np.min(c.normalized) == 1.0
            assert c.argmin == int(np.argmin(c.energy))

    def test_argmins_increase_with_power(self, hpc):
        xs = [c.x_opt for c in curve_energy_vs_allocation(hpc).curves]
        assert all(a < b for a, b in zip(xs, xs[1:]))

    def test_argmin_matches_solver(self, hpc):
        ct = curve_energy_vs_allocation(hpc, n_points=401)
        for c in ct.curves:
            spacing = c.x[1] - c.x[0]
            assert abs(c.x_opt - solve_two_unit(hpc, c.p_sys).areas[0]) <= spacing

    def test_high_power_near_delay(self, hpc):
        c = curve_energy_vs_allocation(hpc, [0.95]).curves[0]
        assert abs(c.x_opt - solve_delay(hpc).areas[0]) < 0.02

    def test_requires_two_units(self, multi, hpc):
        with pytest.raises(ValueError):
            curve_energy_vs_allocation(multi)
        with pytest.raises(ValueError):
            curve_energy_vs_allocation(hpc, n_points=8)


class TestLimit:
    @pytest.mark.parametrize("fixture", ["hpc", "multi"])
    def test_presets_pass(self, fixture, request):
        rep = limit_check(request.getfixturevalue(fixture))
        assert rep.nonincreasing
        assert rep.gaps[-1] < 0.01
        assert rep.passed

    def test_single_unit_gap_is_zero(self):
        sc = make_scenario([(-0.5, 0.875, 1)], [1.0])
        rep = limit_check(sc)
        assert np.all(rep.gaps == 0)

    def test_bad_ladder(self, hpc):
        with pytest.raises(ValueError):
            limit_check(hpc, [10, 100])
        with pytest.raises(ValueError):
            limit_check(hpc, [10, 1000, 100])


class TestDatacenter:
    def test_unit_weight_matches_energy_sweep(self, hpc):
        s_vals = [0.02, 0.1, 0.4, 0.95]
        ps = [hpc.fraction_to_power(s) for s in s_vals]
        dc = datacenter_sweep(hpc, 1.0, ps)
        en = sweep_psys(hpc, s_vals)
        for a, b in zip(dc.rows, en.rows):
            assert np.array_equal(a.areas, b.areas)
            assert a.objective == b.objective
            assert a.s == pytest.approx(b.s, rel=1e-12)

    def test_cpu_share_rises_with_constant_power(self, hpc):
        dc = datacenter_sweep(hpc, 2.0, [0.02, 0.1, 1.0, 19.0])
        a = dc.column("CPU", "datacenter")
        assert np.all(np.diff(a) > 0)

    def test_doubling_weight_is_halving_power(self, multi):
        dc = datacenter_sweep(multi, 2.0, [0.2, 2.0])
        en = sweep_psys(multi, [0.1 / 1.1, 1.0 / 2.0])
        for a, b in zip(dc.rows[:2], en.rows[:2]):
            assert np.max(np.abs(a.areas - b.areas)) <= 1e-6

    def test_bad_inputs(self, hpc):
        with pytest.raises(ValueError):
            datacenter_sweep(hpc, 0.5, [0.1])
        with pytest.raises(ValueError):
            datacenter_sweep(hpc, 2.0, [1.0, 0.1])
