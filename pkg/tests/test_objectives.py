import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiamdahl import (
    UnitModel,
    accel_fn,
    accel_fn_deriv,
    datacenter_objective,
    delay_objective,
    energy_objective,
    kkt_residual,
    marginals,
    power_fn,
)
from multiamdahl.model import preset_multi_accelerator
from multiamdahl.objectives import objective

from conftest import make_scenario

CPU = UnitModel("CPU", -0.5, 0.875, 1.0)
VPU = UnitModel("VPU", -1.0, 1.0, 1.0)


def central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def term_by_term(scenario, areas, w, p):
    """Plain-loop re-evaluation used as the oracle for the vectorized objectives."""
    total = 0.0
    for u, t, a in zip(scenario.units, scenario.workload.times, areas):
        f = math.pow(a, u.alpha) / u.efficiency
        total += (w * math.pow(a, u.beta) + p) * f * t
    return total


class TestUnitFunctions:
    def test_accel_fn(self):
        assert accel_fn(CPU, 1.0) == 1.0
        assert accel_fn(CPU, 0.25) == pytest.approx(2.0, rel=1e-15)
        assert accel_fn(UnitModel("DMM", -1.0, 1.0, 39.0), 1.0) == pytest.approx(1 / 39, rel=1e-15)

    def test_accel_fn_is_decreasing(self):
        a = np.geomspace(1e-6, 10, 50)
        assert np.all(np.diff(accel_fn(CPU, a)) < 0)

    def test_accel_fn_deriv(self):
        assert accel_fn_deriv(VPU, 1.0) == -1.0
        assert accel_fn_deriv(CPU, 1.0) == -0.5
        # -1 / (0.25 * 2804), 30-digit evaluation
        fft16 = UnitModel("FFT16", -1.0, 1.0, 2804.0)
        assert accel_fn_deriv(fft16, 0.5) == pytest.approx(-0.00142653352353780313837, rel=1e-14)
        fd = central_diff(lambda a: accel_fn(fft16, a), 0.5, 1e-6 * 0.5)
        assert accel_fn_deriv(fft16, 0.5) == pytest.approx(fd, rel=1e-6)

    @pytest.mark.parametrize("unit", [CPU, VPU, UnitModel("x", -0.75, 1.25, 692.0), UnitModel("y", -0.9, 1.1, 24.0)])
    @pytest.mark.parametrize("a", [0.01, 0.1, 0.5, 1.0])
    def test_deriv_matches_central_difference(self, unit, a):
        fd = central_diff(lambda x: accel_fn(unit, x), a, 1e-6 * a)
        assert accel_fn_deriv(unit, a) == pytest.approx(fd, rel=1e-6)
        assert accel_fn_deriv(unit, a) < 0

    def test_power_fn(self):
        assert power_fn(CPU, 1.0) == 1.0
        assert power_fn(VPU, 0.3) == pytest.approx(0.3, rel=1e-15)
        assert power_fn(CPU, 0.25) == pytest.approx(0.29730177875068026667937, rel=1e-14)
        assert power_fn(CPU, 0.25) == pytest.approx(math.exp(0.875 * math.log(0.25)), rel=1e-14)

    @pytest.mark.parametrize("fn", [accel_fn, accel_fn_deriv, power_fn])
    @pytest.mark.parametrize("a", [0.0, -1.0, float("nan")])
    def test_nonpositive_area_rejected(self, fn, a):
        with pytest.raises(ValueError):
            fn(CPU, a)


class TestObjectives:
    def test_delay_examples(self):
        two = make_scenario([(-1, 1, 1), (-1, 1, 1)], [1, 1])
        assert delay_objective(two, [0.5, 0.5]) == pytest.approx(4.0, rel=1e-15)
        one = make_scenario([(-0.5, 0.875, 1)], [2])
        assert delay_objective(one, [1.0]) == 2.0

    def test_delay_multi_uniform(self, multi):
        a = np.full(5, 0.2)
        value = delay_objective(multi, a)
        assert value == pytest.approx(term_by_term(multi, a, 0.0, 1.0), rel=1e-14)
        # 0.4 / sqrt(0.2) + 4.5 * (1/39 + 1/692 + 1/2804 + 1/24), 30-digit evaluation
        assert value == pytest.approx(1.20541954677192169633400, rel=1e-14)

    def test_energy_examples(self):
        one = make_scenario([(-1, 1, 1)], [1])
        assert energy_objective(one, [1.0], 0.0) == 1.0
        assert energy_objective(one, [0.5], 0.0) == pytest.approx(1.0, rel=1e-15)

    def test_energy_hpc(self, hpc):
        a = np.array([0.5, 0.5])
        value = energy_objective(hpc, a, 0.1)
        assert value == pytest.approx(term_by_term(hpc, a, 1.0, 0.1), rel=1e-14)
        assert value == pytest.approx(1.05626338447063995834315, rel=1e-14)

    def test_datacenter_reductions(self, hpc):
        a = np.array([0.3, 0.7])
        assert datacenter_objective(hpc, a, 0.1) == energy_objective(hpc, a, 0.1)
        w2 = hpc.replace(dynamic_weight=2.0)
        assert datacenter_objective(w2, a, 0.0) == pytest.approx(2 * energy_objective(hpc, a, 0.0), rel=1e-15)

    def test_datacenter_value(self, hpc):
        sc = hpc.replace(dynamic_weight=2.0)
        a = np.array([0.4, 0.6])
        value = datacenter_objective(sc, a, 0.2)
        assert value == pytest.approx(term_by_term(sc, a, 2.0, 0.2), rel=1e-14)
        assert value == pytest.approx(2.03398670579132674730566, rel=1e-14)

    def test_datacenter_rejects_small_w(self, hpc):
        with pytest.raises(ValueError):
            datacenter_objective(hpc.replace(dynamic_weight=0.5), [0.5, 0.5], 0.1)

    def test_stacked_allocations(self, multi):
        pts = np.array([[0.2] * 5, [0.1, 0.2, 0.3, 0.2, 0.2]])
        vals = energy_objective(multi, pts, 0.3)
        assert vals.shape == (2,)
        assert vals[1] == pytest.approx(energy_objective(multi, pts[1], 0.3), rel=1e-15)

    @pytest.mark.parametrize("areas", [[0.5], [0.5, 0.5, 0.0], [0.5, -0.5], [1.0, 1e-12]])
    def test_bad_areas(self, hpc, areas):
        with pytest.raises(ValueError):
            delay_objective(hpc, areas)

    def test_negative_power_rejected(self, hpc):
        with pytest.raises(ValueError):
            energy_objective(hpc, [0.5, 0.5], -0.1)

    def test_energy_increases_with_psys(self, multi):
        a = np.array([0.3, 0.1, 0.2, 0.25, 0.15])
        vals = [energy_objective(multi, a, p) for p in (0.0, 0.01, 0.1, 1.0, 10.0)]
        assert np.all(np.diff(vals) > 0)

    def test_datacenter_factorizes(self, multi):
        a = np.array([0.3, 0.1, 0.2, 0.25, 0.15])
        sc = multi.replace(dynamic_weight=3.0)
        assert datacenter_objective(sc, a, 0.6) == pytest.approx(3.0 * energy_objective(multi, a, 0.2), rel=1e-14)


class TestMarginals:
    def test_examples(self):
        one = make_scenario([(-1, 1, 1)], [1])
        assert marginals(one, [1.0], "delay")[0] == -1.0
        assert marginals(one, [0.5], "energy", 0.0)[0] == 0.0

    def test_cpu_energy_marginal(self):
        one = make_scenario([(-0.5, 0.875, 1)], [1])
        m = marginals(one, [0.1], "energy", 0.02)[0]
        fd = central_diff(lambda a: energy_objective(one, [a], 0.02), 0.1, 1e-7)
        assert m == pytest.approx(fd, rel=1e-5)
        # 30-digit derivative of (a**0.875 + 0.02) * a**-0.5 at 0.1
        assert m == pytest.approx(1.26513412184034549893391, rel=1e-13)

    def test_unknown_kind(self, hpc):
        with pytest.raises(ValueError):
            marginals(hpc, [0.5, 0.5], "power")

    @settings(max_examples=60, deadline=None)
    @given(
        raw=st.lists(st.floats(0.02, 1.0), min_size=5, max_size=5),
        p=st.floats(0.0, 20.0),
        w=st.floats(1.0, 4.0),
        kind=st.sampled_from(["delay", "energy", "datacenter"]),
    )
    def test_matches_finite_difference(self, raw, p, w, kind):
        sc = preset_multi_accelerator().replace(dynamic_weight=w)
        a = np.array(raw) / np.sum(raw)
        m = marginals(sc, a, kind, p)
        for i in range(5):
            h = 1e-6 * a[i]

            def f(x):
                b = a.copy()
                b[i] = x
                return float(objective(sc, b, kind, p))

            fd = central_diff(f, a[i], h)
            assert m[i] == pytest.approx(fd, rel=1e-5, abs=1e-9 * abs(f(a[i])) / a[i])


class TestKKTResidual:
    def test_symmetric_split_is_stationary(self):
        sc = make_scenario([(-1, 1, 1), (-1, 1, 1)], [1, 1])
        assert kkt_residual(sc, [0.5, 0.5], "delay") == 0.0

    def test_perturbation_is_detected(self):
        sc = make_scenario([(-1, 1, 1), (-1, 1, 1)], [1, 1])
        assert kkt_residual(sc, [0.51, 0.49], "delay") > 0

    def test_include_mask(self):
        sc = make_scenario([(-1, 1, 1), (-1, 1, 1), (-1, 1, 1)], [1, 1, 1])
        a = [0.4, 0.4, 0.2]
        assert kkt_residual(sc, a, "delay", include=[True, True, False]) == 0.0
        assert kkt_residual(sc, a, "delay") > 0
