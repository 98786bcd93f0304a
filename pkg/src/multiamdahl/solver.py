"""Optimal area allocation under a fixed chip budget.

Every objective handled here is separable: unit ``i`` contributes

    g_i(a) = c_i * (w * a**gamma_i + P * a**alpha_i),   c_i = t_i / e_i,

with ``(w, P) = (0, 1)`` for delay, ``(1, P_sys)`` for energy and
``(w, P_const)`` for the data-center objective. At an interior optimum all
marginals ``g_i'(a_i)`` are equal to the multiplier ``lam``.

Solvers
-------
solve_delay       closed form for equal exponents, dual bisection otherwise
solve_energy      dual bisection on ``lam < 0``; direct search when the
                  unconstrained per-unit minima do not fill the chip
solve_two_unit    seeded golden-section on the one-dimensional split
brute_force_oracle exhaustive simplex grid, used as an independent check
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import objectives as obj
from .model import AllocationResult, Scenario, validate

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
SEED_INTERVALS = 64


class ConvergenceError(RuntimeError):
    """A solver did not meet its tolerances within the iteration budget."""


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and budgets. Area-like quantities are fractions of ``A``."""

    feasibility_tol: float = 1e-9
    marginal_tol: float = 1e-6
    max_iterations: int = 200
    oracle_grid_step: float = 1.0 / 200
    area_floor: float = obj.AREA_FLOOR
    max_oracle_points: int = 5_000_000
    seed_oracle_points: int = 200_000

    def __post_init__(self):
        for name in ("feasibility_tol", "marginal_tol", "oracle_grid_step", "area_floor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.oracle_grid_step >= 1:
            raise ValueError("oracle_grid_step must be smaller than the area budget")
        if self.area_floor < obj.AREA_FLOOR:
            raise ValueError(f"area_floor below the domain floor {obj.AREA_FLOOR:g}")
        if self.max_iterations < 1 or self.max_oracle_points < 1 or self.seed_oracle_points < 1:
            raise ValueError("iteration and point budgets must be >= 1")


DEFAULT_SETTINGS = SolverSettings()


def _check(scenario: Scenario):
    bad = validate(scenario)
    if bad:
        raise ValueError("invalid scenario: " + "; ".join(map(str, bad)))


class _Separable:
    """Per-unit terms ``g_i`` of one objective, with floor and budget."""

    def __init__(self, scenario: Scenario, kind: str, p: float, settings: SolverSettings):
        _check(scenario)
        if kind not in ("delay", "energy", "datacenter"):
            raise ValueError(f"unknown objective kind {kind!r}")
        if kind != "delay" and (p < 0 or not math.isfinite(p)):
            raise ValueError(f"constant power must be finite and >= 0, got {p}")
        self.scenario = scenario
        self.kind = kind
        self.p_report = p
        if kind == "delay":
            self.w, self.p = 0.0, 1.0
        else:
            self.w = scenario.dynamic_weight if kind == "datacenter" else 1.0
            self.p = float(p)
        self.A = float(scenario.area_budget)
        self.floor = settings.area_floor * self.A
        self.n = scenario.n_units
        if self.n * self.floor > self.A:
            raise ValueError("infeasible floor configuration: n * area_floor > A")
        self.alpha = scenario.alphas
        self.gamma = self.alpha + scenario.betas
        self.c = scenario.times / scenario.efficiencies
        self.active = scenario.times > 0
        self.settings = settings

    def g(self, i, a):
        return self.c[i] * (self.w * a ** self.gamma[i] + self.p * a ** self.alpha[i])

    def dg(self, i, a):
        al, ga = self.alpha[i], self.gamma[i]
        return self.c[i] * (self.w * ga * a ** (ga - 1.0) + self.p * al * a ** (al - 1.0))

    def objective(self, areas) -> float:
        return float(obj.objective(self.scenario, areas, self.kind, self.p_report))

    def interior(self, areas) -> np.ndarray:
        return self.active & (areas > self.floor * (1.0 + 1e-6))

    def residual(self, areas) -> tuple[float, float]:
        """(max pairwise marginal gap, magnitude scale) over interior units."""
        dyn, sta = obj.marginal_terms(self.scenario, areas, self.kind, self.p_report)
        keep = self.interior(areas)
        if keep.sum() < 2:
            return 0.0, 0.0
        m = (dyn + sta)[keep]
        scale = float(np.mean(np.abs(dyn[keep]) + np.abs(sta[keep])))
        return float(m.max() - m.min()), scale

    def result(self, areas, lam, method, iterations) -> AllocationResult:
        areas = np.asarray(areas, dtype=float)
        gap, _ = self.residual(areas)
        if lam is None:
            keep = self.interior(areas)
            m = obj.marginals(self.scenario, areas, self.kind, self.p_report)
            lam = float(np.mean(m[keep])) if keep.any() else float("nan")
        return AllocationResult(
            areas=areas,
            lam=float(lam),
            objective_value=self.objective(areas),
            max_marginal_residual=gap,
            feasibility_gap=abs(float(np.sum(areas)) - self.A),
            kind=self.kind,
            p_sys=self.p_report,
            method=method,
            iterations=iterations,
        )

    # -- dual bisection --------------------------------------------------
    def rising_branch(self):
        """Mask of units whose marginal rises from -inf, and its zero ``a0``.

        ``a0`` is the unconstrained per-unit minimizer (``inf`` when the
        marginal stays negative for every area).
        """
        al, ga, w, p = self.alpha, self.gamma, self.w, self.p
        has = self.active & ((p > 0) | ((w > 0) & (ga < 0)))
        a0 = np.full(self.n, np.inf)
        crosses = has & (w > 0) & (ga > 0) & (p > 0)
        if np.any(crosses):
            beta = ga[crosses] - al[crosses]
            a0[crosses] = (p * -al[crosses] / (w * ga[crosses])) ** (1.0 / beta)
        a0[~has] = self.floor
        return has, np.maximum(a0, self.floor)

    def unconstrained_total(self) -> float:
        has, a0 = self.rising_branch()
        return float(np.sum(np.where(self.active, a0, self.floor)))

    def invert(self, lam: float) -> np.ndarray:
        """Areas on the rising branches where ``g_i'(a) = lam`` (``lam < 0``)."""
        has, a0 = self.rising_branch()
        out = np.full(self.n, self.floor)
        idx = np.flatnonzero(has)
        if idx.size == 0:
            return out
        al, ga, c = self.alpha[idx], self.gamma[idx], self.c[idx]
        w, p = self.w, self.p

        def dg(a):
            return c * (w * ga * a ** (ga - 1.0) + p * al * a ** (al - 1.0))

        x = -lam
        # Both marginal terms are negative powers on the branch; one of them
        # carries at least half of |lam|, which bounds the root from above.
        ub = np.full(idx.size, 0.0)
        if p > 0:
            ub = np.maximum(ub, (c * p * -al / (0.5 * x)) ** (1.0 / (1.0 - al)))
        neg = (w > 0) & (ga < 0)
        if np.any(neg):
            k = c[neg] * w * -ga[neg]
            ub[neg] = np.maximum(ub[neg], (k / (0.5 * x)) ** (1.0 / (1.0 - ga[neg])))
        ub = np.minimum(ub, a0[idx])
        lo = np.full(idx.size, math.log(self.floor))
        hi = np.log(np.maximum(ub, self.floor))
        at_floor = dg(np.exp(lo)) >= lam
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            below = dg(np.exp(mid)) < lam
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo <= 4e-16 * np.maximum(1.0, np.abs(hi))):
                break
        a = np.exp(0.5 * (lo + hi))
        out[idx] = np.where(at_floor, self.floor, np.maximum(a, self.floor))
        return out

    def dual_bisection(self) -> AllocationResult:
        st = self.settings
        tol = st.feasibility_tol * self.A

        def total(u):
            return float(np.sum(self.invert(-math.exp(u))))

        u_lo, u_hi = math.log(1e-12), math.log(1e9)
        iters = 0
        step = 1.0
        while total(u_lo) < self.A:
            u_lo -= step
            step *= 2.0
            iters += 1
            if iters > st.max_iterations:
                raise ConvergenceError("could not bracket the multiplier from above")
        step = 1.0
        while total(u_hi) > self.A:
            u_hi += step
            step *= 2.0
            iters += 1
            if iters > st.max_iterations:
                raise ConvergenceError("could not bracket the multiplier from below")
        for k in range(st.max_iterations):
            mid = 0.5 * (u_lo + u_hi)
            s = total(mid)
            if s > self.A:
                u_lo = mid
            else:
                u_hi = mid
            if u_hi - u_lo <= 4e-16 * max(1.0, abs(mid)):
                break
        iters += k + 1
        u = 0.5 * (u_lo + u_hi)
        areas = self.invert(-math.exp(u))
        if abs(areas.sum() - self.A) > max(tol, 1e-6 * self.A):
            raise ConvergenceError(
                f"dual bisection stalled: |sum(a) - A| = {abs(areas.sum() - self.A):.3g}"
            )
        return self.result(self._close(areas), -math.exp(u), "dual-bisection", iters)

    def _close(self, areas):
        """Spread the remaining budget over free units proportionally."""
        areas = areas.copy()
        free = areas > self.floor
        if free.any():
            r = self.A - areas.sum()
            areas[free] += r * areas[free] / areas[free].sum()
        return areas

    # -- direct search ---------------------------------------------------
    def split(self, x, budget):
        """``(x, budget - x)`` with a side that rounds below the floor snapped to it."""
        y = budget - x
        if y < self.floor:
            return budget - self.floor, self.floor
        if x < self.floor:
            return self.floor, budget - self.floor
        return x, y

    def pair_minimize(self, i, j, budget, tol):
        """Best split ``a_i + a_j = budget`` by seeded golden-section search."""
        lo, hi = self.floor, budget - self.floor
        if hi <= lo:
            return lo

        def phi(x):
            return self.g(i, x) + self.g(j, budget - x)

        def dphi(x):
            return self.dg(i, x) - self.dg(j, budget - x)

        nodes = np.linspace(lo, hi, SEED_INTERVALS + 1)
        vals = phi(nodes)
        best_x, best_v = None, np.inf
        last = len(nodes) - 1
        for k in range(len(nodes)):
            left = vals[k - 1] if k > 0 else np.inf
            right = vals[k + 1] if k < last else np.inf
            if not (vals[k] <= left and vals[k] <= right):
                continue
            a, b = nodes[max(k - 1, 0)], nodes[min(k + 1, last)]
            x, v = golden_section(phi, a, b, tol)
            x = _polish(dphi, x, a, b)
            # the scan node itself may be the optimum (an exact corner)
            for cx, cv in ((x, phi(x)), (nodes[k], vals[k])):
                if cv < best_v:
                    best_x, best_v = cx, cv
        return float(best_x)

    def coordinate_descent(self, seed) -> AllocationResult:
        st = self.settings
        tol = st.feasibility_tol * self.A
        areas = np.array(seed, dtype=float)
        act = np.flatnonzero(self.active)
        value = self.objective(areas)
        max_steps = 50 * st.max_iterations
        for step in range(1, max_steps + 1):
            m = obj.marginals(self.scenario, areas, self.kind, self.p_report)
            gap, scale = self.residual(areas)
            ma = m[act]
            donors = act[areas[act] > self.floor * (1.0 + 1e-6)]
            if donors.size == 0:
                break
            i = donors[np.argmax(m[donors])]
            j = act[np.argmin(ma)]
            if i == j or m[i] - m[j] <= 0.01 * st.marginal_tol * scale:
                break
            budget = areas[i] + areas[j]
            x = self.pair_minimize(i, j, budget, tol)
            trial = areas.copy()
            trial[i], trial[j] = self.split(x, budget)
            v = self.objective(trial)
            if v > value + 1e-15 * abs(value):
                break
            areas, value = trial, v
        else:
            raise ConvergenceError(f"coordinate descent did not converge in {max_steps} steps")
        return self.result(areas, None, "coordinate-descent", step)


def golden_section(f, a, b, tol):
    """Minimize a unimodal ``f`` on ``[a, b]`` down to bracket width ``tol``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    candidates = [(f(x), x), (fc, c), (fd, d)]
    v, x = min(candidates)
    return x, v


def _polish(dphi, x, a, b):
    """Refine ``x`` to the root of ``dphi`` when a sign change brackets it."""
    width = max(b - a, 0.0)
    h = max(1e-12 * max(abs(x), 1e-300), 1e-300)
    while h < width:
        lo, hi = max(a, x - h), min(b, x + h)
        dl, dh = dphi(lo), dphi(hi)
        if dl < 0 < dh:
            return brentq(dphi, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
        if dl >= 0 and dh <= 0:
            break
        h *= 4.0
    return x


def _pin_inactive(prob: _Separable):
    """Areas with zero-workload units at the floor; None when all are active."""
    if prob.active.all():
        return None
    return np.where(prob.active, np.nan, prob.floor)


def solve_delay(scenario: Scenario, settings: SolverSettings | None = None) -> AllocationResult:
    """Delay-optimal allocation.

    With a common exponent ``alpha`` the equal-marginal condition inverts to
    ``a_i ∝ (t_i / e_i) ** (1 / (1 - alpha))``. Mixed exponents go through
    dual bisection on the multiplier.
    """
    st = settings or DEFAULT_SETTINGS
    prob = _Separable(scenario, "delay", 0.0, st)
    act = prob.active
    al = prob.alpha[act]
    if np.all(al == al[0]):
        weights = prob.c[act] ** (1.0 / (1.0 - al[0]))
        free = prob.A - prob.floor * np.count_nonzero(~act)
        areas = np.full(prob.n, prob.floor)
        areas[act] = free * weights / weights.sum()
        if np.all(areas[act] >= prob.floor):
            i = np.flatnonzero(act)[0]
            lam = prob.dg(i, areas[i])
            return prob.result(areas, lam, "closed-form", 0)
    return prob.dual_bisection()


def _solve_energy_kind(scenario, kind, p, settings):
    st = settings or DEFAULT_SETTINGS
    prob = _Separable(scenario, kind, p, st)
    if prob.unconstrained_total() > prob.A:
        return prob.dual_bisection()
    return _direct_search(prob)


def _direct_search(prob: _Separable) -> AllocationResult:
    st = prob.settings
    act = np.flatnonzero(prob.active)
    areas = np.full(prob.n, prob.floor)
    free = prob.A - prob.floor * (prob.n - act.size)
    if act.size == 1:
        areas[act[0]] = free
        return prob.result(areas, None, "single-unit", 0)
    if act.size == 2:
        i, j = act
        x = prob.pair_minimize(i, j, free, st.feasibility_tol * prob.A)
        areas[i], areas[j] = prob.split(x, free)
        return prob.result(areas, None, "golden-section", 1)
    seed = _seed_allocation(prob)
    return prob.coordinate_descent(seed)


def _seed_allocation(prob: _Separable) -> np.ndarray:
    """Best point of a coarse simplex grid over the active units."""
    act = np.flatnonzero(prob.active)
    sub = prob.scenario.replace(
        units=tuple(prob.scenario.units[k] for k in act),
        workload=tuple(prob.scenario.workload.times[k] for k in act),
        area_budget=prob.A - prob.floor * (prob.n - act.size),
    )
    # keep the absolute floor: rescale the relative one to the smaller budget
    rel_floor = prob.floor / sub.area_budget
    st = prob.settings
    steps = grid_steps_within(act.size, st.seed_oracle_points, preferred=int(round(1 / st.oracle_grid_step)))
    res = _grid_search(
        _Separable(sub, prob.kind, prob.p_report, replace(st, area_floor=max(rel_floor, obj.AREA_FLOOR))),
        steps,
    )
    areas = np.full(prob.n, prob.floor)
    areas[act] = res.areas
    return areas


def solve_energy(
    scenario: Scenario,
    p_sys: float | None = None,
    settings: SolverSettings | None = None,
) -> AllocationResult:
    """Energy-optimal allocation at absolute constant system power ``p_sys``.

    When the unconstrained per-unit minima already cover the chip the
    multiplier is negative and dual bisection over the rising branches of the
    marginals gives the global optimum. Otherwise the budget must be pushed
    past those minima and the problem is solved by direct search: a
    golden-section split for two units, pairwise coordinate descent seeded by
    a coarse grid for more.
    """
    p = scenario.p_sys if p_sys is None else p_sys
    return _solve_energy_kind(scenario, "energy", p, settings)


def solve_datacenter(
    scenario: Scenario,
    p_const: float | None = None,
    settings: SolverSettings | None = None,
) -> AllocationResult:
    """Optimal allocation for ``sum (w p_i + P_const) f_i t_i``; ``w`` from the scenario."""
    p = scenario.p_sys if p_const is None else p_const
    return _solve_energy_kind(scenario, "datacenter", p, settings)


def solve_two_unit(
    scenario: Scenario,
    p_sys: float | None = None,
    settings: SolverSettings | None = None,
    kind: str = "energy",
) -> AllocationResult:
    """Minimize the one-dimensional split of a two-unit chip.

    The split is scanned on 64 intervals, every local minimum of the scan is
    refined by golden-section search and then polished on the equal-marginal
    condition; the lowest candidate wins.
    """
    if scenario.n_units != 2:
        raise ValueError(f"solve_two_unit needs exactly 2 units, got {scenario.n_units}")
    st = settings or DEFAULT_SETTINGS
    p = scenario.p_sys if p_sys is None else p_sys
    prob = _Separable(scenario, kind, p, st)
    if not prob.active.all():
        return _direct_search(prob)
    x = prob.pair_minimize(0, 1, prob.A, st.feasibility_tol * prob.A)
    return prob.result(np.array(prob.split(x, prob.A)), None, "golden-section", 1)


def solve(
    scenario: Scenario,
    kind: str | None = None,
    p: float | None = None,
    settings: SolverSettings | None = None,
) -> AllocationResult:
    kind = kind or scenario.objective_kind
    if kind == "delay":
        return solve_delay(scenario, settings)
    if kind == "energy":
        return solve_energy(scenario, p, settings)
    if kind == "datacenter":
        return solve_datacenter(scenario, p, settings)
    raise ValueError(f"unknown objective kind {kind!r}")


# -- grid oracle ------------------------------------------------------------


def grid_size(n_units: int, steps: int) -> int:
    """Number of points on the simplex grid with ``steps`` increments."""
    return math.comb(steps + n_units - 1, n_units - 1)


def grid_steps_within(n_units: int, max_points: int, preferred: int) -> int:
    """Largest step count ``<= preferred`` whose grid fits in ``max_points``."""
    lo, hi = 1, max(int(preferred), 1)
    if grid_size(n_units, hi) <= max_points:
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if grid_size(n_units, mid) <= max_points:
            lo = mid
        else:
            hi = mid
    return lo


@lru_cache(maxsize=4096)
def _compositions_small(total: int, parts: int) -> np.ndarray:
    if parts == 1:
        return np.array([[total]], dtype=np.int32)
    blocks = []
    for first in range(total + 1):
        rest = _compositions_small(total - first, parts - 1)
        blocks.append(np.column_stack([np.full(len(rest), first, dtype=np.int32), rest]))
    out = np.concatenate(blocks)
    out.setflags(write=False)
    return out


def _compositions(total: int, parts: int):
    """Yield lexicographically ordered blocks of ``parts``-tuples summing to ``total``."""
    if parts <= 3:
        yield _compositions_small(total, parts)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield np.column_stack([np.full(len(rest), first, dtype=np.int32), rest])


def _grid_search(prob: _Separable, steps: int) -> AllocationResult:
    n = prob.n
    count = grid_size(n, steps)
    h = (prob.A - n * prob.floor) / steps
    best_v, best_k = np.inf, None
    for block in _compositions(steps, n):
        pts = prob.floor + block * h
        vals = obj.objective(prob.scenario, pts, prob.kind, prob.p_report)
        k = int(np.argmin(vals))
        if vals[k] < best_v:
            best_v, best_k = float(vals[k]), block[k].copy()
    areas = prob.floor + best_k * h
    # measured local Lipschitz bound: largest change over one grid move
    moves = []
    for i in range(n):
        if best_k[i] == 0:
            continue
        for j in range(n):
            if j != i:
                k = best_k.copy()
                k[i] -= 1
                k[j] += 1
                moves.append(k)
    slack = 0.0
    if moves:
        nb = obj.objective(prob.scenario, prob.floor + np.array(moves) * h, prob.kind, prob.p_report)
        slack = float(np.max(np.abs(nb - best_v)))
    res = AllocationResult(
        areas=areas,
        lam=float("nan"),
        objective_value=best_v,
        max_marginal_residual=prob.residual(areas)[0],
        feasibility_gap=abs(float(areas.sum()) - prob.A),
        kind=prob.kind,
        p_sys=prob.p_report,
        method="oracle",
        iterations=count,
        grid_step=h,
        grid_slack=slack,
        grid_points=count,
    )
    return res


def brute_force_oracle(
    scenario: Scenario,
    p_sys: float | None = None,
    kind: str | None = None,
    grid_step: float | None = None,
    settings: SolverSettings | None = None,
) -> AllocationResult:
    """Exhaustive minimum over the simplex grid ``a_i = floor + k_i h``, ``sum k_i = N``.

    ``grid_step`` is absolute (area units); ``N = round(A / grid_step)``.
    Ties go to the lexicographically first grid point. ``grid_slack`` is the
    largest objective change over a single grid move from the best point.
    """
    st = settings or DEFAULT_SETTINGS
    kind = kind or scenario.objective_kind
    p = scenario.p_sys if p_sys is None else p_sys
    prob = _Separable(scenario, kind, p, st)
    step = grid_step if grid_step is not None else st.oracle_grid_step * prob.A
    if not 0 < step < prob.A:
        raise ValueError(f"grid step must lie in (0, A), got {step}")
    steps = max(int(round(prob.A / step)), 1)
    count = grid_size(prob.n, steps)
    if count > st.max_oracle_points:
        raise ValueError(
            f"grid too large: {count} points exceeds the cap of {st.max_oracle_points}"
        )
    return _grid_search(prob, steps)


# -- verification -----------------------------------------------------------


@dataclass
class VerificationReport:
    feasibility_gap: float
    feasible: bool
    kkt_residual: float
    kkt_scale: float
    kkt_ok: bool
    boundary_units: list[str] = field(default_factory=list)
    unconstrained_total: float = float("nan")
    oracle_objective: float | None = None
    oracle_gap: float | None = None
    oracle_slack: float | None = None
    oracle_step: float | None = None
    oracle_ok: bool | None = None

    @property
    def passed(self) -> bool:
        return self.feasible and self.kkt_ok and self.oracle_ok is not False

    def summary(self) -> str:
        parts = [
            f"feasibility_gap={self.feasibility_gap:.3g}",
            f"kkt_residual={self.kkt_residual:.3g}",
        ]
        if self.oracle_gap is not None:
            parts.append(f"oracle_gap={self.oracle_gap:.3g} (slack {self.oracle_slack:.3g})")
        if self.boundary_units:
            parts.append("boundary=" + ",".join(self.boundary_units))
        parts.append("PASS" if self.passed else "FAIL")
        return " ".join(parts)


def verify(
    scenario: Scenario,
    result: AllocationResult,
    p_sys: float | None = None,
    kind: str | None = None,
    settings: SolverSettings | None = None,
    grid_step: float | None = None,
    run_oracle: bool = True,
    oracle: AllocationResult | None = None,
) -> VerificationReport:
    """Re-check an allocation: feasibility, equal marginals, oracle gap.

    Units pinned at the area floor (or with no work) are reported as boundary
    units and left out of the marginal comparison. The oracle grid defaults to
    the finest step whose grid fits in ``settings.max_oracle_points``; pass
    ``oracle`` to reuse a grid result computed earlier.
    """
    st = settings or DEFAULT_SETTINGS
    kind = kind or result.kind
    p = result.p_sys if p_sys is None else p_sys
    prob = _Separable(scenario, kind, p, st)
    areas = np.asarray(result.areas, dtype=float)
    gap = abs(float(areas.sum()) - prob.A)
    feasible = gap <= st.feasibility_tol * prob.A and bool(np.all(areas >= prob.floor * (1 - 1e-9)))
    resid, scale = prob.residual(areas)
    kkt_ok = resid <= st.marginal_tol * scale if scale > 0 else resid == 0.0
    interior = prob.interior(areas)
    boundary = [u.name for u, keep in zip(scenario.units, interior) if not keep]
    report = VerificationReport(
        feasibility_gap=gap,
        feasible=feasible,
        kkt_residual=resid,
        kkt_scale=scale,
        kkt_ok=bool(kkt_ok),
        boundary_units=boundary,
        unconstrained_total=prob.unconstrained_total() if kind != "delay" else float("inf"),
    )
    if run_oracle or oracle is not None:
        if oracle is not None:
            orc = oracle
        elif grid_step is None:
            preferred = int(round(1.0 / st.oracle_grid_step))
            orc = _grid_search(prob, grid_steps_within(prob.n, st.max_oracle_points, preferred))
        else:
            orc = _grid_search(prob, max(int(round(prob.A / grid_step)), 1))
        value = prob.objective(areas)
        report.oracle_objective = orc.objective_value
        report.oracle_gap = value - orc.objective_value
        report.oracle_slack = orc.grid_slack
        report.oracle_step = orc.grid_step
        report.oracle_ok = report.oracle_gap <= orc.grid_slack + 1e-12 * abs(orc.objective_value)
    return report
