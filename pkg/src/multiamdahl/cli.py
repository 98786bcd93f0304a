"""Command-line front end.

    multiamdahl solve --preset multi-accel --objective delay
    multiamdahl sweep --preset hpc --s 0.02,0.1,0.4,0.95 --plot --out results/
    multiamdahl curve --preset hpc --plot
    multiamdahl limit-check --preset multi-accel --psys 10,100,1000,10000
    multiamdahl datacenter --preset hpc --w 2 --pconst 0.02,0.1,1,19
    multiamdahl oracle-check --preset hpc --s 0.4

Exit codes: 0 success, 1 a requested check failed, 2 configuration or
validation error, 3 solver non-convergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import plots
from .config import ConfigError, load_scenario, sweep_csv, table_csv
from .model import PRESETS, Scenario, power_to_fraction
from .solver import (
    DEFAULT_SETTINGS,
    ConvergenceError,
    SolverSettings,
    brute_force_oracle,
    grid_steps_within,
    solve,
    verify,
)
from .sweep import (
    NAMED_FRACTIONS,
    curve_energy_vs_allocation,
    datacenter_sweep,
    limit_check,
    sweep_psys,
)

COMMANDS = ("solve", "sweep", "curve", "limit-check", "datacenter", "oracle-check")
EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    source: str
    out: Path = Path(".")
    objective: str | None = None
    s: list[float] | None = None
    psys: list[float] | None = None
    w: float | None = None
    pconst: list[float] | None = None
    grid_step: float | None = None
    plot: bool = False
    settings: SolverSettings = field(default_factory=lambda: DEFAULT_SETTINGS)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario")
    src.add_argument("--config", help="path to a JSON scenario file")
    common.add_argument("--objective", choices=("delay", "energy", "datacenter"))
    common.add_argument("--s", type=_floats, help="constant-power shares in [0, 1), comma separated")
    common.add_argument("--psys", type=_floats, help="absolute constant system power(s)")
    common.add_argument("--w", type=float, help="data-center dynamic-power multiplier (>= 1)")
    common.add_argument("--pconst", type=_floats, help="data-center constant power(s)")
    common.add_argument("--grid-step", type=float, help="oracle grid step in area units")
    common.add_argument("--feasibility-tol", type=float, help="as a fraction of the area budget")
    common.add_argument("--marginal-tol", type=float, help="relative equal-marginal tolerance")
    common.add_argument("--max-iterations", type=int)
    common.add_argument("--plot", action="store_true", help="also write SVG figures")
    common.add_argument("--out", default=".", help="output directory (default: current)")

    parser = argparse.ArgumentParser(prog="multiamdahl", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        k: getattr(args, k)
        for k in ("feasibility_tol", "marginal_tol", "max_iterations")
        if getattr(args, k) is not None
    }
    try:
        settings = replace(DEFAULT_SETTINGS, **overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(
        command=args.command,
        source=args.preset or args.config,
        out=Path(args.out),
        objective=args.objective,
        s=args.s,
        psys=args.psys,
        w=args.w,
        pconst=args.pconst,
        grid_step=args.grid_step,
        plot=args.plot,
        settings=settings,
    )


def _absolute_powers(cfg: RunConfig, scenario: Scenario) -> list[tuple[float, float]]:
    """(s, p_sys) pairs from ``--s`` / ``--psys`` / ``--pconst`` or the scenario."""
    ref = scenario.reference_power
    if cfg.s is not None:
        for s in cfg.s:
            if not 0 <= s < 1:
                raise ConfigError(f"--s: share {s} outside [0, 1)")
        return [(s, scenario.fraction_to_power(s)) for s in cfg.s]
    values = cfg.psys if cfg.psys is not None else cfg.pconst
    if values is not None:
        for p in values:
            if p < 0:
                raise ConfigError(f"constant power {p} must be >= 0")
        return [(power_to_fraction(p, ref), p) for p in values]
    p = scenario.p_sys
    return [(power_to_fraction(p, ref), p)]


class _Run:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.scenario = load_scenario(cfg.source)
        if cfg.w is not None:
            if cfg.w < 1:
                raise ConfigError(f"--w must be >= 1, got {cfg.w}")
            self.scenario = self.scenario.replace(dynamic_weight=cfg.w)
        self.files: dict[str, str] = {}
        self.status = EXIT_OK

    @property
    def kind(self) -> str:
        return self.cfg.objective or self.scenario.objective_kind

    def unit_header(self):
        return self.scenario.unit_names

    # -- commands --
    def solve(self):
        s, p = _absolute_powers(self.cfg, self.scenario)[0]
        res = solve(self.scenario, self.kind, p, self.cfg.settings)
        if self.kind == "delay":
            s, p = 1.0, float("inf")
        header = ["s", "p_sys", *self.unit_header(), "objective", "residual"]
        self.files["solve.csv"] = table_csv(
            header, [[s, p, *res.areas, res.objective_value, res.max_marginal_residual]]
        )
        return (
            f"{self.kind} objective={res.objective_value:.12g} "
            f"kkt_residual={res.max_marginal_residual:.3g} method={res.method}"
        )

    def sweep(self):
        s_values = None if self.cfg.s is None else sorted(self.cfg.s)
        table = sweep_psys(self.scenario, s_values, self.cfg.settings)
        self.files["sweep.csv"] = sweep_csv(table)
        if self.cfg.plot:
            self._plot_sweep(table)
        failed = [r for r in table.rows if r.error]
        for r in failed:
            print(f"warning: s={r.s:g}: {r.error}", file=sys.stderr)
        if failed:
            self.status = EXIT_SOLVER
        return f"sweep rows={len(table.rows)} failed={len(failed)}"

    def _plot_sweep(self, table, name=None, xlabel="P_sys (share of total power budget)"):
        rows = [r for r in table.rows if r.label != "delay" and r.error is None]
        names = table.unit_names
        if len(names) == 2 and name is None:
            x = np.array([r.s for r in rows])
            series = [(f"a_{n} / A", x, [r.areas[k] for r in rows]) for k, n in enumerate(names)]
            self.files["fig4.svg"] = plots.line_chart(
                series, "Area allocation vs. constant system power", xlabel,
                "Area allocation (fraction of A)", xlog=True, ylim=(0.0, 1.0),
            )
        elif name is None:
            labels = [f"{100 * r.s:.3g}%" for r in rows] + ["delay-opt"]
            shares = np.array([r.areas for r in rows] + [table.limit.areas])
            self.files["fig6.svg"] = plots.stacked_columns(
                labels, names, shares, "Energy-optimal allocation vs. P_sys", xlabel,
                "Area allocation (fraction of A)",
            )
        else:
            x = np.array([r.p_sys for r in rows])
            series = [(f"a_{n} / A", x, [r.areas[k] for r in rows]) for k, n in enumerate(names)]
            self.files[name] = plots.line_chart(
                series, "Data-center optimal allocation vs. P_const", xlabel,
                "Area allocation (fraction of A)", xlog=bool(np.all(x > 0)), ylim=(0.0, 1.0),
            )

    def curve(self):
        s_values = self.cfg.s or list(NAMED_FRACTIONS)
        table = curve_energy_vs_allocation(self.scenario, s_values, settings=self.cfg.settings)
        first = table.unit_names[0]
        header = ["s", "p_sys", f"{first}_share", "energy", "normalized", "is_min"]
        rows = []
        for c in table.curves:
            for k in range(len(c.x)):
                rows.append([c.s, c.p_sys, c.x[k], c.energy[k], c.normalized[k], int(k == c.argmin)])
        self.files["curve.csv"] = table_csv(header, rows)
        if self.cfg.plot:
            series = [(f"P_sys={100 * c.s:g}%", c.x, c.normalized) for c in table.curves]
            top = max(2.0, min(3.0, max(float(np.percentile(c.normalized, 60)) for c in table.curves)))
            self.files["fig3.svg"] = plots.line_chart(
                series, "Normalized energy vs. CPU area allocation",
                f"a_{first} / A", "Normalized energy", ylim=(0.9, top),
                markers=[(c.x_opt, 1.0) for c in table.curves],
            )
        return "curve argmins: " + ", ".join(f"s={c.s:g}: {c.x_opt:.4g}" for c in table.curves)

    def limit_check(self):
        ladder = self.cfg.psys or [1e1, 1e2, 1e3, 1e4]
        rep = limit_check(self.scenario, ladder, self.cfg.settings)
        header = ["p_sys", "gap", *self.unit_header()]
        rows = [[p, g, *a] for p, g, a in zip(rep.p_values, rep.gaps, rep.energy_areas)]
        rows.append([float("inf"), 0.0, *rep.delay_areas])
        self.files["limit.csv"] = table_csv(header, rows)
        if not rep.passed:
            self.status = EXIT_CHECK_FAILED
        return f"limit-check final_gap={rep.gaps[-1]:.3g} {'PASS' if rep.passed else 'FAIL'}"

    def datacenter(self):
        w = self.scenario.dynamic_weight
        p_values = sorted(self.cfg.pconst or self.cfg.psys or [0.02, 0.1, 1.0, 19.0])
        table = datacenter_sweep(self.scenario, w, p_values, self.cfg.settings)
        self.files["datacenter.csv"] = sweep_csv(table)
        if self.cfg.plot:
            self._plot_sweep(table, name="datacenter.svg", xlabel="P_const")
        failed = [r for r in table.rows if r.error]
        if failed:
            self.status = EXIT_SOLVER
        return f"datacenter w={w:g} rows={len(table.rows)} failed={len(failed)}"

    def oracle_check(self):
        kind = self.kind
        s, p = _absolute_powers(self.cfg, self.scenario)[0]
        st = self.cfg.settings
        res = solve(self.scenario, kind, p, st)
        step = self.cfg.grid_step
        if step is None:
            preferred = int(round(1.0 / st.oracle_grid_step))
            steps = grid_steps_within(self.scenario.n_units, st.max_oracle_points, preferred)
            step = self.scenario.area_budget / steps
        orc = brute_force_oracle(self.scenario, p, kind, step, st)
        rep = verify(self.scenario, res, p, kind, st, oracle=orc)
        header = ["method", "s", "p_sys", *self.unit_header(), "objective", "residual"]
        rows = [
            [res.method, s, p, *res.areas, res.objective_value, res.max_marginal_residual],
            ["oracle", s, p, *orc.areas, orc.objective_value, orc.max_marginal_residual],
        ]
        self.files["oracle.csv"] = table_csv(header, rows)
        if not rep.passed:
            self.status = EXIT_CHECK_FAILED
        return (
            f"{kind} objective={res.objective_value:.12g} kkt_residual={rep.kkt_residual:.3g} "
            f"oracle_gap={rep.oracle_gap:.3g} slack={rep.oracle_slack:.3g} "
            f"{'PASS' if rep.passed else 'FAIL'}"
        )

    def execute(self) -> str:
        return getattr(self, self.cfg.command.replace("-", "_"))()

    def write(self):
        self.cfg.out.mkdir(parents=True, exist_ok=True)
        for name, text in self.files.items():
            (self.cfg.out / name).write_text(text)


def run(cfg: RunConfig) -> int:
    """Execute one command; all files are written after computation finishes."""
    try:
        job = _Run(cfg)
        summary = job.execute()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        job.write()
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(summary)
    return job.status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
