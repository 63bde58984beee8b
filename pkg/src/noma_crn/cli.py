"""Command-line front end: scenario files, solver runs and experiment sweeps.

Subcommands
-----------
admit     greedy admission for a scenario file (budget derived from the PUs)
maxmin    two-phase run; phase-2 solver choice bisection/waterfill/both
verify    exhaustive cross-checks of both phases on a desk-scale scenario
simulate  Monte-Carlo sweeps (fig2/fig3) or a heterogeneous-target snapshot (fig4)

Scenario file format (hand-editable, one item per line, ``#`` comments)::

    noise_dbm -120          # aggregate noise+PU interference per SU
    pmax_dbm  20            # transmit power cap
    su <gain_db> <threshold_db>     # one line per secondary user
    pu <gain_db> <limit_dbm>        # one line per primary user (optional)

All user-facing SINR/power values are dB/dBm; conversion to linear happens on
read. CSV output uses 6 significant digits, comma separators, ``.`` decimals
and LF line endings; identical configs (including seed) produce byte-identical
files. A ``--config file.json`` may supply any long-option value by name;
explicit flags win, unknown keys are rejected. The ``NOMA_CRN_SEED``
environment variable overrides the built-in default seed.

Exit codes: 0 success, 1 verification mismatch, 2 usage, 3 file parse error,
4 infeasible, 5 oracle capacity exceeded, 6 output I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .admission import admit
from .errors import CapacityError, InfeasibleError, ScenarioParseError
from .maxmin import solve_bisection, solve_waterfill
from .model import Scenario, power_budget, sort_users
from .montecarlo import ChannelModel, run_fig2, run_fig3, run_fig4
from .oracle import GridSpec, oracle_max_admitted, oracle_max_min_sinr
from .units import db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm

__all__ = ["RunConfig", "parse_config", "read_scenario", "write_scenario", "main", "entrypoint"]

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INFEASIBLE = 4
EXIT_CAPACITY = 5
EXIT_IO = 6

SEED_ENV_VAR = "NOMA_CRN_SEED"

_DEFAULTS = {
    "solver": "both",
    "epsilon": 1e-6,
    "runs": 10000,
    "seed": 0,
    "targets_db": "5,10,15,20,25",
    "n_values": "5,10,15",
    "sus": 15,
    "threshold_range_db": "5,25",
    "jobs": 1,
    "grid_points": 0,  # 0: pick per admitted-set size in verify
    "format": None,    # per-command default
    "output": None,
    "config": None,
}

# Config-file keys each command accepts (long option names).
_COMMAND_KEYS = {
    "admit": {"scenario", "format", "output"},
    "maxmin": {"scenario", "solver", "epsilon", "format", "output"},
    "verify": {"scenario", "epsilon", "grid_points", "output", "format"},
    "simulate": {"experiment", "pus", "sus", "n_values", "targets_db", "runs",
                 "seed", "epsilon", "threshold_range_db", "jobs", "format", "output"},
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario_path: str | None = None
    experiment: str | None = None
    solver: str = "both"
    epsilon: float = 1e-6
    master_seed: int = 0
    runs: int = 10000
    pus: int | None = None
    sus: int = 15
    n_values: tuple[int, ...] = (5, 10, 15)
    targets_db: tuple[float, ...] = (5.0, 10.0, 15.0, 20.0, 25.0)
    threshold_range_db: tuple[float, float] = (5.0, 25.0)
    grid_points: int = 0
    jobs: int = 1
    output_path: str | None = None
    output_format: str = "table"


# ----------------------------------------------------------------- scenario IO

def read_scenario(path: str) -> Scenario:
    """Parse a scenario file; raises ScenarioParseError with line context."""
    scalars: dict[str, float] = {}
    su_rows: list[tuple[float, float]] = []
    pu_rows: list[tuple[float, float]] = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ScenarioParseError(f"{path}: cannot read scenario file: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, values = parts[0], parts[1:]

        def numbers(expected: int) -> list[float]:
            if len(values) != expected:
                raise ScenarioParseError(
                    f"{path}:{lineno}: '{key}' expects {expected} value(s), got {len(values)}")
            try:
                return [float(v) for v in values]
            except ValueError as exc:
                raise ScenarioParseError(f"{path}:{lineno}: malformed number in '{line}'") from exc

        if key in ("noise_dbm", "pmax_dbm"):
            if key in scalars:
                raise ScenarioParseError(f"{path}:{lineno}: duplicate '{key}'")
            scalars[key] = numbers(1)[0]
        elif key == "su":
            gain_db, thr_db = numbers(2)
            su_rows.append((gain_db, thr_db))
        elif key == "pu":
            gain_db, limit_dbm = numbers(2)
            pu_rows.append((gain_db, limit_dbm))
        else:
            raise ScenarioParseError(f"{path}:{lineno}: unknown key '{key}'")
    for required in ("noise_dbm", "pmax_dbm"):
        if required not in scalars:
            raise ScenarioParseError(f"{path}: missing required '{required}' line")
    n = len(su_rows)
    return sort_users(
        [db_to_linear(g) for g, _ in su_rows],
        [dbm_to_watts(scalars["noise_dbm"])] * n if n else [],
        [db_to_linear(t) for _, t in su_rows],
        pu_gains=[db_to_linear(g) for g, _ in pu_rows],
        pu_interference_limits=[dbm_to_watts(lim) for _, lim in pu_rows],
        p_max=dbm_to_watts(scalars["pmax_dbm"]),
    )


def write_scenario(path: str, scenario: Scenario) -> None:
    """Write the canonical (sorted-order) scenario file for this instance.

    Values are stored in dB/dBm at full float precision. Per-user noise must
    be uniform, matching the file format's single ``noise_dbm`` line.
    """
    if scenario.n_sus and not np.all(scenario.su_noise == scenario.su_noise[0]):
        raise ValueError("scenario files carry a single noise level; per-user noise differs")
    noise_dbm = watts_to_dbm(scenario.su_noise[0]) if scenario.n_sus else -120.0
    lines = [
        f"noise_dbm {noise_dbm:.17g}",
        f"pmax_dbm {watts_to_dbm(scenario.p_max):.17g}",
    ]
    for gain, thr in zip(scenario.su_gains, scenario.su_thresholds):
        lines.append(f"su {linear_to_db(gain):.17g} {linear_to_db(thr):.17g}")
    for gain, limit in zip(scenario.pu_gains, scenario.pu_interference_limits):
        lines.append(f"pu {linear_to_db(gain):.17g} {watts_to_dbm(limit):.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ----------------------------------------------------------------- configuration

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noma-crn",
        description="Two-phase NOMA power allocation under primary-user interference limits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, scenario: bool):
        if scenario:
            p.add_argument("--scenario", help="scenario file path")
        p.add_argument("--config", help="JSON file supplying option values by name")
        p.add_argument("--format", choices=["table", "csv"], help="output format")
        p.add_argument("--output", help="write results to this path instead of stdout")

    p_admit = sub.add_parser("admit", help="greedy admission for a scenario file")
    add_common(p_admit, scenario=True)

    p_maxmin = sub.add_parser("maxmin", help="admission plus max-min SINR redistribution")
    add_common(p_maxmin, scenario=True)
    p_maxmin.add_argument("--solver", choices=["bisection", "waterfill", "both"])
    p_maxmin.add_argument("--epsilon", type=float, help="bisection tolerance, linear SINR")

    p_verify = sub.add_parser("verify", help="exhaustive cross-checks on a desk-scale scenario")
    add_common(p_verify, scenario=True)
    p_verify.add_argument("--epsilon", type=float)
    p_verify.add_argument("--grid-points", dest="grid_points", type=int,
                          help="oracle grid points per axis (default: sized to ~1e6 total)")

    p_sim = sub.add_parser("simulate", help="Monte-Carlo experiment sweeps")
    add_common(p_sim, scenario=False)
    p_sim.add_argument("--experiment", choices=["fig2", "fig3", "fig4"])
    p_sim.add_argument("--pus", type=int, help="number of primary users (required)")
    p_sim.add_argument("--sus", type=int, help="requesting users for fig4")
    p_sim.add_argument("--n-values", dest="n_values", help="comma list of requesting-user counts")
    p_sim.add_argument("--targets-db", dest="targets_db", help="comma list of targeted SINRs (dB)")
    p_sim.add_argument("--threshold-range-db", dest="threshold_range_db",
                       help="low,high dB range for fig4 per-user targets")
    p_sim.add_argument("--runs", type=int, help="Monte-Carlo runs per grid point")
    p_sim.add_argument("--seed", type=int, help="master seed (env NOMA_CRN_SEED overrides default)")
    p_sim.add_argument("--epsilon", type=float)
    p_sim.add_argument("--jobs", type=int, help="parallel workers over grid points")
    return parser


def _load_config_file(path: str, allowed: set[str]) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioParseError(f"{path}: cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ScenarioParseError(f"{path}: config must be a JSON object")
    unknown = set(data) - allowed
    if unknown:
        raise ScenarioParseError(f"{path}: unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _parse_number_list(text, kind, flag: str):
    if isinstance(text, (list, tuple)):
        return tuple(kind(v) for v in text)
    try:
        return tuple(kind(part) for part in str(text).split(",") if part.strip() != "")
    except ValueError as exc:
        raise ScenarioParseError(f"--{flag}: malformed number in {text!r}") from exc


class UsageError(Exception):
    """Missing or inconsistent options detected after merging config sources."""


def _coerce(kind, name: str, value):
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{name} must be a {kind.__name__}, got {value!r}") from exc


def parse_config(argv=None) -> RunConfig:
    """Merge CLI flags, optional config file, environment and defaults.

    Precedence: explicit flag > config file > NOMA_CRN_SEED (seed only) >
    built-in default. Raises UsageError/ScenarioParseError on bad input.
    """
    parser = _build_parser()
    ns = parser.parse_args(argv)
    command = ns.command
    allowed = _COMMAND_KEYS[command]
    file_values = _load_config_file(ns.config, allowed) if ns.config else {}

    def pick(name: str, default=None):
        flag_value = getattr(ns, name, None)
        if flag_value is not None:
            return flag_value
        if name in file_values:
            return file_values[name]
        return default

    epsilon = _coerce(float, "epsilon", pick("epsilon", _DEFAULTS["epsilon"]))
    if epsilon <= 0.0:
        raise UsageError("epsilon must be strictly positive")
    runs = _coerce(int, "runs", pick("runs", _DEFAULTS["runs"]))
    if runs < 1:
        raise UsageError("runs must be at least 1")
    jobs = _coerce(int, "jobs", pick("jobs", _DEFAULTS["jobs"]))
    if jobs < 1:
        raise UsageError("jobs must be at least 1")

    seed = pick("seed")
    if seed is None:
        seed = os.environ.get(SEED_ENV_VAR, _DEFAULTS["seed"])
    seed = _coerce(int, "seed", seed)

    default_format = "csv" if command == "simulate" else "table"
    scenario_path = pick("scenario")
    if command in ("admit", "maxmin", "verify") and scenario_path is None:
        raise UsageError(f"{command} requires --scenario")

    experiment = pick("experiment")
    pus = pick("pus")
    if command == "simulate":
        if experiment is None:
            raise UsageError("simulate requires --experiment")
        if pus is None:
            raise UsageError("simulate requires --pus (primary-user count has no default)")
        pus = _coerce(int, "pus", pus)
        if pus < 0:
            raise UsageError("pus must be non-negative")

    rng_range = _parse_number_list(pick("threshold_range_db", _DEFAULTS["threshold_range_db"]),
                                   float, "threshold-range-db")
    if len(rng_range) != 2:
        raise UsageError("threshold-range-db must be exactly 'low,high'")

    return RunConfig(
        command=command,
        scenario_path=scenario_path,
        experiment=experiment,
        solver=pick("solver", _DEFAULTS["solver"]),
        epsilon=epsilon,
        master_seed=seed,
        runs=runs,
        pus=pus,
        sus=_coerce(int, "sus", pick("sus", _DEFAULTS["sus"])),
        n_values=_parse_number_list(pick("n_values", _DEFAULTS["n_values"]), int, "n-values"),
        targets_db=_parse_number_list(pick("targets_db", _DEFAULTS["targets_db"]), float, "targets-db"),
        threshold_range_db=(float(rng_range[0]), float(rng_range[1])),
        grid_points=int(pick("grid_points", _DEFAULTS["grid_points"])),
        jobs=jobs,
        output_path=pick("output"),
        output_format=pick("format", default_format),
    )


# ----------------------------------------------------------------- output helpers

def _fmt(value) -> str:
    """CSV cell: 6 significant digits for floats, blanks for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


class _Out:
    """Writes either to a file (LF endings) or stdout; collects rows as CSV or text."""

    def __init__(self, path: str | None):
        self.path = path
        self._chunks: list[str] = []

    def line(self, text: str = "") -> None:
        self._chunks.append(text + "\n")

    def csv_rows(self, rows) -> None:
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        self._chunks.append(buf.getvalue())

    def flush(self) -> None:
        text = "".join(self._chunks)
        if self.path is None:
            sys.stdout.write(text)
        else:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)


# ----------------------------------------------------------------- subcommands

def _admit_rows(scenario: Scenario, result):
    full = result.full_powers()
    targets_db = linear_to_db(scenario.su_thresholds) if scenario.n_sus else []
    for i in range(scenario.n_sus):
        yield (int(scenario.order[i]), float(scenario.su_gains[i]), float(targets_db[i]),
               float(full[i]), i < result.admitted_count)


def _cmd_admit(cfg: RunConfig, out: _Out) -> int:
    scenario = read_scenario(cfg.scenario_path)
    budget = power_budget(scenario)
    result = admit(scenario, budget)
    if cfg.output_format == "csv":
        out.csv_rows([("user_index", "gain", "target_db", "power_w", "admitted"),
                      *_admit_rows(scenario, result)])
    else:
        out.line(f"budget: {budget:.6g} W ({watts_to_dbm(budget):.6g} dBm)")
        out.line(f"admitted: {result.admitted_count} of {scenario.n_sus}")
        out.line(f"remaining power: {result.remaining_power:.6g} W")
        if scenario.n_sus:
            out.line(f"{'user':>5} {'gain':>12} {'target_db':>10} {'power_w':>12} admitted")
            for idx, gain, tdb, p, adm in _admit_rows(scenario, result):
                out.line(f"{idx:>5} {gain:>12.6g} {tdb:>10.6g} {p:>12.6g} {'yes' if adm else 'no'}")
    out.flush()
    return EXIT_OK


def _solve_with(solver_name, scenario, budget, epsilon):
    fn = solve_bisection if solver_name == "bisection" else solve_waterfill
    return fn(scenario, budget, epsilon)


def _cmd_maxmin(cfg: RunConfig, out: _Out) -> int:
    scenario = read_scenario(cfg.scenario_path)
    budget = power_budget(scenario)
    result = admit(scenario, budget)
    if result.admitted_count == 0:
        out.line(f"0 admitted of {scenario.n_sus}; phase 2 skipped")
        out.flush()
        return EXIT_OK
    restricted = scenario.prefix(result.admitted_count)
    names = ["bisection", "waterfill"] if cfg.solver == "both" else [cfg.solver]
    solutions = {name: _solve_with(name, restricted, budget, cfg.epsilon) for name in names}
    if cfg.output_format == "csv":
        rows = [("solver", "theta_linear", "theta_db", "iterations",
                 "user_index", "power_w", "achieved_db")]
        for name, sol in solutions.items():
            for i in range(restricted.n_sus):
                rows.append((name, sol.theta_star, linear_to_db(sol.theta_star), sol.iterations,
                             int(scenario.order[i]), float(sol.powers[i]),
                             float(linear_to_db(sol.achieved_sinr[i]))))
        out.csv_rows(rows)
    else:
        out.line(f"budget: {budget:.6g} W; admitted {result.admitted_count} of {scenario.n_sus}")
        for name, sol in solutions.items():
            out.line(f"[{name}] theta* = {linear_to_db(sol.theta_star):.6g} dB "
                     f"({sol.theta_star:.6g} linear), iterations = {sol.iterations}")
            out.line(f"[{name}] powers (W): " + " ".join(f"{p:.6g}" for p in sol.powers))
            out.line(f"[{name}] achieved SINR (dB): "
                     + " ".join(f"{linear_to_db(g):.6g}" for g in sol.achieved_sinr))
        if cfg.solver == "both":
            gap = abs(solutions["bisection"].theta_star - solutions["waterfill"].theta_star)
            out.line(f"theta* discrepancy: {gap:.6g} (tolerance 2*epsilon = {2 * cfg.epsilon:.6g})")
    out.flush()
    return EXIT_OK


def _verify_grid_points(admitted: int, requested: int) -> int:
    if requested > 0:
        return requested
    return {1: 1_000_001, 2: 1415, 3: 181}[admitted]


def _cmd_verify(cfg: RunConfig, out: _Out) -> int:
    scenario = read_scenario(cfg.scenario_path)
    budget = power_budget(scenario)
    result = admit(scenario, budget)
    best_count = oracle_max_admitted(scenario, budget)
    ok = result.admitted_count == best_count
    out.line(f"phase 1: greedy admitted {result.admitted_count}, exhaustive best {best_count} "
             f"-> {'agree' if ok else 'MISMATCH'}")
    if 1 <= result.admitted_count <= 3:
        restricted = scenario.prefix(result.admitted_count)
        grid = GridSpec(_verify_grid_points(result.admitted_count, cfg.grid_points), budget)
        search = oracle_max_min_sinr(restricted, budget, grid)
        out.line(f"phase 2 grid: {search.points_checked} points, "
                 f"resolution {search.resolution:.6g} (linear SINR)")
        if search.value is None:
            out.line("phase 2 grid: no feasible grid point (grid too coarse)")
            ok = False
        else:
            for name in ("bisection", "waterfill"):
                sol = _solve_with(name, restricted, budget, cfg.epsilon)
                gap = sol.theta_star - search.value
                solver_ok = -1e-9 * max(1.0, search.value) <= gap <= search.resolution
                ok = ok and solver_ok
                out.line(f"phase 2: {name} theta*={sol.theta_star:.6g} vs grid {search.value:.6g} "
                         f"(gap {gap:.3g}) -> {'agree' if solver_ok else 'MISMATCH'}")
    elif result.admitted_count > 3:
        out.line(f"phase 2 grid: skipped ({result.admitted_count} admitted users exceed "
                 "the 3-user grid oracle)")
    else:
        out.line("phase 2: nobody admitted; nothing to verify")
    out.line("verification: " + ("PASS" if ok else "FAIL"))
    out.flush()
    return EXIT_OK if ok else EXIT_MISMATCH


_FIG2_HEADER = ("target_sinr_db", "n_requesting", "m_pus", "runs", "mean_admitted")
_FIG3_HEADER = _FIG2_HEADER + ("mean_min_achieved_sinr_db", "mean_all_achieved_sinr_db")
_FIG4_HEADER = ("user_index", "gain", "target_db", "achieved_db", "admitted")


def _cmd_simulate(cfg: RunConfig, out: _Out) -> int:
    if cfg.experiment == "fig4":
        model = ChannelModel(num_sus=cfg.sus, num_pus=cfg.pus)
        rows = run_fig4(model, cfg.sus, cfg.threshold_range_db, cfg.master_seed, cfg.epsilon)
        table = [(r.user_index, r.gain, r.target_db, r.achieved_db, r.admitted) for r in rows]
        header = _FIG4_HEADER
    else:
        model = ChannelModel(num_sus=max(cfg.n_values), num_pus=cfg.pus)
        runner = run_fig2 if cfg.experiment == "fig2" else run_fig3
        kwargs = {"n_jobs": cfg.jobs}
        if cfg.experiment == "fig3":
            kwargs["epsilon"] = cfg.epsilon
        stats = runner(model, cfg.targets_db, cfg.n_values, cfg.runs, cfg.master_seed, **kwargs)
        if cfg.experiment == "fig2":
            header = _FIG2_HEADER
            table = [(s.target_sinr_db, s.n_requesting, s.m_pus, s.runs, s.mean_admitted)
                     for s in stats]
        else:
            header = _FIG3_HEADER
            table = [(s.target_sinr_db, s.n_requesting, s.m_pus, s.runs, s.mean_admitted,
                      s.mean_min_achieved_sinr_db, s.mean_all_achieved_sinr_db) for s in stats]
    if cfg.output_format == "table":
        out.line(" ".join(f"{h:>26}" for h in header))
        for row in table:
            out.line(" ".join(f"{_fmt(v):>26}" for v in row))
    else:
        out.csv_rows([header, *table])
    out.flush()
    return EXIT_OK


# ----------------------------------------------------------------- entry point

def main(argv=None) -> int:
    """Run the CLI; returns the process exit code (see module docstring)."""
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    dispatch = {
        "admit": _cmd_admit,
        "maxmin": _cmd_maxmin,
        "verify": _cmd_verify,
        "simulate": _cmd_simulate,
    }
    out = _Out(cfg.output_path)
    try:
        return dispatch[cfg.command](cfg, out)
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleError as exc:
        print(f"error: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
