"""Command-line interface: ``fuzzy-voi <command> [path] [options]``.

Exit codes: 0 success, 2 parse error, 3 invariant violation, 4 numeric
failure (e.g. an impossible observation), 5 theorem check failed.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .decision import (
    SCAN_POINTS,
    compare_experiments,
    evpi,
    expected_utilities,
    optimal_posterior_action,
    perfect_action,
    perfect_info_value,
    prior_expected_utilities,
    verify_theorem51,
)
from .errors import InvariantError, NumericError, ParseError
from .inference import DiscreteExperiment, DiscreteOutcome, RealValue, posterior
from .randgen import random_problem
from .ranking import best_index
from .report import (
    evsi_cross_check,
    fuzzy_json,
    header,
    matrix_json,
    num,
    r_zero,
    regions_json,
    to_json,
    to_text,
    write_plot_csv,
)
from .serialization import ProblemFile, parse_problem

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_NUMERIC, EXIT_THEOREM = 0, 2, 3, 4, 5
DEFAULT_LEVELS = 33


# -- report builders (pure; reused by tests) ----------------------------------


def _prior_block(pf: ProblemFile):
    p = pf.problem
    eus = prior_expected_utilities(p)
    sel = best_index(eus)
    block = {
        "states": list(p.states.names),
        "prior": [num(v) for v in p.prior],
        "actions": list(p.actions),
        "prior_expected_utilities": {a: fuzzy_json(eu) for a, eu in zip(p.actions, eus)},
        "r_matrix": matrix_json(sel.r),
        "prior_best": p.actions[sel.index],
    }
    return block, sel


def _experiment_block(pf: ProblemFile, name: str, grid: int, levels: int | None, cut: float | None) -> dict:
    p = pf.problem
    _, exp = pf.experiment(name)
    rep = verify_theorem51(p, exp, grid=grid, cut=cut)
    block = {
        "name": name,
        "kind": "discrete" if isinstance(exp, DiscreteExperiment) else "gaussian",
        "regions": regions_json(rep.regions, pf, exp),
        "coefficients": {
            a: {s: num(c) for s, c in zip(p.states.names, row)} for a, row in zip(p.actions, rep.coefficients)
        },
        "evsi": fuzzy_json(rep.evsi),
        "r_evpi_vs_evsi": num(rep.r_evpi_vs_evsi),
        "r_evsi_vs_zero": num(rep.r_evsi_vs_zero),
        "evpi_dominates_evsi": rep.evpi_dominates,
        "evsi_nonnegative": rep.evsi_nonnegative,
        "diagnostics": list(rep.diagnostics),
    }
    if levels:
        block["cross_check"] = evsi_cross_check(pf, exp, rep.evsi, rep.regions, levels, grid)
    return block


def analyze_report(pf: ProblemFile, grid: int = SCAN_POINTS) -> dict:
    p = pf.problem
    out = header("analyze", pf, grid=grid)
    block, sel = _prior_block(pf)
    out.update(block)
    value = evpi(p)
    out["perfect_actions"] = {s: p.actions[perfect_action(p, i)] for i, s in enumerate(p.states.names)}
    out["evpi"] = fuzzy_json(value)
    out["experiments"] = [_experiment_block(pf, n, grid, None, None) for n in pf.experiments]
    out["diagnostics"] = ["cycle-resolved"] if sel.cycle_resolved else []
    return out


def posterior_report(pf: ProblemFile, experiment: str | None, x: float | None, outcome: str | None) -> dict:
    p = pf.problem
    name, exp = pf.experiment(experiment)
    if isinstance(exp, DiscreteExperiment):
        if outcome is None:
            raise InvariantError(f"experiment {name!r} is discrete: pass --outcome")
        if outcome not in exp.outcomes:
            raise InvariantError(f"unknown outcome {outcome!r}; known: {', '.join(exp.outcomes)}")
        obs = DiscreteOutcome(exp.outcomes.index(outcome))
    else:
        if x is None:
            raise InvariantError(f"experiment {name!r} is Gaussian: pass --x")
        obs = RealValue(x)
    post = posterior(p.prior, exp, obs)
    eus = expected_utilities(p, post)
    sel = best_index(eus)
    out = header("posterior", pf, experiment=name, x=x, outcome=outcome)
    out["posterior"] = {s: num(v) for s, v in zip(p.states.names, post)}
    out["posterior_expected_utilities"] = {a: fuzzy_json(eu) for a, eu in zip(p.actions, eus)}
    out["r_matrix"] = matrix_json(sel.r)
    out["posterior_best"] = p.actions[optimal_posterior_action(p, exp, obs)]
    out["diagnostics"] = ["cycle-resolved"] if sel.cycle_resolved else []
    return out


def evpi_report(pf: ProblemFile) -> dict:
    p = pf.problem
    out = header("evpi", pf)
    block, _ = _prior_block(pf)
    out["prior_best"] = block["prior_best"]
    out["perfect_actions"] = {s: p.actions[perfect_action(p, i)] for i, s in enumerate(p.states.names)}
    out["perfect_info_value"] = fuzzy_json(perfect_info_value(p))
    value = evpi(p)
    out["evpi"] = fuzzy_json(value)
    out["r_evpi_vs_zero"] = r_zero(value)
    return out


def evsi_report(
    pf: ProblemFile,
    experiment: str | None,
    grid: int = SCAN_POINTS,
    levels: int = DEFAULT_LEVELS,
    override_threshold: float | None = None,
) -> dict:
    name, _ = pf.experiment(experiment)
    out = header("evsi", pf, experiment=name, grid=grid, levels=levels, override_threshold=override_threshold)
    block, _ = _prior_block(pf)
    out["prior_best"] = block["prior_best"]
    out["evpi"] = fuzzy_json(evpi(pf.problem))
    out.update(_experiment_block(pf, name, grid, levels, override_threshold))
    return out


def compare_report(pf: ProblemFile, grid: int = SCAN_POINTS) -> dict:
    names = list(pf.experiments)
    cmp = compare_experiments(pf.problem, [pf.experiments[n] for n in names], grid=grid)
    out = header("compare", pf, grid=grid)
    out["ranking"] = [names[k] for k in cmp.order]
    out["evsi"] = {n: (fuzzy_json(v) if v is not None else None) for n, v in zip(names, cmp.evsi)}
    out["r_evsi_vs_zero"] = {n: r_zero(v) for n, v in zip(names, cmp.evsi) if v is not None}
    out["r_matrix"] = matrix_json(cmp.r)
    out["errors"] = {names[k]: msg for k, msg in cmp.errors.items()}
    return out


def plot_files(pf: ProblemFile, out_dir: Path, experiment: str | None = None, grid: int = SCAN_POINTS) -> list[Path]:
    p = pf.problem
    written = []
    for a, eu in zip(p.actions, prior_expected_utilities(p)):
        written.append(write_plot_csv(out_dir, f"eu_{a}", eu))
    written.append(write_plot_csv(out_dir, "perfect_info_value", perfect_info_value(p)))
    written.append(write_plot_csv(out_dir, "evpi", evpi(p)))
    names = [pf.experiment(experiment)[0]] if experiment else list(pf.experiments)
    for n in names:
        rep = verify_theorem51(p, pf.experiments[n], grid=grid)
        written.append(write_plot_csv(out_dir, f"evsi_{n}", rep.evsi))
    return written


def check_report(trials: int, seed: int) -> dict:
    failures = []
    worst_pi, worst_zero = 0.0, 0.0
    for k in range(trials):
        s = seed + k
        problem, exp = random_problem(s)
        rep = verify_theorem51(problem, exp)
        worst_pi = max(worst_pi, rep.r_evpi_vs_evsi)
        worst_zero = max(worst_zero, rep.r_evsi_vs_zero)
        if not rep.holds:
            failures.append({"seed": s, "r_evpi_vs_evsi": num(rep.r_evpi_vs_evsi), "r_evsi_vs_zero": num(rep.r_evsi_vs_zero)})
    return {
        "tool": "fuzzy-voi",
        "version": __version__,
        "command": "check",
        "options": {"trials": trials, "seed": seed},
        "passed": trials - len(failures),
        "trials": trials,
        "max_r_evpi_vs_evsi": num(worst_pi),
        "max_r_evsi_vs_zero": num(worst_zero),
        "failures": failures,
    }


# -- argument handling -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuzzy-voi", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, path=True):
        sp = sub.add_parser(name, help=help_)
        if path:
            sp.add_argument("path", help="problem file (or a bundled scenario name)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = add("analyze", "prior choice, EVPI and EVSI for every experiment")
    sp.add_argument("--grid", type=int, default=SCAN_POINTS)
    sp = add("posterior", "posterior choice after one observation")
    sp.add_argument("--experiment")
    obs = sp.add_mutually_exclusive_group()
    obs.add_argument("--x", type=float)
    obs.add_argument("--outcome")
    add("evpi", "expected value of perfect information")
    sp = add("evsi", "expected value of sample information")
    sp.add_argument("--experiment")
    sp.add_argument("--grid", type=int, default=SCAN_POINTS)
    sp.add_argument("--levels", type=int, default=DEFAULT_LEVELS)
    sp.add_argument("--override-threshold", type=float, dest="override_threshold")
    sp = add("compare", "rank experiments by EVSI")
    sp.add_argument("--grid", type=int, default=SCAN_POINTS)
    sp = add("plot", "write membership-function CSVs")
    sp.add_argument("--out", default="plots")
    sp.add_argument("--experiment")
    sp.add_argument("--grid", type=int, default=SCAN_POINTS)
    sp = add("check", "randomized EVPI >= EVSI >= 0 verification", path=False)
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    return ap


def _emit(report: dict, as_json: bool, stream) -> None:
    stream.write(to_json(report) if as_json else to_text(report))


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            if args.trials < 1:
                raise InvariantError("--trials must be positive")
            rep = check_report(args.trials, args.seed)
            _emit(rep, args.json, stdout)
            for f in rep["failures"]:
                stderr.write(f"failed seed {f['seed']}\n")
            return EXIT_OK if not rep["failures"] else EXIT_THEOREM
        if getattr(args, "grid", SCAN_POINTS) < 2:
            raise InvariantError("--grid must be at least 2")
        if args.command == "evsi" and args.levels < 2:
            raise InvariantError("--levels must be at least 2")
        for opt in ("x", "override_threshold"):
            v = getattr(args, opt, None)
            if v is not None and not math.isfinite(v):
                raise InvariantError(f"--{opt.replace('_', '-')} must be finite")
        pf = parse_problem(args.path)
        if args.command == "analyze":
            rep = analyze_report(pf, args.grid)
        elif args.command == "posterior":
            rep = posterior_report(pf, args.experiment, args.x, args.outcome)
        elif args.command == "evpi":
            rep = evpi_report(pf)
        elif args.command == "evsi":
            rep = evsi_report(pf, args.experiment, args.grid, args.levels, args.override_threshold)
        elif args.command == "compare":
            rep = compare_report(pf, args.grid)
        else:
            paths = plot_files(pf, Path(args.out), args.experiment, args.grid)
            rep = header("plot", pf)
            rep["files"] = [str(q) for q in paths]
        _emit(rep, args.json, stdout)
        return EXIT_OK
    except ParseError as err:
        stderr.write(f"parse error: {err}\n")
        return EXIT_PARSE
    except InvariantError as err:
        stderr.write(f"invalid input: {err}\n")
        return EXIT_INVARIANT
    except NumericError as err:
        stderr.write(f"numeric error: {err}\n")
        return EXIT_NUMERIC


def main(argv=None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
