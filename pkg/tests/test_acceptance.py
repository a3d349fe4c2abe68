"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and echoed in the pytest terminal
summary (see conftest.py).  Run directly with ``pytest tests/test_acceptance.py``.
"""

import io
import math
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import REFERENCE_CUT
from fuzzy_voi import (
    ZERO,
    GaussianExperiment,
    add,
    alpha_cut,
    decision_regions,
    evpi,
    evsi,
    evsi_direct,
    from_breakpoints,
    kolodziejczyk_r,
    make_crisp,
    negate,
    optimal_prior_action,
    prior_expected_utilities,
    scale,
    translate,
    verify_theorem51,
)
from fuzzy_voi import cli
from fuzzy_voi.decision import pin_threshold, region_coefficients
from fuzzy_voi.fuzzy import sup_distance
from fuzzy_voi.randgen import random_problem, revealing_experiment, uninformative_experiment
from oracles import ext_sum_cut, grid_r, random_shape

RESULTS: list[str] = []
GOLDEN = Path(__file__).parent / "golden"


def verdict(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2} {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def pairs(seed, n):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield from_breakpoints(random_shape(rng, -3, 3, 0.0)), from_breakpoints(random_shape(rng, -3, 3, 0.0))


def test_criterion_01_prior_stage(neuro):
    I, D = neuro.utility(1, 0), neuro.utility(0, 1)
    eu1, eu2 = prior_expected_utilities(neuro)
    r = kolodziejczyk_r(eu1, eu2)
    best = optimal_prior_action(neuro)
    ok = eu1 == scale(I, 0.4) and eu2 == scale(D, 0.6) and abs(r) <= 1e-9 and best == 0
    verdict(1, "prior stage", ok, f"EU(a1)=.4I, EU(a2)=.6D breakpoint-exact, R={r:.3g}, chosen a{best + 1}")


def test_criterion_02_evpi(neuro):
    value = evpi(neuro)
    want = negate(scale(neuro.utility(1, 0), 0.4))
    verdict(2, "EVPI", value == want, f"EVPI={value.to_list()} vs -.4I={want.to_list()}")


def test_criterion_03_pinned_coefficients(neuro, score):
    regions = pin_threshold(decision_regions(neuro, score), REFERENCE_CUT)
    coef = region_coefficients(neuro, score, regions)
    high, low = coef[0][1], coef[1][0]
    ok = abs(high - 0.1234) <= 5e-4 and abs(low - 0.0136) <= 5e-4
    verdict(3, "EVSI coefficients", ok, f"t0={REFERENCE_CUT:.6f}, coefficients {high:.6f} / {low:.6f} (tol 5e-4)")


def test_criterion_04_crisp_threshold(crisp_neuro, gaussian_score):
    regions = decision_regions(crisp_neuro, gaussian_score)
    want = 110 - 3.2 * math.log(7.5)
    ok = len(regions.cuts) == 1 and abs(regions.cuts[0] - want) <= 1e-6 and regions.actions == (1, 0)
    got = regions.cuts[0] if regions.cuts else float("nan")
    verdict(4, "crisp threshold", ok, f"cut {got:.9f} vs {want:.9f}, error {abs(got - want):.2g}")


def test_criterion_05_ordering(neuro, score, neuro_file):
    rep = verify_theorem51(neuro, score)
    r_pi, r_zero = rep.r_evpi_vs_evsi, rep.r_evsi_vs_zero
    # independent dense-grid evaluation of the same coefficients
    o_pi = grid_r(list(rep.evpi.points), list(rep.evsi.points))
    o_zero = grid_r(list(rep.evsi.points), [(0.0, 1.0)])
    code, out, _ = _cli("evsi", "neurologist.json", "--json")
    caveat = code == 0 and '"caveat"' in out and "reconstruction" in neuro_file.caveat
    ok = r_pi <= 0.01 and 0.2 < r_zero < 0.45 and caveat
    verdict(
        5,
        "ordering",
        ok,
        f"R(EVPI,EVSI)={r_pi:.4f} (need <= 0.01; grid oracle {o_pi:.4f}), "
        f"R(EVSI,0)={r_zero:.4f} (need in (0.2,0.45); grid oracle {o_zero:.4f}), caveat stated={caveat}",
    )


def test_criterion_06_theorem_suite():
    start = time.perf_counter()
    failures = []
    worst = [0.0, 0.0]
    for seed in range(500):
        p, exp = random_problem(seed)
        rep = verify_theorem51(p, exp)
        worst = [max(worst[0], rep.r_evpi_vs_evsi), max(worst[1], rep.r_evsi_vs_zero)]
        if not (rep.r_evpi_vs_evsi <= 0.5 + 1e-9 and rep.r_evsi_vs_zero <= 0.5 + 1e-9):
            failures.append(seed)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    verdict(
        6,
        "EVPI >= EVSI >= 0 suite",
        ok,
        f"{500 - len(failures)}/500 passed in {elapsed:.1f}s, max R(EVPI,EVSI)={worst[0]:.6f}, "
        f"max R(EVSI,0)={worst[1]:.6f}, failing seeds {failures[:10]}",
    )


def test_criterion_07_extremal_experiments(neuro):
    problems = [neuro] + [random_problem(10_000 + k)[0] for k in range(50)]
    worst_sup, worst_rev, worst_flat = 0.0, 0.0, 0.0
    for p in problems:
        n = p.n_states
        rev = evsi(p, revealing_experiment(n))
        vpi = evpi(p)
        worst_sup = max(worst_sup, sup_distance(rev, vpi))
        worst_rev = max(worst_rev, abs(kolodziejczyk_r(vpi, rev) - 0.5))
        flat = evsi(p, uninformative_experiment(n))
        worst_flat = max(worst_flat, abs(kolodziejczyk_r(flat, ZERO) - 0.5))
    flat_gauss = evsi(neuro, GaussianExperiment((100.0, 100.0), (8.0, 8.0)))
    worst_flat = max(worst_flat, abs(kolodziejczyk_r(flat_gauss, ZERO) - 0.5))
    ok = worst_sup <= 1e-9 and worst_rev <= 1e-9 and worst_flat <= 1e-9
    verdict(
        7,
        "extremal experiments",
        ok,
        f"{len(problems)} problems, revealing sup-norm {worst_sup:.2g}, |R-.5| {worst_rev:.2g}; "
        f"uninformative |R(EVSI,0)-.5| {worst_flat:.2g}",
    )


def test_criterion_08_ranking_properties():
    rng = np.random.default_rng(808)
    worst = {"complement": 0.0, "self": 0.0, "affine": 0.0, "disjoint": 0.0, "symdiff": 0.0}
    crisp_bad = 0
    for U, V in pairs(8, 1000):
        worst["complement"] = max(worst["complement"], abs(kolodziejczyk_r(U, V) + kolodziejczyk_r(V, U) - 1))
        worst["self"] = max(worst["self"], abs(kolodziejczyk_r(U, U) - 0.5))
        lam, beta = rng.uniform(0.1, 10), rng.uniform(-10, 10)
        moved = kolodziejczyk_r(translate(scale(U, lam), beta), translate(scale(V, lam), beta))
        worst["affine"] = max(worst["affine"], abs(moved - kolodziejczyk_r(U, V)))
        above = translate(U, U.support().hi - U.support().lo + rng.uniform(1e-6, 5))
        worst["disjoint"] = max(worst["disjoint"], abs(kolodziejczyk_r(U, above) - 1))
        worst["symdiff"] = max(worst["symdiff"], abs(kolodziejczyk_r(add(U, negate(U)), ZERO) - 0.5))
        a, b = rng.uniform(-10, 10, 2)
        r = kolodziejczyk_r(make_crisp(a), make_crisp(b))
        crisp_bad += r != (0.0 if a > b else 1.0 if a < b else 0.5)
    ok = max(worst.values()) <= 1e-9 and crisp_bad == 0
    detail = ", ".join(f"{k} {v:.2g}" for k, v in worst.items())
    verdict(8, "ranking properties", ok, f"1000 pairs, worst deviations: {detail}; crisp mismatches {crisp_bad}")


def test_criterion_09_arithmetic_oracle():
    rng = np.random.default_rng(909)
    worst_grid, worst_exact = 0.0, 0.0
    for _ in range(200):
        fp, gp = random_shape(rng), random_shape(rng)
        F, G = from_breakpoints(fp), from_breakpoints(gp)
        S = add(F, G)
        for a in np.linspace(0, 1, 11):
            lo, hi = ext_sum_cut(fp, gp, a)
            c = alpha_cut(S, float(a))
            worst_grid = max(worst_grid, abs(c.lo - lo), abs(c.hi - hi))
        for k in range(101):
            a = k / 100
            c, f, g = alpha_cut(S, a), alpha_cut(F, a), alpha_cut(G, a)
            worst_exact = max(worst_exact, abs(c.lo - (f.lo + g.lo)), abs(c.hi - (f.hi + g.hi)))
    ok = worst_grid <= 1e-2 and worst_exact <= 1e-12
    verdict(9, "arithmetic oracle", ok, f"200 pairs, grid sup deviation {worst_grid:.2g}, cut additivity {worst_exact:.2g}")


def test_criterion_10_two_path_evsi(neuro, score):
    worst_discrete = 0.0
    for seed in range(100):
        p, exp = random_problem(20_000 + seed)
        worst_discrete = max(worst_discrete, sup_distance(evsi(p, exp), evsi_direct(p, exp)))
    regions = decision_regions(neuro, score)
    a, b = evsi(neuro, score, regions), evsi_direct(neuro, score, regions=regions)
    worst_gauss = 0.0
    for k in range(33):
        ca, cb = alpha_cut(a, k / 32), alpha_cut(b, k / 32)
        worst_gauss = max(worst_gauss, abs(ca.lo - cb.lo), abs(ca.hi - cb.hi))
    ok = worst_discrete <= 1e-12 and worst_gauss <= 1e-3
    verdict(10, "two-path EVSI", ok, f"100 discrete sup-norm {worst_discrete:.2g}; Gaussian endpoint gap {worst_gauss:.2g}")


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_criterion_11_cli_contract(tmp_path):
    runs = {
        "neurologist_analyze.json": ["analyze", "neurologist.json", "--json"],
        "neurologist_evsi_pinned.json": ["evsi", "neurologist.json", "--json", "--override-threshold", "104.0102"],
        "quality_control_analyze.json": ["analyze", "quality_control.json", "--json"],
        "quality_control_compare.json": ["compare", "quality_control.json", "--json"],
    }
    same = {name: _cli(*argv)[1] == (GOLDEN / name).read_text(encoding="utf-8") for name, argv in runs.items()}
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    bad_prior = tmp_path / "prior.json"
    bad_prior.write_text(
        '{"states": ["a", "b"], "prior": [0.5, 0.4], "actions": ["x"], "utilities": [[{"crisp": 0}], [{"crisp": 0}]]}',
        encoding="utf-8",
    )
    impossible = tmp_path / "impossible.json"
    impossible.write_text(
        '{"states": ["a", "b"], "prior": [0.5, 0.5], "actions": ["x"], "utilities": [[{"crisp": 0}], [{"crisp": 0}]],'
        ' "experiments": [{"name": "e", "outcomes": ["y", "n"], "likelihood": [[1, 0], [1, 0]]}]}',
        encoding="utf-8",
    )
    codes = {
        "ok": _cli("evpi", "neurologist.json")[0],
        "parse": _cli("analyze", str(broken))[0],
        "invariant": _cli("analyze", str(bad_prior))[0],
        "numeric": _cli("posterior", str(impossible), "--outcome", "n")[0],
    }
    real = cli.verify_theorem51
    try:
        from dataclasses import replace

        cli.verify_theorem51 = lambda *a, **k: replace(real(*a, **k), r_evpi_vs_evsi=1.0)
        codes["theorem"] = _cli("check", "--trials", "2")[0]
    finally:
        cli.verify_theorem51 = real
    codes["check"] = _cli("check", "--trials", "500", "--seed", "42")[0]
    want = {"ok": 0, "parse": 2, "invariant": 3, "numeric": 4, "theorem": 5, "check": 0}
    ok = all(same.values()) and codes == want
    verdict(11, "CLI goldens and exit codes", ok, f"goldens identical {sum(same.values())}/{len(same)}, exit codes {codes}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
