"""Optimal actions, value of perfect information, and value of sample information.

Expected utilities, EVPI and EVSI are all fuzzy numbers, compared with the
Kołodziejczyk relation from :mod:`fuzzy_voi.ranking`.

EVSI has two independent routes here.  :func:`evsi` uses the decision
regions ``X(a_i)`` (the observations for which ``a_i`` is posterior-optimal):

    EVSI = sum_i sum_theta U(theta, a_i) * xi(theta) * P_theta(X(a_i)) - E[U(a*|xi)]

which is exact once the regions are known, because only the scalar
coefficients ``xi(theta) * P_theta(X(a_i))`` involve the observation model.
:func:`evsi_direct` integrates the alpha-cut endpoints of the posterior-optimal
expected utility over the predictive distribution with composite
Gauss-Legendre quadrature and is kept as a cross-check.

Gaussian decision regions are found by scanning a uniform grid over
``[min mean - 8 max sd, max mean + 8 max sd]`` (at most 1.2e-15 of any
state's mass lies outside) and bisecting each change of winner down to
1e-9.  Exact ties go to the lower-indexed action, which is what
:func:`~fuzzy_voi.ranking.best_index` does anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import FuzzyVOIError, InvariantError
from .expectation import expected_utility
from .fuzzy import ZERO, FuzzyNumber, add, alpha_cut, scale, subtract, translate, _build
from .inference import (
    DiscreteExperiment,
    DiscreteOutcome,
    Distribution,
    Experiment,
    GaussianExperiment,
    Observation,
    RealValue,
    StateSpace,
    gaussian_density,
    marginal,
    posterior,
    predictive_region_prob,
)
from .ranking import INDIFFERENCE_TOL, best_index, kolodziejczyk_r, r_matrix, ranking_order

SCAN_POINTS = 512
SCAN_HALF_WIDTH = 8.0
BISECT_TOL = 1e-9
GL_ORDER = 8

CYCLE_RESOLVED = "cycle-resolved"
CLOSE_CUTS = "close-cuts"
ZERO_PROBABILITY_OUTCOME = "zero-probability-outcome"
ISOTONIC_REPAIR = "isotonic-repair"
THRESHOLD_OVERRIDE = "threshold-override"


@dataclass(frozen=True)
class DecisionProblem:
    """Finite states and actions with a fuzzy utility table ``utilities[state][action]``."""

    states: StateSpace
    actions: tuple[str, ...]
    prior: Distribution
    utilities: tuple[tuple[FuzzyNumber, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "utilities", tuple(tuple(row) for row in self.utilities))
        if not self.actions or len(set(self.actions)) != len(self.actions):
            raise InvariantError("actions must be non-empty with unique labels")
        if len(self.prior) != len(self.states):
            raise InvariantError("prior length does not match the state count")
        if len(self.utilities) != len(self.states):
            raise InvariantError("utility table needs one row per state")
        for row in self.utilities:
            if len(row) != len(self.actions):
                raise InvariantError("utility table needs one entry per action in every row")
            for u in row:
                if not isinstance(u, FuzzyNumber):
                    raise InvariantError(f"utility entry {u!r} is not a fuzzy number")

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    def utility(self, state: int, action: int) -> FuzzyNumber:
        return self.utilities[state][action]


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteMap:
    """Posterior-optimal action for each outcome of a discrete experiment."""

    actions: tuple[int, ...]

    def outcomes_for(self, action: int) -> list[int]:
        return [k for k, a in enumerate(self.actions) if a == action]


@dataclass(frozen=True)
class RealLine:
    """Cut points ``c_1 < ... < c_k`` and the action on each of the k + 1 intervals."""

    cuts: tuple[float, ...]
    actions: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cuts", tuple(float(c) for c in self.cuts))
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.actions) != len(self.cuts) + 1:
            raise InvariantError("need exactly one action per interval")
        if any(b <= a for a, b in zip(self.cuts, self.cuts[1:])):
            raise InvariantError("cut points must be strictly increasing")

    def intervals(self) -> list[tuple[float, float, int]]:
        edges = (-math.inf,) + self.cuts + (math.inf,)
        return [(edges[k], edges[k + 1], a) for k, a in enumerate(self.actions)]

    def intervals_for(self, action: int) -> list[tuple[float, float]]:
        return [(a, b) for a, b, act in self.intervals() if act == action]


RegionPartition = Union[DiscreteMap, RealLine]


# ---------------------------------------------------------------------------
# choice
# ---------------------------------------------------------------------------


def _note(diagnostics, flag):
    if diagnostics is not None and flag not in diagnostics:
        diagnostics.append(flag)


def expected_utilities(p: DecisionProblem, dist: Distribution | Sequence[float]) -> list[FuzzyNumber]:
    probs = tuple(dist)
    return [expected_utility(p.utilities, a, probs) for a in range(p.n_actions)]


def prior_expected_utilities(p: DecisionProblem) -> list[FuzzyNumber]:
    return expected_utilities(p, p.prior)


def _select(candidates, diagnostics) -> int:
    sel = best_index(candidates)
    if sel.cycle_resolved:
        _note(diagnostics, CYCLE_RESOLVED)
    return sel.index


def optimal_prior_action(p: DecisionProblem, diagnostics: list | None = None) -> int:
    return _select(prior_expected_utilities(p), diagnostics)


def optimal_posterior_action(
    p: DecisionProblem, exp: Experiment, obs: Observation, diagnostics: list | None = None
) -> int:
    return _select(expected_utilities(p, posterior(p.prior, exp, obs)), diagnostics)


def perfect_action(p: DecisionProblem, state: int, diagnostics: list | None = None) -> int:
    return _select(list(p.utilities[state]), diagnostics)


def perfect_info_value(p: DecisionProblem) -> FuzzyNumber:
    """Expected utility when the state is revealed before acting."""
    total = None
    for s in range(p.n_states):
        term = scale(p.utility(s, perfect_action(p, s)), p.prior[s])
        total = term if total is None else add(total, term)
    return total


def evpi(p: DecisionProblem, diagnostics: list | None = None) -> FuzzyNumber:
    best = optimal_prior_action(p, diagnostics)
    return subtract(perfect_info_value(p), prior_expected_utilities(p)[best])


# ---------------------------------------------------------------------------
# decision regions
# ---------------------------------------------------------------------------


def scan_range(exp: GaussianExperiment) -> tuple[float, float]:
    spread = SCAN_HALF_WIDTH * max(exp.stds)
    return min(exp.means) - spread, max(exp.means) + spread


def decision_regions(
    p: DecisionProblem,
    exp: Experiment,
    grid: int = SCAN_POINTS,
    diagnostics: list | None = None,
) -> RegionPartition:
    """Partition of the observation space by posterior-optimal action."""
    if exp.n_states != p.n_states:
        raise InvariantError(f"experiment has {exp.n_states} states, problem has {p.n_states}")
    if isinstance(exp, DiscreteExperiment):
        probs = marginal(p.prior, exp)
        fallback = None
        acts = []
        for k, pk in enumerate(probs):
            if pk > 0:
                acts.append(optimal_posterior_action(p, exp, DiscreteOutcome(k), diagnostics))
            else:
                _note(diagnostics, ZERO_PROBABILITY_OUTCOME)
                if fallback is None:
                    fallback = optimal_prior_action(p, diagnostics)
                acts.append(fallback)
        return DiscreteMap(tuple(acts))
    if not isinstance(exp, GaussianExperiment):
        raise InvariantError(f"unsupported experiment type {type(exp).__name__}")
    if grid < 2:
        raise InvariantError("scan grid needs at least two points")

    def winner(x):
        return optimal_posterior_action(p, exp, RealValue(x), diagnostics)

    lo, hi = scan_range(exp)
    xs = np.linspace(lo, hi, grid).tolist()
    wins = [winner(x) for x in xs]
    cuts: list[tuple[float, int]] = []
    for k in range(grid - 1):
        if wins[k] != wins[k + 1]:
            cuts.extend(_bisect(winner, xs[k], wins[k], xs[k + 1], wins[k + 1]))
    step = (hi - lo) / (grid - 1)
    if any(b[0] - a[0] < 2 * step for a, b in zip(cuts, cuts[1:])):
        _note(diagnostics, CLOSE_CUTS)
    return RealLine(tuple(c for c, _ in cuts), (wins[0],) + tuple(w for _, w in cuts))


def _bisect(winner, a, wa, b, wb):
    """Cut points between ``a`` (won by ``wa``) and ``b`` (won by ``wb``).

    Each cut is returned with the action that wins to its right.
    """
    if b - a <= BISECT_TOL:
        return [(0.5 * (a + b), wb)]
    mid = 0.5 * (a + b)
    wm = winner(mid)
    if wm == wa:
        return _bisect(winner, mid, wm, b, wb)
    if wm == wb:
        return _bisect(winner, a, wa, mid, wm)
    return _bisect(winner, a, wa, mid, wm) + _bisect(winner, mid, wm, b, wb)


def pin_threshold(regions: RegionPartition, cut: float) -> RealLine:
    """Replace the single cut of a two-region partition by ``cut``."""
    if not isinstance(regions, RealLine) or len(regions.cuts) != 1:
        raise InvariantError("a threshold override needs a real-line partition with exactly one cut")
    return RealLine((float(cut),), regions.actions)


def region_probability(exp: Experiment, regions: RegionPartition, state: int, action: int) -> float:
    """``P_state(X(action))``."""
    if isinstance(regions, DiscreteMap):
        if not isinstance(exp, DiscreteExperiment):
            raise InvariantError("discrete partition needs a discrete experiment")
        return math.fsum(exp.likelihood[state][k] for k in regions.outcomes_for(action))
    if not isinstance(exp, GaussianExperiment):
        raise InvariantError("real-line partition needs a Gaussian experiment")
    return predictive_region_prob(exp, state, regions.intervals_for(action))


def region_coefficients(p: DecisionProblem, exp: Experiment, regions: RegionPartition) -> list[list[float]]:
    """``coef[action][state] = xi(state) * P_state(X(action))``."""
    return [
        [p.prior[s] * region_probability(exp, regions, s, a) for s in range(p.n_states)]
        for a in range(p.n_actions)
    ]


# ---------------------------------------------------------------------------
# EVSI
# ---------------------------------------------------------------------------


def _prior_best_eu(p, diagnostics):
    return prior_expected_utilities(p)[optimal_prior_action(p, diagnostics)]


def preposterior_value(p: DecisionProblem, coefficients: Sequence[Sequence[float]]) -> FuzzyNumber:
    """Expected posterior-optimal utility from region coefficients, action-major order."""
    total = None
    for a in range(p.n_actions):
        for s in range(p.n_states):
            c = coefficients[a][s]
            term = scale(p.utility(s, a), c) if c > 0 else ZERO
            total = term if total is None else add(total, term)
    return total


def evsi(
    p: DecisionProblem,
    exp: Experiment,
    regions: RegionPartition | None = None,
    grid: int = SCAN_POINTS,
    diagnostics: list | None = None,
) -> FuzzyNumber:
    """EVSI from the decision regions (exact given the regions)."""
    if regions is None:
        regions = decision_regions(p, exp, grid, diagnostics)
    coef = region_coefficients(p, exp, regions)
    return subtract(preposterior_value(p, coef), _prior_best_eu(p, diagnostics))


def _gl_panels(a: float, b: float, nodes: int):
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    order = min(GL_ORDER, nodes)
    panels = max(1, nodes // order)
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        xs.extend((0.5 * (lo + hi) + half * t).tolist())
        ws.extend((half * w).tolist())
    return xs, ws


def _isotonic(values: list[float], increasing: bool = True) -> list[float]:
    """Pool-adjacent-violators fit."""
    sign = 1.0 if increasing else -1.0
    blocks: list[list[float]] = []
    for v in values:
        blocks.append([sign * v, 1.0])
        while len(blocks) > 1 and blocks[-2][0] > blocks[-1][0]:
            v2, n2 = blocks.pop()
            v1, n1 = blocks.pop()
            blocks.append([(v1 * n1 + v2 * n2) / (n1 + n2), n1 + n2])
    out = []
    for v, n in blocks:
        out.extend([sign * v] * int(n))
    return out


def evsi_direct(
    p: DecisionProblem,
    exp: Experiment,
    levels: int = 33,
    nodes: int = 256,
    regions: RegionPartition | None = None,
    grid: int = SCAN_POINTS,
    diagnostics: list | None = None,
) -> FuzzyNumber:
    """EVSI by integrating the posterior-optimal expected utility over observations.

    Discrete experiments are summed exactly in fuzzy arithmetic.  For a
    Gaussian experiment the alpha-cut endpoints at ``levels`` uniform grades
    are integrated against the predictive density, ``nodes`` quadrature
    nodes per region; the regions only place the panel boundaries at the
    integrand's discontinuities, the optimal action is re-evaluated at every
    node.
    """
    base = _prior_best_eu(p, diagnostics)
    if isinstance(exp, DiscreteExperiment):
        probs = marginal(p.prior, exp)
        total = None
        for k, pk in enumerate(probs):
            if pk <= 0:
                continue
            post = posterior(p.prior, exp, DiscreteOutcome(k))
            eus = expected_utilities(p, post)
            term = scale(eus[_select(eus, diagnostics)], pk)
            total = term if total is None else add(total, term)
        return subtract(total, base)
    if not isinstance(exp, GaussianExperiment):
        raise InvariantError(f"unsupported experiment type {type(exp).__name__}")
    if levels < 2 or nodes < 1:
        raise InvariantError("need at least two grade levels and one node")
    if regions is None:
        regions = decision_regions(p, exp, grid, diagnostics)
    lo, hi = scan_range(exp)
    edges = [lo] + [c for c in regions.cuts if lo < c < hi] + [hi]
    alphas = [k / (levels - 1) for k in range(levels)]
    lows = [[] for _ in alphas]
    highs = [[] for _ in alphas]
    for a, b in zip(edges[:-1], edges[1:]):
        xs, ws = _gl_panels(a, b, nodes)
        for x, w in zip(xs, ws):
            dens = math.fsum(p.prior[s] * gaussian_density(exp, s, x) for s in range(p.n_states))
            eus = expected_utilities(p, posterior(p.prior, exp, RealValue(x)))
            eu = eus[_select(eus, diagnostics)]
            for k, alpha in enumerate(alphas):
                cut = alpha_cut(eu, alpha)
                lows[k].append(w * dens * cut.lo)
                highs[k].append(w * dens * cut.hi)
    lo_end = [math.fsum(v) for v in lows]
    hi_end = [math.fsum(v) for v in highs]
    fixed_lo, fixed_hi = _isotonic(lo_end, True), _isotonic(hi_end, False)
    if fixed_lo != lo_end or fixed_hi != hi_end or fixed_lo[-1] > fixed_hi[-1]:
        _note(diagnostics, ISOTONIC_REPAIR)
        if fixed_lo[-1] > fixed_hi[-1]:
            mid = 0.5 * (fixed_lo[-1] + fixed_hi[-1])
            fixed_lo = [min(v, mid) for v in fixed_lo]
            fixed_hi = [max(v, mid) for v in fixed_hi]
    pts = [(x, a) for x, a in zip(fixed_lo, alphas)] + [
        (x, a) for x, a in reversed(list(zip(fixed_hi, alphas)))
    ]
    return subtract(_build(pts), base)


# ---------------------------------------------------------------------------
# utility rescaling, theorem check, experiment comparison
# ---------------------------------------------------------------------------


def affine_transform(p: DecisionProblem, lam: float, beta: float) -> DecisionProblem:
    """Map every utility through ``lam * U + beta`` (``lam > 0``)."""
    if not (math.isfinite(lam) and lam > 0) or not math.isfinite(beta):
        raise InvariantError("affine transform needs a finite positive scale and finite shift")
    table = tuple(tuple(translate(scale(u, lam), beta) for u in row) for row in p.utilities)
    return replace(p, utilities=table)


@dataclass
class ValueReport:
    evpi: FuzzyNumber
    evsi: FuzzyNumber
    r_evpi_vs_evsi: float
    r_evsi_vs_zero: float
    regions: RegionPartition
    prior_best: int
    coefficients: list[list[float]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    tol: float = INDIFFERENCE_TOL

    @property
    def evpi_dominates(self) -> bool:
        return self.r_evpi_vs_evsi <= 0.5 + self.tol

    @property
    def evsi_nonnegative(self) -> bool:
        return self.r_evsi_vs_zero <= 0.5 + self.tol

    @property
    def holds(self) -> bool:
        return self.evpi_dominates and self.evsi_nonnegative


def verify_theorem51(
    p: DecisionProblem,
    exp: Experiment,
    grid: int = SCAN_POINTS,
    cut: float | None = None,
    tol: float = INDIFFERENCE_TOL,
) -> ValueReport:
    """Compute EVPI and EVSI and check ``EVPI ≽ EVSI ≽ 0``.

    ``cut`` pins the single threshold of a Gaussian partition instead of
    using the computed one.
    """
    diag: list[str] = []
    regions = decision_regions(p, exp, grid, diag)
    if cut is not None:
        regions = pin_threshold(regions, cut)
        _note(diag, THRESHOLD_OVERRIDE)
    vpi = evpi(p, diag)
    vsi = evsi(p, exp, regions, grid, diag)
    return ValueReport(
        evpi=vpi,
        evsi=vsi,
        r_evpi_vs_evsi=kolodziejczyk_r(vpi, vsi),
        r_evsi_vs_zero=kolodziejczyk_r(vsi, ZERO),
        regions=regions,
        prior_best=optimal_prior_action(p),
        coefficients=region_coefficients(p, exp, regions),
        diagnostics=diag,
        tol=tol,
    )


@dataclass
class ExperimentComparison:
    order: list[int]
    evsi: list[FuzzyNumber | None]
    errors: dict[int, str]
    r: list[list[float]]

    @property
    def best(self) -> int | None:
        return self.order[0] if self.order else None


def compare_experiments(
    p: DecisionProblem,
    exps: Sequence[Experiment] | Mapping[str, Experiment],
    grid: int = SCAN_POINTS,
) -> ExperimentComparison:
    """Rank experiments by their EVSI; failures are reported and skipped."""
    items = list(exps.values()) if isinstance(exps, Mapping) else list(exps)
    values: list[FuzzyNumber | None] = []
    errors: dict[int, str] = {}
    for k, e in enumerate(items):
        try:
            values.append(evsi(p, e, grid=grid))
        except FuzzyVOIError as err:
            values.append(None)
            errors[k] = str(err)
    ok = [k for k, v in enumerate(values) if v is not None]
    sub = [values[k] for k in ok]
    order = [ok[i] for i in ranking_order(sub)] if sub else []
    m = r_matrix(sub) if sub else []
    full = [[math.nan] * len(items) for _ in items]
    for i, a in enumerate(ok):
        for j, b in enumerate(ok):
            full[a][b] = m[i][j]
    return ExperimentComparison(order, values, errors, full)
