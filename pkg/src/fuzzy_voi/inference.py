"""Finite-state Bayesian updating with discrete or Gaussian observation models.

For two states observed through Gaussians with a common standard deviation
``s`` the posterior odds are

    (prior odds) * exp((x - (m1 + m2) / 2) * (m1 - m2) / s**2),

so with means 120 and 100 and variance 64 the exponent is ``(x - 110) / 3.2``
and every posterior-odds threshold has the form ``110 - 3.2 ln c``.  The log
there is natural: with ``c = 6.5`` the tail probabilities .4 * P(X >= t) and
.6 * P(X < t) come out as .1234 and .0136, which a base-10 log does not
reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import InvariantError, ZeroMarginalError

PROB_TOL = 1e-9
_SQRT2 = math.sqrt(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class StateSpace:
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise InvariantError("state space must be non-empty")
        if len(set(self.names)) != len(self.names):
            raise InvariantError("state labels must be unique")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvariantError(f"unknown state {name!r}") from None


@dataclass(frozen=True)
class Distribution:
    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise InvariantError("distribution must be non-empty")
        if any(not math.isfinite(p) or p < 0 for p in probs):
            raise InvariantError("probabilities must be finite and nonnegative")
        if abs(math.fsum(probs) - 1.0) > PROB_TOL:
            raise InvariantError(f"probabilities sum to {math.fsum(probs)!r}, not 1")

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    def __iter__(self):
        return iter(self.probs)

    @classmethod
    def point_mass(cls, n: int, i: int) -> "Distribution":
        return cls(tuple(1.0 if k == i else 0.0 for k in range(n)))


@dataclass(frozen=True)
class DiscreteExperiment:
    outcomes: tuple[str, ...]
    likelihood: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "likelihood", tuple(tuple(float(p) for p in row) for row in self.likelihood))
        if not self.outcomes or len(set(self.outcomes)) != len(self.outcomes):
            raise InvariantError("outcome names must be non-empty and unique")
        for row in self.likelihood:
            if len(row) != len(self.outcomes):
                raise InvariantError("likelihood row length does not match the outcome count")
            if any(not math.isfinite(p) or p < 0 for p in row):
                raise InvariantError("likelihoods must be finite and nonnegative")
            if abs(math.fsum(row) - 1.0) > PROB_TOL:
                raise InvariantError(f"likelihood row sums to {math.fsum(row)!r}, not 1")

    @property
    def n_states(self) -> int:
        return len(self.likelihood)


@dataclass(frozen=True)
class GaussianExperiment:
    means: tuple[float, ...]
    stds: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        object.__setattr__(self, "stds", tuple(float(s) for s in self.stds))
        if len(self.means) != len(self.stds) or not self.means:
            raise InvariantError("means and stds must be non-empty and aligned")
        if any(not math.isfinite(m) for m in self.means):
            raise InvariantError("means must be finite")
        if any(not (math.isfinite(s) and s > 0) for s in self.stds):
            raise InvariantError("every standard deviation must be positive")

    @property
    def n_states(self) -> int:
        return len(self.means)


Experiment = Union[DiscreteExperiment, GaussianExperiment]


@dataclass(frozen=True)
class DiscreteOutcome:
    index: int


@dataclass(frozen=True)
class RealValue:
    x: float

    def __post_init__(self):
        if not math.isfinite(self.x):
            raise InvariantError("observation must be finite")


Observation = Union[DiscreteOutcome, RealValue]


def _check_variant(exp: Experiment, obs: Observation) -> None:
    if isinstance(exp, DiscreteExperiment):
        if not isinstance(obs, DiscreteOutcome):
            raise InvariantError("discrete experiment needs a discrete outcome")
        if not 0 <= obs.index < len(exp.outcomes):
            raise InvariantError(f"outcome index {obs.index} out of range")
    elif isinstance(exp, GaussianExperiment):
        if not isinstance(obs, RealValue):
            raise InvariantError("Gaussian experiment needs a real-valued observation")
    else:
        raise InvariantError(f"unsupported experiment type {type(exp).__name__}")


def gaussian_cdf(z: float) -> float:
    """Standard normal CDF through the complementary error function."""
    return 0.5 * math.erfc(-z / _SQRT2)


def gaussian_sf(z: float) -> float:
    return 0.5 * math.erfc(z / _SQRT2)


def _log_density(x: float, m: float, s: float) -> float:
    u = (x - m) / s
    return -0.5 * u * u - math.log(s) - _LOG_SQRT_2PI


def likelihood(exp: Experiment, state: int, obs: Observation) -> float:
    """``P_state(obs)``: a table entry, or the Gaussian density at ``obs.x``."""
    _check_variant(exp, obs)
    if isinstance(exp, DiscreteExperiment):
        return exp.likelihood[state][obs.index]
    return math.exp(_log_density(obs.x, exp.means[state], exp.stds[state]))


def posterior(prior: Distribution, exp: Experiment, obs: Observation) -> Distribution:
    """Bayes update of ``prior`` after observing ``obs``."""
    _check_variant(exp, obs)
    n = len(prior)
    if exp.n_states != n:
        raise InvariantError(f"experiment has {exp.n_states} states, prior has {n}")
    live = [i for i in range(n) if prior[i] > 0]
    if isinstance(exp, DiscreteExperiment):
        lik = [exp.likelihood[i][obs.index] for i in range(n)]
        if len({lik[i] for i in live}) == 1 and lik[live[0]] > 0:
            return prior
        weights = [lik[i] * prior[i] for i in range(n)]
        total = math.fsum(weights)
        if total <= 0:
            raise ZeroMarginalError(f"outcome {exp.outcomes[obs.index]!r} is impossible under the prior")
        return Distribution(tuple(w / total for w in weights))
    # log space, shifted by the largest term, so extreme x cannot underflow
    logs = [_log_density(obs.x, exp.means[i], exp.stds[i]) for i in range(n)]
    if len({(exp.means[i], exp.stds[i]) for i in live}) == 1:
        return prior
    top = max(logs[i] + math.log(prior[i]) for i in live)
    weights = [math.exp(logs[i] + math.log(prior[i]) - top) if prior[i] > 0 else 0.0 for i in range(n)]
    total = math.fsum(weights)
    return Distribution(tuple(w / total for w in weights))


def marginal(prior: Distribution, exp: DiscreteExperiment) -> tuple[float, ...]:
    """Predictive probability of each outcome."""
    return tuple(
        math.fsum(prior[i] * exp.likelihood[i][k] for i in range(len(prior)))
        for k in range(len(exp.outcomes))
    )


def predictive_region_prob(exp: GaussianExperiment, state: int, region: Sequence[tuple[float, float]]) -> float:
    """Probability under ``state`` of a union of disjoint sorted intervals.

    Interval endpoints may be infinite.  Upper-tail pieces use the survival
    function so small tail masses keep their relative accuracy.
    """
    m, s = exp.means[state], exp.stds[state]
    prev = -math.inf
    total = []
    for a, b in region:
        a, b = float(a), float(b)
        if math.isnan(a) or math.isnan(b) or b < a or a < prev:
            raise InvariantError(f"malformed region {list(region)!r}")
        prev = b
        za, zb = (a - m) / s, (b - m) / s
        if za >= 0:
            total.append(gaussian_sf(za) - gaussian_sf(zb))
        else:
            total.append(gaussian_cdf(zb) - gaussian_cdf(za))
    return min(1.0, max(0.0, math.fsum(total)))


def gaussian_density(exp: GaussianExperiment, state: int, x: float) -> float:
    return math.exp(_log_density(x, exp.means[state], exp.stds[state]))
