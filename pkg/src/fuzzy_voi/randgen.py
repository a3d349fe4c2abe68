"""Seeded random decision problems for the theorem check and property tests.

2-4 states, 2-4 actions, 2-5 discrete outcomes; prior and likelihood rows
uniform on the simplex; triangular utilities from sorted uniform triples in
[0, 1].  One trial is fully determined by its integer seed.
"""

from __future__ import annotations

import numpy as np

from .decision import DecisionProblem
from .fuzzy import FuzzyNumber, make_triangular
from .inference import DiscreteExperiment, Distribution, StateSpace


def _simplex(rng: np.random.Generator, n: int) -> tuple[float, ...]:
    v = rng.dirichlet(np.ones(n))
    v = v / v.sum()
    return tuple(float(x) for x in v)


def random_triangle(rng: np.random.Generator, lo: float = 0.0, hi: float = 1.0) -> FuzzyNumber:
    a, b, c = np.sort(rng.uniform(lo, hi, 3))
    return make_triangular(float(a), float(b), float(c))


def random_problem(seed: int) -> tuple[DecisionProblem, DiscreteExperiment]:
    rng = np.random.default_rng(seed)
    n_states = int(rng.integers(2, 5))
    n_actions = int(rng.integers(2, 5))
    n_outcomes = int(rng.integers(2, 6))
    problem = DecisionProblem(
        states=StateSpace(tuple(f"s{i + 1}" for i in range(n_states))),
        actions=tuple(f"a{j + 1}" for j in range(n_actions)),
        prior=Distribution(_simplex(rng, n_states)),
        utilities=tuple(tuple(random_triangle(rng) for _ in range(n_actions)) for _ in range(n_states)),
    )
    exp = DiscreteExperiment(
        outcomes=tuple(f"x{k + 1}" for k in range(n_outcomes)),
        likelihood=tuple(_simplex(rng, n_outcomes) for _ in range(n_states)),
    )
    return problem, exp


def revealing_experiment(n_states: int) -> DiscreteExperiment:
    """Identity likelihood: the outcome names the state."""
    return DiscreteExperiment(
        tuple(f"is_{i + 1}" for i in range(n_states)),
        tuple(tuple(1.0 if i == k else 0.0 for k in range(n_states)) for i in range(n_states)),
    )


def uninformative_experiment(n_states: int, n_outcomes: int = 3) -> DiscreteExperiment:
    row = tuple(1.0 / n_outcomes for _ in range(n_outcomes))
    return DiscreteExperiment(tuple(f"x{k + 1}" for k in range(n_outcomes)), tuple(row for _ in range(n_states)))
