"""Simple fuzzy random variables and their expected value."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InvariantError
from .fuzzy import ZERO, FuzzyNumber, add, scale

PROB_TOL = 1e-9


@dataclass(frozen=True)
class SimpleFRV:
    """Finitely many fuzzy values, each taken with the given probability."""

    values: tuple[FuzzyNumber, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if not self.values or len(self.values) != len(self.probs):
            raise InvariantError("values and probs must be non-empty and of equal length")
        if any(p < 0 for p in self.probs):
            raise InvariantError("probabilities must be nonnegative")
        if abs(sum(self.probs) - 1.0) > PROB_TOL:
            raise InvariantError(f"probabilities sum to {sum(self.probs)!r}, not 1")


def expected_value(v: SimpleFRV) -> FuzzyNumber:
    """Probability-weighted fuzzy sum, folded left to right in declared order."""
    total = None
    for value, p in zip(v.values, v.probs):
        term = scale(value, p) if p > 0 else ZERO
        total = term if total is None else add(total, term)
    return total


def expected_utility(
    utilities: Mapping[tuple[int, int], FuzzyNumber] | Sequence[Sequence[FuzzyNumber]],
    action: int,
    probs: Sequence[float],
) -> FuzzyNumber:
    """Expected fuzzy utility of ``action`` when states have the given probabilities.

    ``utilities`` is either a ``(state, action) -> FuzzyNumber`` mapping or a
    table indexed ``[state][action]``.
    """
    values = []
    for s in range(len(probs)):
        try:
            values.append(utilities[(s, action)] if isinstance(utilities, Mapping) else utilities[s][action])
        except (KeyError, IndexError):
            raise InvariantError(f"no utility for state {s}, action {action}") from None
    return expected_value(SimpleFRV(tuple(values), tuple(probs)))
