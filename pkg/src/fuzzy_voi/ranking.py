"""Kołodziejczyk preference relation between fuzzy numbers.

``R(U, V)`` is the degree of truth of "U is not higher than V"; ``U`` is
preferred or indifferent to ``V`` when ``R(U, V) <= 0.5``.  It is built from
five Hamming distances between the fuzzy numbers, their intersection, and
their monotone envelopes ("at least U", "at most U").

The extended maximum of two envelopes is evaluated in closed form.  For
nondecreasing membership functions the sup-min extension of ``max`` is the
pointwise minimum (at level ``w`` one needs both arguments to have already
reached ``w``); for nonincreasing ones it is the pointwise maximum.  This is
what makes disjoint ``U < V`` give ``R(U, V) = 1`` and identical arguments
give ``0.5``.  Consequently

    d1 = ∫ max(0, ≥U - ≥V)      d4 = ∫ |≥U - ≥V|
    d2 = ∫ max(0, ≤V - ≤U)      d5 = ∫ |≤U - ≤V|
    d3 = ∫ min(U, V)

and ``R = (d1 + d2 + d3) / (d4 + d5 + 2 d3)``.  Since ``d1 + d1' = d4`` and
``d2 + d2' = d5``, ``R(U, V) + R(V, U) = 1`` whenever the denominator is
positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import InvariantError
from .fuzzy import (
    FuzzyNumber,
    PiecewiseLinear,
    hamming_distance,
    min_integral,
    positive_part_integral,
)

INDIFFERENCE_TOL = 1e-9
_ZERO_DENOMINATOR = 1e-12


class Direction(str, Enum):
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"


@dataclass(frozen=True)
class MonotoneProfile(PiecewiseLinear):
    """Monotone envelope of a fuzzy number, with tails 0 and 1."""

    direction: Direction = Direction.NONDECREASING


def geq_profile(F: FuzzyNumber) -> MonotoneProfile:
    """Envelope "more than or equal to F": ``sup_{u <= w} μ_F(u)``."""
    flank = F.left_flank()
    return MonotoneProfile(
        tuple(x for x, _ in flank), tuple(g for _, g in flank), 0.0, 1.0, Direction.NONDECREASING
    )


def leq_profile(F: FuzzyNumber) -> MonotoneProfile:
    """Envelope "less than or equal to F": ``sup_{u >= w} μ_F(u)``."""
    flank = F.right_flank()
    return MonotoneProfile(
        tuple(x for x, _ in flank), tuple(g for _, g in flank), 1.0, 0.0, Direction.NONINCREASING
    )


@dataclass(frozen=True)
class Distances:
    d1: float
    d2: float
    d3: float
    d4: float
    d5: float

    @property
    def r(self) -> float:
        den = self.d4 + self.d5 + 2.0 * self.d3
        if den < _ZERO_DENOMINATOR:
            return 0.5
        return min(1.0, max(0.0, (self.d1 + self.d2 + self.d3) / den))


def distances(U: FuzzyNumber, V: FuzzyNumber) -> Distances:
    gu, gv = geq_profile(U), geq_profile(V)
    lu, lv = leq_profile(U), leq_profile(V)
    return Distances(
        d1=positive_part_integral(gu, gv),
        d2=positive_part_integral(lv, lu),
        d3=min_integral(U, V),
        d4=hamming_distance(gu, gv),
        d5=hamming_distance(lu, lv),
    )


def kolodziejczyk_r(U: FuzzyNumber, V: FuzzyNumber) -> float:
    """Degree of truth of "U is not higher than V", in [0, 1]."""
    return distances(U, V).r


class Verdict(str, Enum):
    FIRST = "first-preferred"
    SECOND = "second-preferred"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class Preference:
    r: float
    verdict: Verdict

    @property
    def first_weakly_preferred(self) -> bool:
        return self.verdict is not Verdict.SECOND


def verdict_for(r: float, tol: float = INDIFFERENCE_TOL) -> Verdict:
    if abs(r - 0.5) <= tol:
        return Verdict.INDIFFERENT
    return Verdict.FIRST if r < 0.5 else Verdict.SECOND


def prefer(U: FuzzyNumber, V: FuzzyNumber, tol: float = INDIFFERENCE_TOL) -> Preference:
    r = kolodziejczyk_r(U, V)
    return Preference(r, verdict_for(r, tol))


def weakly_prefers(U: FuzzyNumber, V: FuzzyNumber, tol: float = INDIFFERENCE_TOL) -> bool:
    """``U ≽ V``."""
    return kolodziejczyk_r(U, V) <= 0.5 + tol


def r_matrix(candidates: Sequence[FuzzyNumber]) -> list[list[float]]:
    """Pairwise ``R(c_i, c_j)``; the diagonal is 0.5 by definition."""
    n = len(candidates)
    m = [[0.5] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            r = kolodziejczyk_r(candidates[i], candidates[j])
            m[i][j] = r
            m[j][i] = kolodziejczyk_r(candidates[j], candidates[i])
    return m


@dataclass(frozen=True)
class Selection:
    index: int
    cycle_resolved: bool = False
    tied_with: tuple[int, ...] = ()
    copeland: tuple[int, ...] = field(default=(), repr=False)
    r: tuple[tuple[float, ...], ...] = field(default=(), repr=False)


def best_index(candidates: Sequence[FuzzyNumber], tol: float = INDIFFERENCE_TOL) -> Selection:
    """Index of an element preferred or indifferent to every other one.

    The lowest such index is returned.  When the relation has a cycle and no
    element qualifies, the element with the most strict wins is taken
    (lowest index on ties) and ``cycle_resolved`` is set.
    """
    if not candidates:
        raise InvariantError("cannot select from an empty list")
    n = len(candidates)
    if n == 1:
        return Selection(0, r=((0.5,),))
    m = r_matrix(candidates)
    frozen = tuple(tuple(row) for row in m)
    for i in range(n):
        if all(m[i][j] <= 0.5 + tol for j in range(n) if j != i):
            ties = tuple(j for j in range(n) if j != i and abs(m[i][j] - 0.5) <= tol)
            return Selection(i, tied_with=ties, r=frozen)
    wins = tuple(sum(1 for j in range(n) if j != i and m[i][j] < 0.5 - tol) for i in range(n))
    top = max(wins)
    return Selection(wins.index(top), cycle_resolved=True, copeland=wins, r=frozen)


def ranking_order(candidates: Sequence[FuzzyNumber], tol: float = INDIFFERENCE_TOL) -> list[int]:
    """Full order by repeated best-element extraction."""
    remaining = list(range(len(candidates)))
    order = []
    while remaining:
        pick = best_index([candidates[i] for i in remaining], tol).index
        order.append(remaining.pop(pick))
    return order
