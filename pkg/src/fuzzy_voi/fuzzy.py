"""Exact arithmetic on piecewise-linear fuzzy numbers.

A fuzzy number is stored as the list of breakpoints ``(abscissa, grade)`` of
its membership function.  Membership is the linear interpolation between
consecutive breakpoints and zero outside the first and last abscissa.  Two
consecutive breakpoints may share an abscissa; that pair is a vertical edge
(a jump in the membership function) and the membership at that abscissa is
the larger grade, so every alpha-cut stays closed.

Addition, negation, scaling and translation are closed over this family, so
they are computed without any alpha-grid discretisation.  The sum is built
flank by flank: each flank is a monotone curve in the (grade, abscissa)
plane, and the alpha-cut endpoints of the sum are the sums of the operands'
endpoints.  Between two consecutive grades taken from either operand both
endpoint functions are linear, so evaluating them at the union of grades is
exact.  A flat run of grade ``g`` makes the endpoint function jump at ``g``;
both one-sided values are carried through the sum.

Integrals (area, Hamming distance, intersection area) are evaluated exactly
over merged breakpoint sets, splitting each segment where two linear pieces
cross.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DivergentIntegralError, InvariantError

__all__ = [
    "FuzzyNumber",
    "Interval",
    "PiecewiseLinear",
    "make_crisp",
    "make_triangular",
    "make_trapezoidal",
    "from_breakpoints",
    "membership_at",
    "alpha_cut",
    "add",
    "negate",
    "subtract",
    "scale",
    "translate",
    "area",
    "hamming_distance",
    "positive_part_integral",
    "min_integral",
    "pointwise_min",
    "sup_distance",
    "ZERO",
]


def _neg(x: float) -> float:
    # 0.0 - x never produces -0.0, which would leak "-0" into reports
    return 0.0 - x


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InvariantError(f"interval bounds out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


# ---------------------------------------------------------------------------
# piecewise-linear functions on the real line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinear:
    """Piecewise-linear function with constant tails.

    ``xs`` is nondecreasing; a repeated abscissa encodes a jump.  Left of
    ``xs[0]`` the function equals ``left`` and right of ``xs[-1]`` it equals
    ``right``.  Integrals only ever use one-sided limits, so isolated point
    values (a crisp spike) have no effect on them.
    """

    xs: tuple[float, ...]
    ys: tuple[float, ...]
    left: float = 0.0
    right: float = 0.0

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or not self.xs:
            raise InvariantError("piecewise-linear function needs matching, non-empty xs and ys")
        if any(b < a for a, b in zip(self.xs, self.xs[1:])):
            raise InvariantError("piecewise-linear abscissas must be nondecreasing")

    def left_limit(self, x: float) -> float:
        xs, ys = self.xs, self.ys
        k = bisect_left(xs, x)
        if k == 0:
            return self.left
        if k == len(xs):
            return self.right
        return _interp(xs[k - 1], ys[k - 1], xs[k], ys[k], x)

    def right_limit(self, x: float) -> float:
        xs, ys = self.xs, self.ys
        j = bisect_right(xs, x) - 1
        if j < 0:
            return self.left
        if j == len(xs) - 1:
            return self.right
        return _interp(xs[j], ys[j], xs[j + 1], ys[j + 1], x)

    def __call__(self, x: float) -> float:
        lo, hi = bisect_left(self.xs, x), bisect_right(self.xs, x)
        best = max(self.left_limit(x), self.right_limit(x))
        if lo < hi:
            best = max(best, max(self.ys[lo:hi]))
        return best


def _interp(x0: float, y0: float, x1: float, y1: float, x: float) -> float:
    if x1 == x0:
        return y1
    if x == x0:
        return y0
    if x == x1:
        return y1
    return y0 + (y1 - y0) * ((x - x0) / (x1 - x0))


def _segments(f: PiecewiseLinear, g: PiecewiseLinear):
    """Yield ``(a, b, fa, fb, ga, gb)`` for every bounded piece on which both are linear."""
    knots = sorted(set(f.xs) | set(g.xs))
    for a, b in zip(knots, knots[1:]):
        yield a, b, f.right_limit(a), f.left_limit(b), g.right_limit(a), g.left_limit(b)


def _check_tails(left: float, right: float, positive_only: bool) -> None:
    for tail in (left, right):
        bad = tail > 0 if positive_only else tail != 0
        if bad:
            raise DivergentIntegralError(
                "integrand does not vanish at infinity (tail value %r)" % tail
            )


def _abs_segment(width: float, d0: float, d1: float) -> float:
    """Exact integral of |linear| over a segment whose end values are d0, d1."""
    if (d0 >= 0 and d1 >= 0) or (d0 <= 0 and d1 <= 0):
        return 0.5 * width * (abs(d0) + abs(d1))
    # sign change: two triangles meeting at the crossing point
    return 0.5 * width * (d0 * d0 + d1 * d1) / (abs(d0) + abs(d1))


def _pos_segment(width: float, d0: float, d1: float) -> float:
    if d0 >= 0 and d1 >= 0:
        return 0.5 * width * (d0 + d1)
    if d0 <= 0 and d1 <= 0:
        return 0.0
    p = max(d0, d1)
    return 0.5 * width * p * p / (abs(d0) + abs(d1))


def hamming_distance(f, g) -> float:
    """Integral of ``|f - g|`` over the real line, computed exactly.

    Accepts fuzzy numbers or :class:`PiecewiseLinear` functions.  Raises
    :class:`DivergentIntegralError` when the tails of ``f - g`` do not vanish.
    """
    f, g = _as_pwl(f), _as_pwl(g)
    _check_tails(f.left - g.left, f.right - g.right, positive_only=False)
    return math.fsum(
        _abs_segment(b - a, fa - ga, fb - gb) for a, b, fa, fb, ga, gb in _segments(f, g)
    )


def positive_part_integral(f, g) -> float:
    """Integral of ``max(0, f - g)``."""
    f, g = _as_pwl(f), _as_pwl(g)
    _check_tails(f.left - g.left, f.right - g.right, positive_only=True)
    return math.fsum(
        _pos_segment(b - a, fa - ga, fb - gb) for a, b, fa, fb, ga, gb in _segments(f, g)
    )


def min_integral(f, g) -> float:
    """Integral of ``min(f, g)`` for functions vanishing at infinity."""
    f, g = _as_pwl(f), _as_pwl(g)
    _check_tails(min(f.left, g.left), min(f.right, g.right), positive_only=False)
    total = []
    for a, b, fa, fb, ga, gb in _segments(f, g):
        w = b - a
        # min = (f + g - |f - g|) / 2
        total.append(0.25 * w * (fa + fb + ga + gb) - 0.5 * _abs_segment(w, fa - ga, fb - gb))
    return max(0.0, math.fsum(total))


def pointwise_min(f, g) -> PiecewiseLinear:
    """Pointwise minimum of two piecewise-linear functions, exact.

    The result carries a breakpoint at every knot of either argument and at
    every crossing of the two linear pieces in between.  It is generally not
    a fuzzy number (it need not reach grade 1).
    """
    f, g = _as_pwl(f), _as_pwl(g)
    knots = sorted(set(f.xs) | set(g.xs))
    xs: list[float] = []
    ys: list[float] = []

    def emit(x, y):
        if xs and xs[-1] == x and ys[-1] == y:
            return
        xs.append(x)
        ys.append(y)

    for i, x in enumerate(knots):
        emit(x, min(f.left_limit(x), g.left_limit(x)))
        emit(x, min(f(x), g(x)))
        emit(x, min(f.right_limit(x), g.right_limit(x)))
        if i + 1 < len(knots):
            b = knots[i + 1]
            d0 = f.right_limit(x) - g.right_limit(x)
            d1 = f.left_limit(b) - g.left_limit(b)
            if d0 * d1 < 0:
                t = d0 / (d0 - d1)
                xc = x + (b - x) * t
                if x < xc < b:
                    emit(xc, f.right_limit(x) + (f.left_limit(b) - f.right_limit(x)) * t)
    return PiecewiseLinear(tuple(xs), tuple(ys), min(f.left, g.left), min(f.right, g.right))


# ---------------------------------------------------------------------------
# fuzzy numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class FuzzyNumber:
    """Normalized, quasiconcave, piecewise-linear fuzzy number with compact support.

    Build instances with :func:`make_crisp`, :func:`make_triangular`,
    :func:`make_trapezoidal` or :func:`from_breakpoints`; the constructor
    validates the invariants and rejects anything else.  Equality is exact
    equality of breakpoints; use :func:`sup_distance` for tolerant checks.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        _validate(self.points)

    # -- structure ---------------------------------------------------------

    @property
    def is_crisp(self) -> bool:
        return len(self.points) == 1

    @property
    def abscissas(self) -> tuple[float, ...]:
        return tuple(p[0] for p in self.points)

    @property
    def grades(self) -> tuple[float, ...]:
        return tuple(p[1] for p in self.points)

    def support(self) -> Interval:
        return Interval(self.points[0][0], self.points[-1][0])

    def core(self) -> Interval:
        """Modal set: the closed interval where the grade equals 1."""
        ones = [x for x, g in self.points if g == 1.0]
        return Interval(ones[0], ones[-1])

    def left_flank(self) -> list[tuple[float, float]]:
        """Breakpoints from the support start up to the first grade-1 point."""
        if self.is_crisp:
            v = self.points[0][0]
            return [(v, 0.0), (v, 1.0)]
        out = []
        for p in self.points:
            out.append(p)
            if p[1] == 1.0:
                break
        return out

    def right_flank(self) -> list[tuple[float, float]]:
        """Breakpoints from the last grade-1 point to the support end."""
        if self.is_crisp:
            v = self.points[0][0]
            return [(v, 1.0), (v, 0.0)]
        out = []
        for p in reversed(self.points):
            out.append(p)
            if p[1] == 1.0:
                break
        out.reverse()
        return out

    def as_function(self) -> PiecewiseLinear:
        return PiecewiseLinear(self.abscissas, self.grades, 0.0, 0.0)

    # -- evaluation --------------------------------------------------------

    def membership(self, w: float) -> float:
        return membership_at(self, w)

    def __call__(self, w: float) -> float:
        return membership_at(self, w)

    def alpha_cut(self, alpha: float) -> Interval:
        return alpha_cut(self, alpha)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, FuzzyNumber):
            return add(self, other)
        if isinstance(other, (int, float)):
            return translate(self, float(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        if isinstance(other, FuzzyNumber):
            return subtract(self, other)
        if isinstance(other, (int, float)):
            return translate(self, -float(other))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return scale(self, float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        if self.is_crisp:
            return f"FuzzyNumber.crisp({self.points[0][0]!r})"
        body = ", ".join(f"({x:.6g}, {g:.6g})" for x, g in self.points)
        return f"FuzzyNumber([{body}])"

    def to_list(self) -> list[list[float]]:
        return [[x, g] for x, g in self.points]


def _validate(points) -> None:
    if not points:
        raise InvariantError("fuzzy number needs at least one breakpoint")
    for x, g in points:
        if not (math.isfinite(x) and math.isfinite(g)):
            raise InvariantError("breakpoints must be finite")
        if g < 0.0 or g > 1.0:
            raise InvariantError(f"grade {g!r} outside [0, 1]")
    if len(points) == 1:
        if points[0][1] != 1.0:
            raise InvariantError("normality violated: single breakpoint must have grade 1")
        return
    xs = [p[0] for p in points]
    gs = [p[1] for p in points]
    for a, b in zip(xs, xs[1:]):
        if b < a:
            raise InvariantError("abscissas must be nondecreasing")
    for i in range(len(xs) - 2):
        if xs[i] == xs[i + 1] == xs[i + 2]:
            raise InvariantError("at most two consecutive breakpoints may share an abscissa")
    if gs[0] != 0.0 or gs[-1] != 0.0:
        raise InvariantError("nonzero boundary grade on a multi-point list")
    if max(gs) != 1.0:
        raise InvariantError("normality violated: no grade equals 1")
    peak = gs.index(1.0)
    if any(b < a for a, b in zip(gs[: peak + 1], gs[1 : peak + 1])):
        raise InvariantError("quasiconcavity violated: grades must rise to the modal set")
    if any(b > a for a, b in zip(gs[peak:], gs[peak + 1 :])):
        raise InvariantError("quasiconcavity violated: grades must fall after the modal set")


def _normalize(points: Iterable[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    """Canonical breakpoint list for arithmetic results.

    Drops exact duplicates, trims zero-grade padding at both ends, thins
    runs of equal abscissa to their first, highest and last points, and
    collapses a single-abscissa shape to the crisp form.
    """
    pts: list[tuple[float, float]] = []
    for x, g in points:
        x, g = float(x), float(g)
        if pts and pts[-1] == (x, g):
            continue
        pts.append((x, g))
    if not pts:
        raise InvariantError("fuzzy number needs at least one breakpoint")
    # zero-grade padding: keep only the last leading zero and the first trailing zero
    while len(pts) > 2 and pts[0][1] == 0.0 and pts[1][1] == 0.0:
        pts.pop(0)
    while len(pts) > 2 and pts[-1][1] == 0.0 and pts[-2][1] == 0.0:
        pts.pop()
    if all(x == pts[0][0] for x, _ in pts):
        return ((pts[0][0], 1.0),) if any(g == 1.0 for _, g in pts) else tuple(pts)
    out: list[tuple[float, float]] = []
    i = 0
    while i < len(pts):
        j = i
        while j + 1 < len(pts) and pts[j + 1][0] == pts[i][0]:
            j += 1
        run = pts[i : j + 1]
        if len(run) <= 2:
            out.extend(run)
        else:
            top = max(range(len(run)), key=lambda k: run[k][1])
            keep = sorted({0, top, len(run) - 1})
            out.extend(run[k] for k in keep)
        i = j + 1
    return tuple(out)


def _build(points) -> FuzzyNumber:
    return FuzzyNumber(_normalize(points))


def _finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvariantError(f"non-finite value {v!r}")


def make_crisp(v: float) -> FuzzyNumber:
    """Fuzzy number with membership 1 at ``v`` and 0 elsewhere."""
    _finite(v)
    return FuzzyNumber(((float(v) + 0.0, 1.0),))


def make_triangular(a: float, b: float, c: float) -> FuzzyNumber:
    _finite(a, b, c)
    if not a <= b <= c:
        raise InvariantError(f"triangular parameters out of order: {a}, {b}, {c}")
    return _build([(a, 0.0), (b, 1.0), (c, 0.0)])


def make_trapezoidal(a: float, b: float, c: float, d: float) -> FuzzyNumber:
    _finite(a, b, c, d)
    if not a <= b <= c <= d:
        raise InvariantError(f"trapezoidal parameters out of order: {a}, {b}, {c}, {d}")
    return _build([(a, 0.0), (b, 1.0), (c, 1.0), (d, 0.0)])


def from_breakpoints(points: Sequence[Sequence[float]]) -> FuzzyNumber:
    """Validate a candidate breakpoint list.

    Exact duplicate points and zero-grade padding at the ends are removed
    (the support is the closure of the positive-grade set); flat interior
    runs are kept as given.  A repeated abscissa is accepted as a vertical
    edge.
    """
    cleaned: list[tuple[float, float]] = []
    for p in points:
        if len(p) != 2:
            raise InvariantError(f"breakpoint must be an (abscissa, grade) pair, got {p!r}")
        x, g = float(p[0]), float(p[1])
        if cleaned and cleaned[-1] == (x, g):
            continue
        cleaned.append((x, g))
    while len(cleaned) > 2 and cleaned[0][1] == 0.0 and cleaned[1][1] == 0.0:
        cleaned.pop(0)
    while len(cleaned) > 2 and cleaned[-1][1] == 0.0 and cleaned[-2][1] == 0.0:
        cleaned.pop()
    if len(cleaned) > 1 and all(x == cleaned[0][0] for x, _ in cleaned):
        _validate(tuple(cleaned))
        return make_crisp(cleaned[0][0])
    return FuzzyNumber(tuple(cleaned))


ZERO = make_crisp(0.0)


def membership_at(F: FuzzyNumber, w: float) -> float:
    pts = F.points
    if len(pts) == 1:
        return 1.0 if w == pts[0][0] else 0.0
    xs = F.abscissas
    if w < xs[0] or w > xs[-1]:
        return 0.0
    lo, hi = bisect_left(xs, w), bisect_right(xs, w)
    if lo < hi:
        return max(g for _, g in pts[lo:hi])
    (x0, g0), (x1, g1) = pts[lo - 1], pts[lo]
    return _interp(x0, g0, x1, g1, w)


# -- flank endpoint functions ----------------------------------------------
#
# A flank is a list of (abscissa, grade) pairs, both nondecreasing, from
# grade 0 to grade 1.  lower(alpha) is the smallest abscissa with grade >=
# alpha (left-continuous in alpha); upper(alpha) is its right limit, which
# differs from lower(alpha) only where the flank has a flat run at alpha.


def _flank_lower(xs, gs, alpha: float) -> float:
    i = bisect_left(gs, alpha)
    if i == 0:
        return xs[0]
    if i == len(gs):
        return xs[-1]
    if gs[i] == alpha:
        return xs[i]
    return _clamped(xs[i - 1], gs[i - 1], xs[i], gs[i], alpha)


def _flank_upper(xs, gs, alpha: float) -> float:
    j = bisect_right(gs, alpha) - 1
    if j < 0:
        return xs[0]
    if gs[j] == alpha or j == len(gs) - 1:
        return xs[j]
    return _clamped(xs[j], gs[j], xs[j + 1], gs[j + 1], alpha)


def _clamped(x0, g0, x1, g1, alpha):
    x = x0 + (x1 - x0) * ((alpha - g0) / (g1 - g0))
    return min(max(x, x0), x1)


def _split(flank):
    return [p[0] for p in flank], [p[1] for p in flank]


def _sum_flanks(flanks) -> list[tuple[float, float]]:
    """Exact left flank of a sum, given the left flanks of the operands."""
    parts = [_split(f) for f in flanks]
    grades = sorted({g for _, gs in parts for g in gs})
    out: list[tuple[float, float]] = []
    for g in grades:
        lower = math.fsum(_flank_lower(xs, gs, g) for xs, gs in parts)
        out.append((lower, g))
        if g < 1.0:
            upper = math.fsum(_flank_upper(xs, gs, g) for xs, gs in parts)
            if upper != lower:
                out.append((upper, g))
    return out


def _mirror(flank):
    return [(_neg(x), g) for x, g in reversed(flank)]


def add(F: FuzzyNumber, G: FuzzyNumber) -> FuzzyNumber:
    """Extension-principle sum, exact."""
    if G.is_crisp:
        return translate(F, G.points[0][0])
    if F.is_crisp:
        return translate(G, F.points[0][0])
    left = _sum_flanks([F.left_flank(), G.left_flank()])
    # right flank of F + G is the mirrored left flank of (-F) + (-G)
    right = _mirror(_sum_flanks([_mirror(F.right_flank()), _mirror(G.right_flank())]))
    return _build(left + right)


def negate(F: FuzzyNumber) -> FuzzyNumber:
    return FuzzyNumber(tuple((_neg(x), g) for x, g in reversed(F.points)))


def subtract(F: FuzzyNumber, G: FuzzyNumber) -> FuzzyNumber:
    return add(F, negate(G))


def scale(F: FuzzyNumber, lam: float) -> FuzzyNumber:
    """Product by a real scalar; ``lam = 0`` collapses to crisp zero."""
    _finite(lam)
    if lam == 0:
        return ZERO
    if lam < 0:
        return scale(negate(F), -lam)
    if lam == 1:
        return F
    return _build((x * lam + 0.0, g) for x, g in F.points)


def translate(F: FuzzyNumber, beta: float) -> FuzzyNumber:
    _finite(beta)
    if beta == 0:
        return F
    return _build((x + beta, g) for x, g in F.points)


def alpha_cut(F: FuzzyNumber, alpha: float) -> Interval:
    """Closed alpha-level set; ``alpha = 0`` gives the support closure."""
    if not 0.0 <= alpha <= 1.0:
        raise InvariantError(f"alpha {alpha!r} outside [0, 1]")
    if F.is_crisp:
        v = F.points[0][0]
        return Interval(v, v)
    if alpha == 0.0:
        return F.support()
    lx, lg = _split(F.left_flank())
    rx, rg = _split(_mirror(F.right_flank()))
    return Interval(_flank_lower(lx, lg, alpha), _neg(_flank_lower(rx, rg, alpha)))


def area(F: FuzzyNumber) -> float:
    """Integral of the membership function (trapezoid rule is exact here)."""
    pts = F.points
    return math.fsum(0.5 * (x1 - x0) * (g0 + g1) for (x0, g0), (x1, g1) in zip(pts, pts[1:]))


def sup_distance(F: FuzzyNumber, G: FuzzyNumber) -> float:
    """Largest membership difference over the merged breakpoints.

    Both one-sided limits are compared at every knot, so a shifted vertical
    edge is detected even when the point values agree.
    """
    f, g = F.as_function(), G.as_function()
    worst = 0.0
    for x in sorted(set(f.xs) | set(g.xs)):
        worst = max(
            worst,
            abs(f(x) - g(x)),
            abs(f.left_limit(x) - g.left_limit(x)),
            abs(f.right_limit(x) - g.right_limit(x)),
        )
    return worst


def _as_pwl(f) -> PiecewiseLinear:
    if isinstance(f, PiecewiseLinear):
        return f
    if isinstance(f, FuzzyNumber):
        return f.as_function()
    raise TypeError(f"expected a fuzzy number or piecewise-linear function, got {type(f).__name__}")
