"""Exact-rational Newton polygon calculus.

A Newton polygon of height ``2g`` is stored as its sorted slope multiset.
Basic graphs live on ``[0, 2]`` and are either piecewise linear (a vertex
list) or the fixed parabola ``y = x**2 / 4``.  Nothing in this module touches
floating point.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import accumulate
from math import ceil
from typing import Iterable, Union

from .errors import (
    DomainError,
    DomainMismatch,
    EmptyPolygon,
    NewtonLabError,
    NotSymmetric,
    SlopeOutOfRange,
)

Rational = Union[int, Fraction, str]

__all__ = [
    "NewtonPolygon",
    "PiecewiseLinear",
    "Parabola",
    "PARABOLA",
    "LatticeCount",
    "from_slopes",
    "from_blocks",
    "parse_slopes",
    "format_slopes",
    "format_rational",
    "evaluate",
    "lies_above",
    "amalgamate",
    "scaled",
    "lattice_points_below",
    "min_gap",
]


def _q(value: Rational) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'a/b' string")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class NewtonPolygon:
    """Symmetric slope multiset of even size ``2g``.

    Stored as ascending ``(slope, multiplicity)`` blocks so that polygons of
    large genus with few distinct slopes stay cheap; ``slopes`` expands the
    multiset.  Build instances through :func:`from_slopes` or
    :func:`from_blocks`; the constructor trusts its input.
    """

    blocks: tuple[tuple[Fraction, int], ...] = ()

    @cached_property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(s for s, m in self.blocks for _ in range(m))

    @cached_property
    def height(self) -> int:
        return sum(m for _, m in self.blocks)

    @property
    def genus(self) -> int:
        return self.height // 2

    @property
    def domain(self) -> Fraction:
        return Fraction(self.height)

    def multiplicity(self, slope: Rational) -> int:
        return dict(self.blocks).get(_q(slope), 0)

    @property
    def p_rank(self) -> int:
        return self.multiplicity(0)

    @cached_property
    def _ys(self) -> tuple[Fraction, ...]:
        return (Fraction(0),) + tuple(accumulate(self.slopes))

    def ordinates(self) -> list[Fraction]:
        """Values ``f(0), f(1), ..., f(2g)``."""
        return list(self._ys)

    @cached_property
    def _vertices(self) -> tuple[tuple[Fraction, Fraction], ...]:
        x, y = Fraction(0), Fraction(0)
        pts = [(x, y)]
        for s, m in self.blocks:
            x, y = x + m, y + s * m
            pts.append((x, y))
        return tuple(pts)

    def vertices(self) -> list[tuple[Fraction, Fraction]]:
        return list(self._vertices)

    def breakpoints(self) -> list[Fraction]:
        return [x for x, _ in self._vertices]

    def value_at(self, x: Rational) -> Fraction:
        x = _q(x)
        if x < 0 or x > self.height:
            raise DomainError(f"x={format_rational(x)} outside [0, {self.height}]")
        if self.height == 0:
            return Fraction(0)
        k = max(bisect_left(self.breakpoints(), x), 1)
        (x0, y0), s = self._vertices[k - 1], self.blocks[k - 1][0]
        return y0 + s * (x - x0)

    def __str__(self) -> str:
        return format_slopes(self)


def _from_counts(counts: Counter) -> NewtonPolygon:
    counts = Counter({s: c for s, c in counts.items() if c})
    for s in counts:
        if s < 0 or s > 1:
            raise SlopeOutOfRange(f"slope {format_rational(s)} outside [0, 1]")
    total = sum(counts.values())
    if total % 2:
        raise NotSymmetric(f"odd slope count {total}")
    for s, c in counts.items():
        if counts.get(1 - s, 0) != c:
            raise NotSymmetric(
                f"multiplicity({format_rational(s)})={c} but "
                f"multiplicity({format_rational(1 - s)})={counts.get(1 - s, 0)}"
            )
    if sum((s * c for s, c in counts.items()), Fraction(0)) != total // 2:
        raise NotSymmetric("slope sum differs from g")
    return NewtonPolygon(tuple(sorted(counts.items())))


def from_slopes(slopes: Iterable[Rational]) -> NewtonPolygon:
    return _from_counts(Counter(_q(s) for s in slopes))


def from_blocks(blocks: Iterable[tuple[Iterable[Rational], int]]) -> NewtonPolygon:
    """Polygon from ``(slope_block, copies)`` pairs, e.g. ``[((0, 1), 10), ((Fraction(1, 2),), 4)]``."""
    counts: Counter = Counter()
    for block, copies in blocks:
        if copies < 0:
            raise NewtonLabError(f"negative block multiplicity {copies}")
        for s in block:
            counts[_q(s)] += copies
    return _from_counts(counts)


def parse_slopes(text: str) -> NewtonPolygon:
    text = text.strip()
    if not text:
        return NewtonPolygon()
    try:
        values = [Fraction(tok.strip()) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise NewtonLabError(f"cannot parse slope list {text!r}: {exc}") from None
    return from_slopes(values)


def format_slopes(polygon: NewtonPolygon) -> str:
    return ",".join(format_rational(s) for s in polygon.slopes)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Convex symmetric piecewise-linear basic graph on ``[0, 2]``."""

    vertices: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple((_q(x), _q(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", pts)
        if len(pts) < 2 or pts[0] != (0, 0) or pts[-1] != (2, 1):
            raise NewtonLabError("basic graph must run from (0,0) to (2,1)")
        xs = [x for x, _ in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise NewtonLabError("vertex abscissae must be strictly increasing")
        sl = self.segment_slopes()
        if any(b < a for a, b in zip(sl, sl[1:])):
            raise NewtonLabError("basic graph is not convex")
        # slope m at x pairs with slope 1 - m at 2 - x
        mirror = _values_at(self, [2 - x for x in reversed(xs)])
        if any(m != y + 1 - x for (x, y), m in zip(pts, reversed(mirror))):
            raise NotSymmetric("basic graph is not symmetric")

    @classmethod
    def _unchecked(cls, vertices: tuple[tuple[Fraction, Fraction], ...]) -> "PiecewiseLinear":
        # for vertices already known to form a basic graph, e.g. a scaled polygon
        graph = object.__new__(cls)
        object.__setattr__(graph, "vertices", vertices)
        return graph

    @property
    def domain(self) -> Fraction:
        return Fraction(2)

    def segment_slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:])]

    @cached_property
    def _xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.vertices)

    def breakpoints(self) -> list[Fraction]:
        return list(self._xs)

    def value_at(self, x: Rational) -> Fraction:
        x = _q(x)
        if x < 0 or x > 2:
            raise DomainError(f"x={format_rational(x)} outside [0, 2]")
        k = max(bisect_left(self._xs, x), 1)
        (x0, y0), (x1, y1) = self.vertices[k - 1], self.vertices[k]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


class Parabola:
    """The basic graph ``y = x**2 / 4``."""

    domain = Fraction(2)

    def breakpoints(self) -> list[Fraction]:
        return []

    def value_at(self, x: Rational) -> Fraction:
        x = _q(x)
        if x < 0 or x > 2:
            raise DomainError(f"x={format_rational(x)} outside [0, 2]")
        return x * x / 4

    def __eq__(self, other):
        return isinstance(other, Parabola)

    def __hash__(self):
        return hash(Parabola)

    def __repr__(self):
        return "Parabola()"


PARABOLA = Parabola()

Graph = Union[NewtonPolygon, PiecewiseLinear, Parabola]


def evaluate(graph: Graph, x: Rational) -> Fraction:
    return graph.value_at(x)


def _values_at(graph: Graph, xs: list[Fraction]) -> list[Fraction]:
    """Values of ``graph`` at the ascending points ``xs`` in one pass over its vertices."""
    if isinstance(graph, Parabola):
        return [x * x / 4 for x in xs]
    verts = graph._vertices if isinstance(graph, NewtonPolygon) else graph.vertices
    out, k = [], 1
    for x in xs:
        if x < 0 or x > graph.domain:
            raise DomainError(f"x={format_rational(x)} outside [0, {format_rational(graph.domain)}]")
        while k < len(verts) - 1 and verts[k][0] < x:
            k += 1
        if len(verts) == 1:
            out.append(verts[0][1])
            continue
        (x0, y0), (x1, y1) = verts[k - 1], verts[k]
        out.append(y1 if x == x1 else y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    return out


def _segments(graph: Graph):
    """Yield ``(x0, x1, slope, intercept)`` for each linear piece of ``graph``."""
    xs = graph.breakpoints()
    for x0, x1 in zip(xs, xs[1:]):
        y0, y1 = graph.value_at(x0), graph.value_at(x1)
        slope = (y1 - y0) / (x1 - x0)
        yield x0, x1, slope, y0 - slope * x0


def _min_difference(upper: Graph, lower: Graph) -> Fraction:
    """Exact ``min over the domain of upper(x) - lower(x)``."""
    if upper.domain != lower.domain:
        raise DomainMismatch(
            f"domains [0,{format_rational(upper.domain)}] and [0,{format_rational(lower.domain)}] differ"
        )
    if isinstance(upper, Parabola) and isinstance(lower, Parabola):
        return Fraction(0)
    if upper.domain == 0:
        return Fraction(0)
    extra = set(lower.breakpoints())
    if isinstance(upper, Parabola):
        # parabola minus a line is convex per segment: add each interior vertex x = 2a
        for x0, x1, a, _ in _segments(lower):
            if x0 < 2 * a < x1:
                extra.add(2 * a)
    xs = upper.breakpoints()
    if extra:
        xs = sorted(extra.union(xs))
    return min(a - b for a, b in zip(_values_at(upper, xs), _values_at(lower, xs)))


def lies_above(first: Graph, second: Graph) -> bool:
    """True iff ``first(x) >= second(x)`` on the whole common domain."""
    return _min_difference(first, second) >= 0


def min_gap(graph: Graph, reference: Graph) -> Fraction:
    """Exact minimum of ``graph - reference`` over ``[0, 2]``."""
    return _min_difference(graph, reference)


def amalgamate(first: NewtonPolygon, second: NewtonPolygon) -> NewtonPolygon:
    return NewtonPolygon(tuple(sorted((Counter(dict(first.blocks)) + Counter(dict(second.blocks))).items())))


def scaled(polygon: NewtonPolygon) -> PiecewiseLinear:
    if polygon.height == 0:
        raise EmptyPolygon("cannot scale the empty polygon")
    g = polygon.genus
    # a valid polygon scales to a convex symmetric graph, so skip re-validation
    return PiecewiseLinear._unchecked(tuple((x / g, y / g) for x, y in polygon.vertices()))


@dataclass(frozen=True)
class LatticeCount:
    count: int
    exact_codimension: bool


def lattice_points_below(polygon: NewtonPolygon) -> LatticeCount:
    """Count integer points ``(x, y)``, ``0 <= x <= g``, ``0 <= y < f(x)``."""
    ys = polygon.ordinates()
    count = sum(ceil(ys[x]) for x in range(polygon.genus + 1) if ys[x] > 0)
    exact = all(x.denominator == 1 and y.denominator == 1 for x, y in polygon.vertices())
    return LatticeCount(count, exact)
