from fractions import Fraction
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newtonlab.errors import (
    DomainError,
    DomainMismatch,
    EmptyPolygon,
    NotSymmetric,
    SlopeOutOfRange,
)
from newtonlab.polygon import (
    PARABOLA,
    NewtonPolygon,
    Parabola,
    PiecewiseLinear,
    amalgamate,
    evaluate,
    format_slopes,
    from_blocks,
    from_slopes,
    lattice_points_below,
    lies_above,
    min_gap,
    parse_slopes,
    scaled,
)

F = Fraction


@st.composite
def polygons(draw, max_pairs=8, max_den=9):
    """Random symmetric slope multisets built from pairs ``{s, 1 - s}``."""
    pairs = draw(st.lists(st.tuples(st.integers(1, max_den), st.integers(0, max_den)), max_size=max_pairs))
    halves = draw(st.integers(0, 3))
    slopes = [F(1, 2)] * (2 * halves)
    for den, num in pairs:
        s = F(min(num, den), den)
        slopes += [s, 1 - s]
    return from_slopes(slopes)


def hull_value(polygon, x):
    """Oracle: a convex graph is the max of its supporting lines at the integer knots."""
    ys = [F(0)]
    for s in polygon.slopes:
        ys.append(ys[-1] + s)
    return max(ys[i] + s * (x - i) for i, s in enumerate(polygon.slopes))


def brute_omega(polygon):
    count = 0
    for x in range(polygon.genus + 1):
        y = 0
        while y < polygon.value_at(x):
            count += 1
            y += 1
    return count


# -- construction and parsing ---------------------------------------------


def test_ordinary_polygon_invariants():
    P = from_slopes([0, 0, 1, 1])
    assert P.genus == 2 and P.height == 4 and P.p_rank == 2
    assert P.vertices() == [(0, 0), (2, 0), (4, 2)]


def test_blocks_store_distinct_slopes_once():
    P = from_blocks([((0, 1), 10), ((F(1, 2),), 4)])
    assert P.blocks == ((0, 10), (F(1, 2), 4), (1, 10))
    assert len(P.slopes) == 24
    assert P == from_slopes(P.slopes)


def test_rejects_out_of_range_slope():
    with pytest.raises(SlopeOutOfRange):
        from_slopes([F(-1, 2), F(3, 2)])


@pytest.mark.parametrize("slopes", [[0, F(1, 2)], [0, 0, 0, 1], [F(1, 3), F(1, 3)]])
def test_rejects_asymmetric(slopes):
    with pytest.raises(NotSymmetric):
        from_slopes(slopes)


def test_parse_and_format_round_trip():
    P = parse_slopes("1/3, 0, 2/3,1")
    assert format_slopes(P) == "0,1/3,2/3,1"
    assert parse_slopes(format_slopes(P)) == P
    assert parse_slopes("") == NewtonPolygon()


def test_value_at_and_domain():
    P = from_slopes([F(1, 2)] * 4)
    assert P.value_at(3) == F(3, 2)
    assert P.value_at(F(1, 2)) == F(1, 4)
    with pytest.raises(DomainError):
        P.value_at(5)


# -- basic graphs ----------------------------------------------------------


def test_piecewise_linear_validation():
    g = PiecewiseLinear(((0, 0), (1, 0), (2, 1)))
    assert g.value_at(F(3, 2)) == F(1, 2)
    with pytest.raises(NotSymmetric):
        PiecewiseLinear(((0, 0), (F(1, 2), 0), (2, 1)))


def test_piecewise_linear_rejects_concave():
    from newtonlab.errors import NewtonLabError

    with pytest.raises(NewtonLabError):
        PiecewiseLinear(((0, 0), (1, 1), (2, 1)))


def test_parabola_is_a_basic_graph():
    assert evaluate(PARABOLA, 2) == 1 and evaluate(PARABOLA, 0) == 0
    assert PARABOLA == Parabola()
    # slope m at x pairs with slope 1 - m at 2 - x
    for x in (F(1, 3), F(1), F(7, 5)):
        assert PARABOLA.value_at(2 - x) == PARABOLA.value_at(x) + 1 - x


def test_scaled_ordinary_and_supersingular():
    assert scaled(from_slopes([0, 1] * 3)).vertices == ((0, 0), (1, 0), (2, 1))
    assert scaled(from_slopes([F(1, 2)] * 6)).vertices == ((0, 0), (2, 1))
    with pytest.raises(EmptyPolygon):
        scaled(NewtonPolygon())


def test_min_gap_examples():
    ordinary = scaled(from_slopes([0, 1]))
    supersingular = scaled(from_slopes([F(1, 2)] * 2))
    assert min_gap(ordinary, PARABOLA) == F(-1, 4)
    assert min_gap(supersingular, PARABOLA) == 0
    assert lies_above(supersingular, ordinary) and not lies_above(ordinary, supersingular)
    assert min_gap(PARABOLA, ordinary) == 0
    with pytest.raises(DomainMismatch):
        min_gap(from_slopes([0, 0, 1, 1]), PARABOLA)


# -- lattice count ---------------------------------------------------------


def test_lattice_count_examples():
    assert lattice_points_below(from_slopes([0, 1] * 5)).count == 0
    omega = lattice_points_below(from_blocks([((0, 1), 10), ((F(1, 2),), 8)]))
    assert omega.count == 6 and omega.exact_codimension
    assert not lattice_points_below(from_slopes([F(1, 3), F(2, 3)] * 2 + [F(1, 2)] * 2)).exact_codimension


@pytest.mark.parametrize("g", range(1, 31))
def test_lattice_count_supersingular_closed_form(g):
    omega = lattice_points_below(from_slopes([F(1, 2)] * (2 * g))).count
    assert omega == g * (g + 1) // 2 - g * g // 4
    assert omega == brute_omega(from_slopes([F(1, 2)] * (2 * g)))


# -- properties ------------------------------------------------------------


@given(polygons())
def test_symmetry_of_graph(P):
    g = P.genus
    for x in range(P.height + 1):
        assert P.value_at(P.height - x) == P.value_at(x) + g - x


@given(polygons())
def test_value_matches_supporting_line_oracle(P):
    if P.height == 0:
        return
    for x in [F(k, 3) for k in range(3 * P.height + 1)]:
        assert P.value_at(x) == hull_value(P, x)


@given(polygons())
def test_slope_sum_and_endpoints(P):
    assert sum(P.slopes, F(0)) == P.genus
    assert P.value_at(P.height) == P.genus


@given(polygons(), polygons())
def test_amalgamate_is_multiset_union(P, Q):
    A = amalgamate(P, Q)
    assert A == from_slopes(P.slopes + Q.slopes)
    assert A.genus == P.genus + Q.genus
    assert A.p_rank == P.p_rank + Q.p_rank


@given(polygons())
def test_lattice_count_matches_enumeration(P):
    assert lattice_points_below(P).count == brute_omega(P)
    assert lattice_points_below(P).count == sum(max(ceil(y), 0) for y in P.ordinates()[: P.genus + 1])


@given(polygons(max_pairs=6))
def test_ordinary_lies_below_everything(P):
    if P.height == 0:
        return
    ordinary = from_slopes([0, 1] * P.genus)
    supersingular = from_slopes([F(1, 2)] * P.height)
    assert lies_above(P, ordinary)
    assert lies_above(supersingular, P)


@settings(max_examples=50)
@given(polygons(max_pairs=6))
def test_min_gap_against_dense_mesh(P):
    if P.height == 0:
        return
    S = scaled(P)
    gap = min_gap(S, PARABOLA)
    mesh = [F(k, 240) for k in range(481)]
    sampled = min(S.value_at(x) - x * x / 4 for x in mesh)
    assert gap <= sampled
    # the exact minimum sits at a vertex of the scaled graph
    assert any(S.value_at(x) - x * x / 4 == gap for x in S.breakpoints())


@given(polygons())
def test_scaled_graph_is_basic(P):
    if P.height == 0:
        return
    S = scaled(P)
    rebuilt = PiecewiseLinear(S.vertices)
    assert rebuilt == S
    for x in S.breakpoints():
        assert S.value_at(x) == P.value_at(x * P.genus) / P.genus

