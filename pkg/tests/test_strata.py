from fractions import Fraction

import pytest

from newtonlab.errors import EmptyInput, GenusTooSmall, NewtonLabError
from newtonlab.families import construct_theorem4
from newtonlab.polygon import PARABOLA, from_blocks, from_slopes
from newtonlab.strata import (
    is_unlikely_polygon,
    moduli_dims,
    supersingular_dimension,
    unlikely_family_report,
)

F = Fraction


def test_moduli_dims():
    d = moduli_dims(4)
    assert (d.dim_Ag, d.dim_Torelli, d.codim_Torelli) == (10, 9, 1)
    with pytest.raises(GenusTooSmall):
        moduli_dims(1)


def test_supersingular_codimension_consistent_with_count():
    for g in range(2, 20):
        omega = is_unlikely_polygon(from_slopes([F(1, 2)] * (2 * g))).omega.count
        assert omega == moduli_dims(g).dim_Ag - supersingular_dimension(g)


def test_ordinary_is_never_unlikely():
    rep = is_unlikely_polygon(from_slopes([0, 1] * 7))
    assert rep.omega.count == 0 and not rep.is_unlikely and not rep.marginal


def test_large_member_is_unlikely():
    rep = is_unlikely_polygon(construct_theorem4(3, 2, 114, 18).predicted)
    assert rep.omega.count == 342
    assert rep.codim_torelli == 114 * 115 // 2 - 339
    assert rep.is_unlikely


def test_small_member_is_not_unlikely():
    rep = is_unlikely_polygon(from_blocks([((0, 1), 8), ((F(1, 2),), 8)]))
    assert rep.omega.count == 6 and rep.omega.exact_codimension
    assert not rep.is_unlikely and not rep.marginal


def test_inexact_negative_verdict_is_marginal():
    rep = is_unlikely_polygon(from_slopes([0, 1] * 3 + [F(1, 3), F(2, 3)] * 2))
    assert not rep.omega.exact_codimension
    assert not rep.is_unlikely and rep.marginal


def test_family_report_finds_threshold():
    members = [(g, construct_theorem4(3, 2, g, (g - 6) // 6).predicted) for g in range(100, 131)]
    rep = unlikely_family_report(members, PARABOLA)
    assert [r.g for r in rep.rows] == list(range(100, 131))
    tail = [r for r in rep.rows if rep.g0 is not None and r.g >= rep.g0]
    assert tail and all(r.report.is_unlikely for r in tail)
    assert "members=31" in rep.summary()


def test_family_report_workers_match_serial():
    members = [(g, construct_theorem4(3, 2, g, 1).predicted) for g in range(12, 20)]
    assert unlikely_family_report(members, PARABOLA, workers=2) == unlikely_family_report(members, PARABOLA)


def test_family_report_rejects_bad_input():
    with pytest.raises(EmptyInput):
        unlikely_family_report([], PARABOLA)
    with pytest.raises(NewtonLabError):
        unlikely_family_report([(5, from_slopes([0, 1] * 4))], PARABOLA)
