"""Explicit cover constructions with predicted Newton polygons.

``construct_theorem4`` builds covers with many branch points of a fixed
Swan conductor ``d`` plus enough conductor-one points to hit the target
genus; ``construct_theorem5`` builds covers with one (or two) branch points
of large conductor, whose scaled polygons approach the parabola ``x^2/4``.
Branch locations stay abstract: only conductors and degrees enter the
predictions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .covers import (
    BranchDatum,
    CoverSpec,
    Exactness,
    exactness_class,
    hodge_lower_bound,
    is_odd_prime,
    rh_genus,
)
from .errors import (
    ConductorDivisibleByP,
    GenusTooSmall,
    Inadmissible,
    InternalError,
    NewtonLabError,
    NonIntegralA,
    NotSymmetric,
    SlopeSetMismatch,
)
from .polygon import NewtonPolygon, amalgamate, format_rational, format_slopes

__all__ = [
    "FamilyMember",
    "OortWitness",
    "FrequencyRow",
    "FrequencyReport",
    "construct_theorem4",
    "construct_theorem5",
    "max_admissible_k",
    "theorem4_closed_form",
    "oort_witness",
    "frequency_report",
]


@dataclass(frozen=True)
class FamilyMember:
    source: str
    p: int
    g: int
    k: int
    d: int
    spec: CoverSpec
    predicted: NewtonPolygon
    exactness: Exactness
    delta: Optional[int] = None
    i: Optional[int] = None
    j: Optional[int] = None
    A: Optional[int] = None
    u: Optional[int] = None
    v: Optional[int] = None
    case: Optional[str] = None

    def __str__(self):
        if self.source == "T4":
            head = (
                f"source=T4 p={self.p} d={self.d} g={self.g} k={self.k} "
                f"delta={self.delta} i={self.i} j={self.j}"
            )
        else:
            branches = ",".join(str(b) for b in self.spec.branches)
            head = (
                f"source=T5 p={self.p} g={self.g} i={self.i} u={self.u} v={self.v} "
                f"k={self.k} d={self.d} case={self.case} branches={branches}"
            )
        return f"{head} slopes={format_slopes(self.predicted)} exact={self.exactness}"


def _check_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise NewtonLabError(f"p={p} is not an odd prime")


def _delta(d: int) -> int:
    return 1 if d % 2 else 2


def admissibility_slack(p: int, d: int, g: int, k: int) -> Fraction:
    """Left side minus right side of the bound on ``k``; admissible iff >= 0."""
    return Fraction(2 * g - 2 * p * (p - 1), d + 1) - k * _delta(d) * (p - 1)


def max_admissible_k(p: int, d: int, g: int) -> Optional[int]:
    """Largest admissible ``k`` for ``(p, d, g)``, or None when even ``k = 0`` fails."""
    top = 2 * g - 2 * p * (p - 1)
    if top < 0:
        return None
    return top // (_delta(d) * (p - 1) * (d + 1))


@lru_cache(maxsize=None)
def _middle(d: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(n, d) for n in range(1, d))


def theorem4_closed_form(p: int, d: int, g: int, k: int) -> NewtonPolygon:
    """``{0,1}^(g - k*delta*(p-1)(d-1)/2)`` together with ``{1/d, ..., (d-1)/d}^(k*delta*(p-1))``."""
    delta = _delta(d)
    outer = g - k * delta * (p - 1) * (d - 1) // 2
    inner = k * delta * (p - 1)
    if outer < 0:
        raise NonIntegralA(f"negative slope-0 multiplicity for (p={p}, d={d}, g={g}, k={k})")
    blocks = [(Fraction(0), outer)] + [(s, inner) for s in _middle(d)] + [(Fraction(1), outer)]
    return NewtonPolygon(tuple(b for b in blocks if b[1]))


def construct_theorem4(p: int, d: int, g: int, k: int) -> FamilyMember:
    _check_prime(p)
    if d < 2:
        raise NewtonLabError(f"d={d} must be at least 2")
    if d % p == 0:
        raise ConductorDivisibleByP(f"d={d} is divisible by p={p}")
    if g < 1 or k < 0:
        raise NewtonLabError(f"need g >= 1 and k >= 0, got g={g}, k={k}")
    slack = admissibility_slack(p, d, g, k)
    if slack < 0:
        raise Inadmissible(
            f"(p={p}, d={d}, g={g}, k={k}) violates the bound on k by {format_rational(-slack)}",
            slack=slack,
        )
    delta = _delta(d)
    i = g % (p - 1)
    twice_removed = k * delta * (p - 1) * (d + 1)
    if twice_removed % 2:
        raise NonIntegralA(f"odd k*delta*(p-1)*(d+1) for d={d}")
    A = g - i * p + (p - 1) - twice_removed // 2
    if A < 0 or A % (p - 1):
        raise NonIntegralA(f"A={A} is not a nonnegative multiple of p-1={p - 1}")
    j = A // (p - 1)
    branches = (BranchDatum(d),) * (delta * k) + (BranchDatum(1),) * j
    spec = CoverSpec(p, i, True, branches)
    if rh_genus(spec) != g:
        raise InternalError(f"construction for g={g} produced genus {rh_genus(spec)}")
    predicted = hodge_lower_bound(spec)
    if predicted != theorem4_closed_form(p, d, g, k):
        raise InternalError(f"prediction for (p={p}, d={d}, g={g}, k={k}) misses the closed form")
    return FamilyMember(
        "T4", p, g, k, d, spec, predicted, exactness_class(spec), delta=delta, i=i, j=j, A=A
    )


def _theorem5_base(p: int, i: int) -> tuple[int, int]:
    """Least nonnegative ``(u, v)`` with ``p*u - (p-1) = i + m*v``."""
    m = (p - 1) // 2
    if i == 0:
        return m, p - 2
    return i, 2 * (i - 1)


def construct_theorem5(p: int, g: int) -> FamilyMember:
    _check_prime(p)
    m = (p - 1) // 2
    i = g % m
    u, v = _theorem5_base(p, i)
    k = (g - i) // m
    d = k - 1 - v
    if d < 1:
        raise GenusTooSmall(f"g={g} is too small for p={p} (conductor would be {d})")
    if d % p:
        case, branches = "I", (BranchDatum(d),)
    else:
        # two poles of orders d-2 and 1 keep sum(d_i + 1) = d + 1
        case, branches = "II-corrected", (BranchDatum(d - 2), BranchDatum(1))
    spec = CoverSpec(p, u, True, branches)
    if rh_genus(spec) != g:
        raise InternalError(f"construction for g={g} produced genus {rh_genus(spec)}")
    predicted = hodge_lower_bound(spec)
    return FamilyMember(
        "T5", p, g, k, d, spec, predicted, exactness_class(spec), i=i, u=u, v=v, case=case
    )


@dataclass(frozen=True)
class OortWitness:
    first: FamilyMember
    second: FamilyMember
    combined: FamilyMember
    amalgam: NewtonPolygon
    holds: bool

    def __str__(self):
        return (
            f"p={self.first.p} d={self.first.d} g1={self.first.g} k1={self.first.k} "
            f"g2={self.second.g} k2={self.second.k} g={self.combined.g} k={self.combined.k} "
            f"holds={str(self.holds).lower()} slopes={format_slopes(self.amalgam)}"
        )


def oort_witness(p: int, d: int, first: tuple[int, int], second: tuple[int, int]) -> OortWitness:
    a = construct_theorem4(p, d, *first)
    b = construct_theorem4(p, d, *second)
    c = construct_theorem4(p, d, first[0] + second[0], first[1] + second[1])
    amalgam = amalgamate(a.predicted, b.predicted)
    holds = amalgam == c.predicted
    if not holds:
        raise InternalError(f"amalgam {amalgam} differs from prediction {c.predicted}")
    return OortWitness(a, b, c, amalgam, holds)


@dataclass(frozen=True)
class FrequencyRow:
    g: int
    counts: tuple[tuple[Fraction, int], ...]
    deviations: tuple[tuple[Fraction, Fraction], ...]
    running_sup: Fraction

    def __str__(self):
        parts = [f"g={self.g}"]
        for (s, c), (_, e) in zip(self.counts, self.deviations):
            parts.append(f"count[{format_rational(s)}]={c} dev[{format_rational(s)}]={format_rational(e)}")
        parts.append(f"sup={format_rational(self.running_sup)}")
        return " ".join(parts)


@dataclass(frozen=True)
class FrequencyReport:
    rows: tuple[FrequencyRow, ...]
    slope_set: tuple[Fraction, ...]
    epsilon: Fraction

    def summary(self) -> str:
        return (
            f"slope_set={','.join(format_rational(s) for s in self.slope_set)} "
            f"members={len(self.rows)} max_abs_dev={format_rational(self.epsilon)}"
        )


def frequency_report(members: Iterable[FamilyMember], slope_set: Iterable) -> FrequencyReport:
    """Deviation of each slope's multiplicity from its equal share ``2g / n``.

    ``slope_set`` lists ``n`` slopes (repeats allowed); a slope listed ``c``
    times is expected ``c * 2g / n`` times and its deviation is reported per
    copy, matching the exponent ``2g/n + e_i(g)``.  The observed bound is the
    supremum of ``|e_i(g)|``; any epsilon above it witnesses the bounded
    deviation claim over the given range.
    """
    members = list(members)
    if not members:
        raise NewtonLabError("no members given")
    wanted = Counter(Fraction(s) for s in slope_set)
    n = sum(wanted.values())
    for s, c in wanted.items():
        if wanted.get(1 - s, 0) != c:
            raise NotSymmetric(f"slope set is not symmetric at {format_rational(s)}")
    distinct = sorted(wanted)
    rows = []
    sup = Fraction(0)
    for member in members:
        have = Counter(dict(member.predicted.blocks))
        stray = set(have) - set(wanted)
        if stray:
            raise SlopeSetMismatch(
                f"g={member.g} has slopes {','.join(format_rational(s) for s in sorted(stray))} outside the set"
            )
        share = Fraction(2 * member.g, n)
        devs = tuple((s, Fraction(have[s], wanted[s]) - share) for s in distinct)
        sup = max([sup] + [abs(e) for _, e in devs])
        rows.append(FrequencyRow(member.g, tuple((s, have[s]) for s in distinct), devs, sup))
    return FrequencyReport(tuple(rows), tuple(sorted(wanted.elements())), sup)
