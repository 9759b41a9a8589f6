"""Bookkeeping for Z/pZ (Artin-Schreier) covers ``y^p - y = f``.

Covers are described by a :class:`CoverSpec`: the prime, the base curve's
genus and ordinariness, and one :class:`BranchDatum` (Swan conductor and
residue degree) per branch point.  For covers of the projective line the
spec is read off a rational function after normalising its poles.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Optional

from . import fpoly
from .errors import (
    BaseNotOrdinary,
    HeightMismatch,
    InternalError,
    IrreduciblePoleUnsupported,
    NegativeGenus,
    NewtonLabError,
    NotReduced,
)
from .fpoly import RationalFunction
from .polygon import NewtonPolygon

__all__ = [
    "BranchDatum",
    "CoverSpec",
    "LocalASData",
    "Exactness",
    "is_odd_prime",
    "poles",
    "local_expansion",
    "reduce_artin_schreier",
    "swan_conductors",
    "cover_of_function",
    "rh_genus",
    "ds_prank",
    "hodge_lower_bound",
    "exactness_class",
    "parse_cover_spec",
]


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class BranchDatum:
    conductor: int
    degree: int = 1

    def __str__(self):
        return f"{self.conductor}:{self.degree}"


@dataclass(frozen=True)
class CoverSpec:
    p: int
    base_genus: int = 0
    base_ordinary: bool = True
    branches: tuple[BranchDatum, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if not is_odd_prime(self.p):
            raise NewtonLabError(f"p={self.p} is not an odd prime")
        if self.base_genus < 0:
            raise NewtonLabError(f"negative base genus {self.base_genus}")
        for b in self.branches:
            if b.conductor < 1 or b.degree < 1:
                raise NewtonLabError(f"branch datum {b} must have conductor and degree >= 1")
            if b.conductor % self.p == 0:
                raise NotReduced(f"conductor {b.conductor} is divisible by p={self.p}")

    @property
    def branch_count(self) -> int:
        """Number of geometric branch points (residue degrees summed)."""
        return sum(b.degree for b in self.branches)

    def __str__(self):
        branches = ",".join(str(b) for b in self.branches)
        ordinary = "true" if self.base_ordinary else "false"
        return f"p={self.p} gX={self.base_genus} ordinary={ordinary} branches={branches}"


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise NewtonLabError(f"expected true/false, got {text!r}")


def parse_branches(text: str) -> tuple[BranchDatum, ...]:
    out = []
    for tok in filter(None, (t.strip() for t in text.split(","))):
        conductor, _, degree = tok.partition(":")
        try:
            out.append(BranchDatum(int(conductor), int(degree) if degree else 1))
        except ValueError:
            raise NewtonLabError(f"bad branch datum {tok!r}; expected d:deg") from None
    return tuple(out)


def parse_cover_spec(text: str) -> CoverSpec:
    """Parse ``p=3 gX=0 ordinary=true branches=2:1,1:2``."""
    fields = dict(tok.partition("=")[::2] for tok in text.split())
    unknown = set(fields) - {"p", "gX", "ordinary", "branches"}
    if unknown:
        raise NewtonLabError(f"unknown cover-spec keys: {', '.join(sorted(unknown))}")
    if "p" not in fields:
        raise NewtonLabError("cover spec needs p=<prime>")
    try:
        return CoverSpec(
            p=int(fields["p"]),
            base_genus=int(fields.get("gX", "0")),
            base_ordinary=_parse_bool(fields.get("ordinary", "true")),
            branches=parse_branches(fields.get("branches", "")),
        )
    except ValueError as exc:
        if isinstance(exc, NewtonLabError):
            raise
        raise NewtonLabError(f"bad cover spec {text!r}: {exc}") from None


# -- poles and local data -------------------------------------------------

# A place of P^1 over F_p: None for infinity, otherwise a monic irreducible.
Place = Optional[tuple]


def place_degree(place: Place) -> int:
    return 1 if place is None else fpoly.deg(place)


def poles(f: RationalFunction) -> list[tuple[Place, int]]:
    """Poles of ``f`` as ``(place, order)``, infinity first."""
    if f.is_zero():
        return []
    out: list[tuple[Place, int]] = []
    if f.order_at_infinity() > 0:
        out.append((None, f.order_at_infinity()))
    out.extend(fpoly.factor(f.den, f.p))
    return out


def _series_quotient(a, b, n: int, p: int) -> list[int]:
    """First ``n`` coefficients of the power series ``a / b`` (``b[0] != 0``)."""
    inv = pow(b[0], -1, p)
    a = list(a) + [0] * n
    out = []
    for k in range(n):
        c = (a[k] - sum(b[j] * out[k - j] for j in range(1, min(k, len(b) - 1) + 1))) * inv % p
        out.append(c)
    return out


def _shift(a, shift: int, p: int):
    """Coefficients of ``a(t + shift)``."""
    out = ()
    for c in reversed(a):
        out = fpoly.add(fpoly.mul(out, (shift, 1), p), (c,), p)
    return out


@dataclass(frozen=True)
class LocalASData:
    """Truncated Laurent expansion ``sum a_n t^n`` at one point (principal part and beyond)."""

    coefficients: tuple[tuple[int, int], ...]

    def pole_order(self) -> int:
        neg = [n for n, a in self.coefficients if a and n < 0]
        return -min(neg) if neg else 0

    def swan_conductor(self, p: int) -> int:
        """Pole order after stripping p-divisible leading poles; 0 means unramified."""
        terms = {n: a % p for n, a in self.coefficients if n < 0 and a % p}
        while terms:
            n = min(terms)
            if n % p:
                return -n
            c = terms.pop(n)
            terms[n // p] = (terms.get(n // p, 0) + c) % p
            terms = {k: v for k, v in terms.items() if v}
        return 0


def local_expansion(f: RationalFunction, place: Place, terms: Optional[int] = None) -> LocalASData:
    """Laurent expansion of ``f`` at infinity or at a degree-one place.

    The expansion starts at the pole (or at ``t^0``) and carries ``terms``
    coefficients, by default enough to cover the whole principal part.
    """
    p = f.p
    if f.is_zero():
        return LocalASData(())
    if place is None:
        # t = 1/x: f = t^(deg den - deg num) * rev(num) / rev(den)
        lead = fpoly.deg(f.den) - fpoly.deg(f.num)
        a, b = tuple(reversed(f.num)), tuple(reversed(f.den))
    else:
        if fpoly.deg(place) != 1:
            raise IrreduciblePoleUnsupported("local expansions only at degree-one places")
        root = -place[0] % p
        a, b = _shift(f.num, root, p), _shift(f.den, root, p)
        lead = 0
        while a and a[0] == 0:
            a, lead = a[1:], lead + 1
        while b and b[0] == 0:
            b, lead = b[1:], lead - 1
    if terms is None:
        terms = max(-lead, 0) + 1
    coeffs = _series_quotient(a, b, terms, p)
    return LocalASData(tuple((lead + k, c) for k, c in enumerate(coeffs) if c))


def reduce_artin_schreier(f: RationalFunction) -> RationalFunction:
    """Representative of ``f`` modulo ``{h^p - h}`` whose pole orders are prime to ``p``.

    A leading pole term ``c t^(-p n)`` is traded for ``c t^(-n)`` (``c`` lies
    in F_p, so ``c^(1/p) = c``); this is repeated at infinity and at every
    finite degree-one pole until no pole order is divisible by ``p``.
    """
    p = f.p
    while not f.is_zero():
        n = f.order_at_infinity()
        if n > 0 and n % p == 0:
            c = f.num[-1]
            f = f - RationalFunction.monomial(p, c, n) + RationalFunction.monomial(p, c, n // p)
            continue
        for place, order in fpoly.factor(f.den, p):
            if order % p:
                continue
            if fpoly.deg(place) > 1:
                raise IrreduciblePoleUnsupported(
                    f"pole of order {order} at the degree-{fpoly.deg(place)} point "
                    f"{fpoly.format_poly(place)}=0; supply a p-coprime order there"
                )
            root = -place[0] % p
            rest = fpoly.divmod_poly(f.den, fpoly.power(place, order, p), p)[0]
            c = fpoly.evaluate(f.num, root, p) * pow(fpoly.evaluate(rest, root, p), -1, p) % p
            t = RationalFunction.make(p, place)
            f = f - c / t**order + c / t ** (order // p)
            break
        else:
            return f
    return f


def swan_conductors(f: RationalFunction) -> list[BranchDatum]:
    """One datum per pole: conductor = pole order, degree = residue degree."""
    out = []
    for place, order in poles(f):
        if order % f.p == 0:
            where = "infinity" if place is None else fpoly.format_poly(place) + "=0"
            raise NotReduced(f"pole of order {order} at {where} is divisible by p={f.p}")
        out.append(BranchDatum(order, place_degree(place)))
    return sorted(out, key=lambda b: (-b.conductor, b.degree))


def cover_of_function(f: RationalFunction) -> CoverSpec:
    """Cover spec of ``y^p - y = f`` over P^1 (``f`` is reduced first)."""
    return CoverSpec(f.p, 0, True, tuple(swan_conductors(reduce_artin_schreier(f))))


# -- invariants of the cover ----------------------------------------------


def rh_genus(spec: CoverSpec) -> int:
    """Genus from 2g_C - 2 = p(2g_X - 2) + sum deg_i (p-1)(d_i+1)."""
    p = spec.p
    two_g = p * (2 * spec.base_genus - 2) + 2
    two_g += sum(b.degree * (p - 1) * (b.conductor + 1) for b in spec.branches)
    if two_g % 2:
        raise InternalError(f"odd Riemann-Hurwitz value for {spec}")
    if two_g < 0:
        raise NegativeGenus(f"{spec} implies genus {Fraction(two_g, 2)} < 0")
    return two_g // 2


def _zero_slope_count(spec: CoverSpec) -> int:
    return spec.p * spec.base_genus + (spec.branch_count - 1) * (spec.p - 1)


def ds_prank(spec: CoverSpec) -> int:
    """Deuring-Shafarevich p-rank p*g_X + (B - 1)(p - 1) for an ordinary base."""
    if not spec.base_ordinary:
        raise BaseNotOrdinary("the p-rank formula needs an ordinary base curve")
    rh_genus(spec)
    return _zero_slope_count(spec)


@lru_cache(maxsize=None)
def _slope_layout(conductors: tuple[int, ...]) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """Distinct middle slopes for the given conductors, each with the conductors producing it."""
    owners: dict[Fraction, list[int]] = {}
    for d in conductors:
        for n in range(1, d):
            owners.setdefault(Fraction(n, d), []).append(d)
    return tuple((s, tuple(ds)) for s, ds in sorted(owners.items()))


def hodge_lower_bound(spec: CoverSpec) -> NewtonPolygon:
    """Newton-over-Hodge lower bound for the cover described by ``spec``.

    A branch of conductor ``d`` and degree ``e`` contributes ``e(p-1)``
    copies of ``1/d, ..., (d-1)/d``; every such block is symmetric, so the
    polygon is assembled directly from integer multiplicities.
    """
    genus = rh_genus(spec)
    p = spec.p
    weight: Counter = Counter()
    for b in spec.branches:
        weight[b.conductor] += b.degree
    zero = _zero_slope_count(spec)
    if zero < 0:
        raise HeightMismatch(f"{spec}: negative slope-0 multiplicity {zero}")
    middle = [(s, (p - 1) * sum(weight[d] for d in ds)) for s, ds in _slope_layout(tuple(sorted(weight)))]
    ends = [(Fraction(0), zero)], [(Fraction(1), zero)]
    polygon = NewtonPolygon(tuple(b for b in ends[0] + middle + ends[1] if b[1]))
    if polygon.height != 2 * genus:
        raise HeightMismatch(f"{spec}: bound has {polygon.height} slopes, genus is {genus}")
    return polygon


class Exactness(enum.Enum):
    SMALL_CONDUCTORS = "small-conductors"
    BOOHER_PRIES = "booher-pries"
    LOWER_BOUND = "lower-bound"

    def __str__(self):
        return self.value

    @property
    def description(self) -> str:
        return {
            "small-conductors": "bound is an equality for every such cover",
            "booher-pries": "equality is attainable by some cover with this data",
            "lower-bound": "lower bound only",
        }[self.value]


def exactness_class(spec: CoverSpec) -> Exactness:
    conductors = [b.conductor for b in spec.branches]
    if spec.base_ordinary and all(d in (1, 2) for d in conductors):
        return Exactness.SMALL_CONDUCTORS
    if spec.base_ordinary and all(spec.p % d == 1 % d for d in conductors):
        return Exactness.BOOHER_PRIES
    return Exactness.LOWER_BOUND
