"""Brute-force zeta functions of Artin-Schreier covers of the projective line.

For ``C: y^p - y = f`` over F_p, ``#C(F_{p^k})`` is counted directly: each
non-pole ``x`` in F_{p^k} contributes ``p`` points when
``Tr(f(x)) = 0`` and none otherwise, and each rational pole contributes the
single totally ramified point above it.  The L-polynomial is recovered from
``N_1 .. N_g`` with Newton's identities and its p-adic Newton polygon is
the measured polygon that predictions are checked against.

Field elements of F_{p^e} are encoded as integers ``sum c_t p^t`` from their
coefficient vectors modulo a fixed irreducible polynomial.  Enumeration runs
over discrete logarithms with numpy lookup tables; the scalar path
:func:`count_points_naive` avoids the tables and is kept for cross-checking.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt
from typing import Optional, Union

import numpy as np
from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from . import fpoly
from .covers import (
    CoverSpec,
    Exactness,
    cover_of_function,
    ds_prank,
    exactness_class,
    hodge_lower_bound,
    is_odd_prime,
    poles,
    reduce_artin_schreier,
    rh_genus,
)
from .errors import (
    CounterexampleFound,
    DegreeTooLarge,
    FieldGuard,
    NewtonLabError,
    NotReduced,
    RoundTripFailure,
)
from .fpoly import RationalFunction, parse_rational_function
from .polygon import NewtonPolygon, format_slopes, from_slopes, lies_above

__all__ = [
    "FieldTower",
    "CurveOverP1",
    "LPolynomial",
    "VerificationReport",
    "build_field",
    "field_guard",
    "curve_from_function",
    "count_points",
    "count_points_naive",
    "l_polynomial",
    "newton_polygon_of_L",
    "verify_prediction",
]

DEFAULT_FIELD_GUARD = 16
# enumeration tables are int64 arrays of this many entries
DEFAULT_MAX_FIELD_SIZE = 1 << 21
CHUNK = 1 << 16


def field_guard() -> int:
    raw = os.environ.get("NEWTONLAB_FIELD_GUARD")
    if not raw:
        return DEFAULT_FIELD_GUARD
    try:
        return int(raw)
    except ValueError:
        raise NewtonLabError(f"NEWTONLAB_FIELD_GUARD={raw!r} is not an integer") from None


def max_field_size() -> int:
    raw = os.environ.get("NEWTONLAB_MAX_FIELD_SIZE")
    return int(raw) if raw else DEFAULT_MAX_FIELD_SIZE


def _least_irreducible(p: int, e: int) -> tuple:
    for tail in product(range(p), repeat=e):
        # tail = (a_{e-1}, ..., a_0), compared lexicographically
        if gf_irreducible_p([1, *tail], p, ZZ):
            return tuple(reversed(tail)) + (1,)
    raise AssertionError(f"no irreducible polynomial of degree {e} over F_{p}")


class FieldTower:
    """Arithmetic in F_{p^e} on integer-encoded elements."""

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = _least_irreducible(p, e)
        self._tables = None

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, modulus={fpoly.format_poly(self.modulus)})"

    # -- scalar arithmetic -------------------------------------------------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def encode(self, digits) -> int:
        acc = 0
        for c in reversed(list(digits)):
            acc = acc * self.p + c % self.p
        return acc

    def add(self, a: int, b: int) -> int:
        return self.encode(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        return self.encode(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        prod = fpoly.mul(tuple(self.digits(a)), tuple(self.digits(b)), p)
        rem = fpoly.divmod_poly(prod, self.modulus, p)[1] if prod else ()
        return self.encode(list(rem) + [0] * (e - len(rem)))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inverse(a), -n)
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p."""
        acc, conj = 0, a
        for _ in range(self.e):
            acc = self.add(acc, conj)
            conj = self.frobenius(conj)
        if acc >= self.p:
            raise AssertionError(f"trace of {a} left the prime field")
        return acc

    def elements(self) -> range:
        return range(self.q)

    # -- vectorised tables -------------------------------------------------

    def _mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, e = self.p, self.e
        out = np.empty_like(a)
        powers = p ** np.arange(e, dtype=np.int64)
        for lo in range(0, len(a), CHUNK):
            da = (a[lo : lo + CHUNK, None] // powers) % p
            db = (b[lo : lo + CHUNK, None] // powers) % p
            conv = np.zeros((len(da), 2 * e - 1), dtype=np.int64)
            for i in range(e):
                conv[:, i : i + e] += da[:, i : i + 1] * db
            for k in range(2 * e - 2, e - 1, -1):
                c = conv[:, k] % p
                for t in range(e):
                    if self.modulus[t]:
                        conv[:, k - e + t] -= c * self.modulus[t]
            out[lo : lo + CHUNK] = (conv[:, :e] % p) @ powers
        return out

    def _primitive_element(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        primes = list(factorint(order))
        for g in range(1, self.q):
            if all(self.pow(g, order // r) != 1 for r in primes):
                return g
        raise AssertionError("no primitive element found")

    def tables(self):
        """``(exp, log, trace_basis)``: exp[n] = gen^n, log inverts it on nonzero elements."""
        if self._tables is None:
            if self.q > max_field_size():
                raise FieldGuard(
                    f"F_{self.p}^{self.e} has {self.q} elements, over the enumeration "
                    f"budget {max_field_size()}"
                )
            order = self.q - 1
            gen = self._primitive_element()
            block = isqrt(order) + 1
            small = [1]
            for _ in range(block - 1):
                small.append(self.mul(small[-1], gen))
            step = self.mul(small[-1], gen)
            big = [1]
            for _ in range(-(-order // block) - 1):
                big.append(self.mul(big[-1], step))
            small_a = np.array(small, dtype=np.int64)
            big_a = np.array(big, dtype=np.int64)
            exp = self._mul_vec(np.repeat(big_a, block), np.tile(small_a, len(big_a)))[:order]
            log = np.full(self.q, -1, dtype=np.int64)
            log[exp] = np.arange(order, dtype=np.int64)
            if (log[1:] < 0).any() or log[0] != -1:
                raise AssertionError("exp table is not a permutation of the nonzero elements")
            basis = np.array([self.trace(self.p**t) for t in range(self.e)], dtype=np.int64)
            self._tables = (exp, log, basis)
        return self._tables


@lru_cache(maxsize=32)
def _cached_field(p: int, e: int) -> FieldTower:
    return FieldTower(p, e)


def build_field(p: int, e: int) -> FieldTower:
    if not is_odd_prime(p):
        raise NewtonLabError(f"p={p} is not an odd prime")
    if e < 1 or e > field_guard():
        raise DegreeTooLarge(f"extension degree {e} outside [1, {field_guard()}]")
    return _cached_field(p, e)


# -- curves and point counts ----------------------------------------------


@dataclass(frozen=True)
class CurveOverP1:
    p: int
    f: RationalFunction
    spec: CoverSpec
    genus: int


def curve_from_function(f: Union[RationalFunction, str], p: Optional[int] = None) -> CurveOverP1:
    if isinstance(f, str):
        if p is None:
            raise NewtonLabError("a prime is needed to parse a function string")
        f = parse_rational_function(f, p)
    reduced = reduce_artin_schreier(f)
    spec = cover_of_function(reduced)
    return CurveOverP1(reduced.p, reduced, spec, rh_genus(spec))


def _check_reduced(curve: CurveOverP1) -> None:
    for place, order in poles(curve.f):
        if order % curve.p == 0:
            raise NotReduced(f"pole of order {order} divisible by p={curve.p}")


def _count_at_infinity(curve: CurveOverP1, k: int) -> int:
    f, p = curve.f, curve.p
    if not f.is_zero() and f.order_at_infinity() > 0:
        return 1
    value = 0
    if not f.is_zero() and f.order_at_infinity() == 0:
        value = f.num[-1] * pow(f.den[-1], -1, p) % p
    return p if (k * value) % p == 0 else 0


def _chunk_count(field: FieldTower, num, den, lo: int, hi: int) -> int:
    exp, log, basis = field.tables()
    p, order = field.p, field.q - 1
    n = np.arange(lo, hi, dtype=np.int64)

    def horner(coeffs):
        y = np.zeros_like(n)
        for c in reversed(coeffs):
            nz = y != 0
            y[nz] = exp[(log[y[nz]] + n[nz]) % order]
            low = y % p
            y += (low + c) % p - low
        return y

    nv, dv = horner(num), horner(den)
    poles_here = dv == 0
    live = ~poles_here & (nv != 0)
    fv = np.zeros_like(n)
    fv[live] = exp[(log[nv[live]] - log[dv[live]]) % order]
    tr = np.zeros_like(n)
    for t in range(field.e):
        tr += ((fv // p**t) % p) * basis[t]
    tr %= p
    return int(poles_here.sum()) + p * int(((tr == 0) & ~poles_here).sum())


def count_points(curve: CurveOverP1, k: int, workers: int = 1, chunk: int = CHUNK) -> int:
    """``#C(F_{p^k})``; chunks of the enumeration may run on several threads."""
    _check_reduced(curve)
    if k < 1:
        raise NewtonLabError("k must be positive")
    try:
        field = build_field(curve.p, k)
    except DegreeTooLarge as exc:
        raise FieldGuard(str(exc)) from None
    if field.q > max_field_size():
        raise FieldGuard(f"F_{field.p}^{k} has {field.q} elements, over the enumeration budget {max_field_size()}")
    f, p = curve.f, curve.p
    total = _count_at_infinity(curve, k)
    # x = 0 sits outside the logarithm tables
    d0, n0 = fpoly.evaluate(f.den, 0, p), fpoly.evaluate(f.num, 0, p)
    if d0 == 0:
        total += 1
    elif (k * n0 * pow(d0, -1, p)) % p == 0:
        total += p
    field.tables()
    bounds = [(lo, min(lo + chunk, field.q - 1)) for lo in range(0, field.q - 1, chunk)]
    job = lambda b: _chunk_count(field, f.num, f.den, *b)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, bounds))
    else:
        parts = [job(b) for b in bounds]
    return total + sum(parts)


def count_points_naive(curve: CurveOverP1, k: int) -> int:
    """Scalar element-by-element count; slow, for cross-checks on small fields."""
    _check_reduced(curve)
    field = FieldTower(curve.p, k)
    f, p = curve.f, curve.p

    def ev(coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = field.add(field.mul(acc, x), c)
        return acc

    total = _count_at_infinity(curve, k)
    for x in field.elements():
        d = ev(f.den, x)
        if d == 0:
            total += 1
        elif field.trace(field.mul(ev(f.num, x), field.inverse(d))) == 0:
            total += p
    return total


# -- L-polynomials --------------------------------------------------------


def _weil_ok(n: int, k: int, g: int, p: int) -> bool:
    a = p**k + 1 - n
    return a * a <= 4 * g * g * p**k


def _power_sums_from_elementary(e: list[int], count: int) -> list[int]:
    s = [0] * (count + 1)
    for k in range(1, count + 1):
        acc = (-1) ** (k - 1) * k * (e[k] if k < len(e) else 0)
        for i in range(1, k):
            if i < len(e):
                acc += (-1) ** (i - 1) * e[i] * s[k - i]
        s[k] = acc
    return s


@dataclass(frozen=True)
class LPolynomial:
    coefficients: tuple[int, ...]
    g: int
    p: int
    counts: tuple[int, ...] = field(default=(), compare=False)
    verified_through: int = field(default=0, compare=False)

    def __post_init__(self):
        a, g, p = self.coefficients, self.g, self.p
        if len(a) != 2 * g + 1 or a[0] != 1:
            raise RoundTripFailure(f"malformed L-polynomial {a}")
        for i in range(g + 1):
            if a[2 * g - i] != p ** (g - i) * a[i]:
                raise RoundTripFailure(f"functional equation fails at degree {i}")

    def point_counts(self, upto: int) -> list[int]:
        """``N_1 .. N_upto`` implied by the coefficients."""
        e = [(-1) ** i * c for i, c in enumerate(self.coefficients)]
        s = _power_sums_from_elementary(e, upto)
        return [self.p**k + 1 - s[k] for k in range(1, upto + 1)]

    def __str__(self):
        return ",".join(str(c) for c in self.coefficients)


def l_polynomial(curve: CurveOverP1, workers: int = 1) -> LPolynomial:
    g, p = curve.genus, curve.p
    guard = field_guard()

    def affordable(k):
        return k <= guard and p**k <= max_field_size()

    if g == 0:
        return LPolynomial((1,), 0, p)
    if not affordable(g):
        raise FieldGuard(f"genus {g} needs counts over F_{p}^{g}, beyond the field guard")
    counts = [count_points(curve, k, workers) for k in range(1, g + 1)]
    s = [0] + [p**k + 1 - n for k, n in enumerate(counts, start=1)]
    e = [1]
    for k in range(1, g + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * s[i] for i in range(1, k + 1))
        if acc % k:
            raise RoundTripFailure(f"Newton identity division by {k} is inexact; counts {counts}")
        e.append(acc // k)
    a = [(-1) ** i * e[i] for i in range(g + 1)]
    a += [p ** (g - i) * a[i] for i in range(g - 1, -1, -1)]
    top = 2 * g
    while top > g and not affordable(top):
        top -= 1
    if top < 2 * g:
        warnings.warn(f"round-trip check truncated at k={top} of {2 * g} by the field guard", stacklevel=2)
    for k in range(g + 1, top + 1):
        counts.append(count_points(curve, k, workers))
    for k, n in enumerate(counts, start=1):
        if not _weil_ok(n, k, g, p):
            raise RoundTripFailure(f"N_{k}={n} violates the Weil bound for genus {g}")
    L = LPolynomial(tuple(a), g, p, tuple(counts), top)
    if L.point_counts(top) != counts:
        raise RoundTripFailure(f"recomputed counts {L.point_counts(top)} differ from measured {counts}")
    return L


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def newton_polygon_of_L(L: LPolynomial) -> NewtonPolygon:
    """Lower convex hull of ``(i, v_p(a_i))``, expanded to a slope multiset."""
    pts = [(i, _valuation(c, L.p)) for i, c in enumerate(L.coefficients) if c]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord to pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y2 - y1, x2 - x1)] * (x2 - x1))
    return from_slopes(slopes)


# -- verification ---------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    f: RationalFunction
    spec: CoverSpec
    genus: int
    predicted: NewtonPolygon
    exactness: Exactness
    L: LPolynomial
    measured: NewtonPolygon
    above: bool
    prank_expected: int
    failures: tuple[str, ...]

    @property
    def verdict(self) -> str:
        if self.failures:
            return "COUNTEREXAMPLE"
        return "equal" if self.measured == self.predicted else "above"

    @property
    def branches(self) -> str:
        return ",".join(str(b) for b in self.spec.branches)

    def __str__(self):
        return (
            f"verdict={self.verdict} measured={format_slopes(self.measured)} "
            f"predicted={format_slopes(self.predicted)} genus={self.genus} "
            f"branches={self.branches} exact={self.exactness} "
            f"prank={self.measured.p_rank} ds_prank={self.prank_expected} "
            f"L={self.L} f={str(self.f).replace(' ', '')}"
        )


def verify_prediction(
    f: Union[RationalFunction, str], p: Optional[int] = None, workers: int = 1, strict: bool = False
) -> VerificationReport:
    """Measure the Newton polygon of ``y^p - y = f`` and check it against the prediction.

    With ``strict=True`` a failed check raises :class:`CounterexampleFound`
    instead of only being reported in the verdict.
    """
    curve = curve_from_function(f, p)
    predicted = hodge_lower_bound(curve.spec)
    exactness = exactness_class(curve.spec)
    L = l_polynomial(curve, workers)
    measured = newton_polygon_of_L(L)
    above = lies_above(measured, predicted)
    expected_prank = ds_prank(curve.spec)
    failures = []
    if not above:
        failures.append("measured polygon lies below the lower bound")
    if exactness is Exactness.SMALL_CONDUCTORS and measured != predicted:
        failures.append("small-conductor cover does not meet its bound")
    if measured.p_rank != expected_prank:
        failures.append(f"p-rank {measured.p_rank} differs from Deuring-Shafarevich {expected_prank}")
    report = VerificationReport(
        curve.f, curve.spec, curve.genus, predicted, exactness, L, measured, above,
        expected_prank, tuple(failures),
    )
    if strict and failures:
        raise CounterexampleFound("; ".join(failures), report)
    return report

