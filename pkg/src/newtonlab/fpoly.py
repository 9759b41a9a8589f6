"""Polynomials and rational functions over a prime field F_p.

Polynomials are tuples of ints in ``[0, p)``, lowest degree first, with no
trailing zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .errors import NewtonLabError

Poly = tuple


def trim(coeffs, p: int) -> Poly:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def deg(a: Poly) -> int:
    return len(a) - 1  # -1 for the zero polynomial


def add(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def neg(a: Poly, p: int) -> Poly:
    return trim([-c for c in a], p)


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, neg(b, p), p)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, p)


def scale(a: Poly, c: int, p: int) -> Poly:
    return trim([c * x for x in a], p)


def divmod_poly(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for shift in range(len(a) - len(b), -1, -1):
        c = r[shift + len(b) - 1] * inv % p
        q[shift] = c
        if c:
            for j, y in enumerate(b):
                r[shift + j] = (r[shift + j] - c * y) % p
    return trim(q, p), trim(r, p)


def monic(a: Poly, p: int) -> Poly:
    if not a:
        return a
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    while b:
        a, b = b, divmod_poly(a, b, p)[1]
    return monic(a, p)


def power(a: Poly, n: int, p: int) -> Poly:
    out: Poly = (1,)
    for _ in range(n):
        out = mul(out, a, p)
    return out


def evaluate(a: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def factor(a: Poly, p: int) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, sorted by (degree, coefficients)."""
    if deg(a) < 1:
        return []
    _, factors = gf_factor([int(c) for c in reversed(a)], p, ZZ)
    out = [(tuple(int(c) for c in reversed(f)), int(e)) for f, e in factors]
    return sorted(out, key=lambda fe: (len(fe[0]), fe[0][::-1]))


def format_poly(a: Poly, var: str = "x") -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms)


@dataclass(frozen=True)
class RationalFunction:
    """``num / den`` in lowest terms with ``den`` monic."""

    p: int
    num: Poly
    den: Poly = (1,)

    @classmethod
    def make(cls, p: int, num, den=(1,)) -> "RationalFunction":
        num, den = trim(num, p), trim(den, p)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            return cls(p, (), (1,))
        g = gcd(num, den, p)
        if deg(g) > 0:
            num, den = divmod_poly(num, g, p)[0], divmod_poly(den, g, p)[0]
        lc = pow(den[-1], -1, p)
        return cls(p, scale(num, lc, p), scale(den, lc, p))

    @classmethod
    def constant(cls, p: int, c: int) -> "RationalFunction":
        return cls.make(p, (c,))

    @classmethod
    def variable(cls, p: int) -> "RationalFunction":
        return cls.make(p, (0, 1))

    @classmethod
    def monomial(cls, p: int, c: int, n: int) -> "RationalFunction":
        """``c * x**n`` for any integer ``n``."""
        if n >= 0:
            return cls.make(p, (0,) * n + (c,))
        return cls.make(p, (c,), (0,) * (-n) + (1,))

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.p != self.p:
                raise NewtonLabError("mixing rational functions over different fields")
            return other
        if isinstance(other, int):
            return RationalFunction.constant(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        return RationalFunction.make(
            p, add(mul(self.num, o.den, p), mul(o.num, self.den, p), p), mul(self.den, o.den, p)
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.p, neg(self.num, self.p), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        return RationalFunction.make(p, mul(self.num, o.num, p), mul(self.den, o.den, p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDivisionError("division by the zero function")
        p = self.p
        return RationalFunction.make(p, mul(self.num, o.den, p), mul(self.den, o.num, p))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction.constant(self.p, 1) / (self ** (-n))
        p = self.p
        return RationalFunction.make(p, power(self.num, n, p), power(self.den, n, p))

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == (1,)

    def order_at_infinity(self) -> int:
        """Pole order at infinity (negative means a zero there)."""
        if not self.num:
            raise NewtonLabError("the zero function has no order")
        return deg(self.num) - deg(self.den)

    def __str__(self) -> str:
        if self.is_polynomial():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_rational_function(text: str, p: int, var: str = "x") -> RationalFunction:
    """Parse strings such as ``(x^2*(x-1) + 1)/(x*(x-1))``; integers are read mod ``p``."""
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise NewtonLabError(f"cannot parse {text!r}: {exc.msg}") from None

    def integer(node) -> int:
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = integer(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise NewtonLabError(f"exponent must be an integer literal in {text!r}")

    def walk(node) -> RationalFunction:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return RationalFunction.constant(p, node.value)
        if isinstance(node, ast.Name) and node.id == var:
            return RationalFunction.variable(p)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            if isinstance(node.op, ast.Pow):
                return walk(node.left) ** integer(node.right)
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            try:
                return a / b
            except ZeroDivisionError:
                raise NewtonLabError(f"division by zero mod {p} in {text!r}") from None
        raise NewtonLabError(f"unsupported syntax in {text!r}: {ast.dump(node)[:40]}")

    return walk(tree)
