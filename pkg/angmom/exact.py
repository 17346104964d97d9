"""
Exact numbers: half-integers kept as doubled integers, factorial kernels,
and RadicalSum, the rational span of square roots in which every coupling
coefficient lives.
"""
import re
import math
import logging
import decimal
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd

from sympy import factorint

from angmom.errors import QuantumNumberError, ConsistencyError

logger = logging.getLogger(__name__)


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A quantum number stored as twice its value."""

    twice: int

    @classmethod
    def of(cls, value):
        if isinstance(value, HalfInt):
            return value
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise QuantumNumberError("half-integer", f"{value} is not a multiple of 1/2")
        return cls(int(doubled))

    @classmethod
    def parse(cls, text: str):
        """Accept '1/2', '3/2', '-1/2', '2' or '0.5'."""
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise QuantumNumberError("half-integer", f"cannot parse {text!r}")
        return cls.of(value)

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def integer(self) -> int:
        if self.twice % 2:
            raise QuantumNumberError("integer", f"{self} is half-odd")
        return self.twice // 2

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction)):
            return Fraction(self.twice, 2) == other
        return NotImplemented

    def __hash__(self):
        return hash(Fraction(self.twice, 2))

    def __str__(self):
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"

    __repr__ = __str__


def whole(*parts) -> int:
    """Sum of HalfInts (or ints) that must be a whole integer."""
    total = sum(HalfInt.of(p).twice for p in parts)
    if total % 2:
        raise QuantumNumberError("integer", f"sum of {parts} is half-odd")
    return total // 2


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    if n < 0:
        raise QuantumNumberError("nonnegative factorial", f"{n}!")
    return math.factorial(n)


def pochhammer(a, n: int) -> Fraction:
    """Rising factorial a(a+1)...(a+n-1); the empty product is 1."""
    if n < 0:
        raise QuantumNumberError("nonnegative Pochhammer length", str(n))
    a = Fraction(a)
    result = Fraction(1)
    for i in range(n):
        result *= a + i
        if result == 0:
            break
    return result


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


@lru_cache(maxsize=4096)
def square_split(n: int):
    """Return (root, core) with n = root**2 * core and core squarefree."""
    if n <= 0:
        raise QuantumNumberError("positive radicand", str(n))
    root, core = 1, 1
    for prime, power in factorint(n).items():
        root *= prime ** (power // 2)
        if power % 2:
            core *= prime
    return root, core


_TERM = re.compile(r"^\((\d+)/(\d+)\)\*sqrt\((\d+)(?:/(\d+))?\)$")
_RATIONAL = re.compile(r"^\(?(\d+)(?:/(\d+))?\)?$")


class RadicalSum:
    """
    Finite sum of q*sqrt(n) with rational q and squarefree integer n.
    Immutable; equal values have identical term maps.
    """

    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        cleaned = {}
        for radicand, coefficient in (terms or {}).items():
            coefficient = Fraction(coefficient)
            if coefficient == 0:
                continue
            root, core = square_split(radicand)
            cleaned[core] = cleaned.get(core, Fraction(0)) + coefficient * root
        self._terms = tuple(sorted((n, q) for n, q in cleaned.items() if q != 0))

    @classmethod
    def rational(cls, value):
        return cls({1: Fraction(value)})

    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(n == 1 for n, _ in self._terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ConsistencyError(f"{self} is not rational")
        return self._terms[0][1] if self._terms else Fraction(0)

    def squared_rational(self) -> Fraction:
        """The square as a rational; only defined for a single term."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) > 1:
            raise ConsistencyError(f"square of {self} is not rational")
        n, q = self._terms[0]
        return q * q * n

    def sign(self) -> int:
        """
        Exact sign. Split off one prime p of the radicands, self = A + B sqrt(p);
        when A and B disagree in sign, the answer is sign(A) * sign(A^2 - p B^2),
        which no longer involves p.
        """
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            return 1 if self._terms[0][1] > 0 else -1
        prime = min(factorint(self._terms[-1][0]))
        outer = RadicalSum({n: q for n, q in self._terms if n % prime})
        inner = RadicalSum({n // prime: q for n, q in self._terms if n % prime == 0})
        a, b = outer.sign(), inner.sign()
        if b == 0:
            return a
        if a == 0 or a == b:
            return b
        return a * (outer * outer - inner * inner * prime).sign()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __add__(self, other):
        other = _coerce(other)
        merged = dict(self._terms)
        for n, q in other._terms:
            merged[n] = merged.get(n, Fraction(0)) + q
        return RadicalSum(merged)

    __radd__ = __add__

    def __neg__(self):
        return RadicalSum({n: -q for n, q in self._terms})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        product = {}
        for n1, q1 in self._terms:
            for n2, q2 in other._terms:
                g = gcd(n1, n2)
                core = (n1 // g) * (n2 // g)
                product[core] = product.get(core, Fraction(0)) + q1 * q2 * g
        return RadicalSum(product)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RadicalSum):
            if len(other._terms) != 1:
                raise ConsistencyError(f"division by multi-term {other}")
            n, q = other._terms[0]
            # 1/(q sqrt n) = sqrt(n) / (q n)
            return self * RadicalSum({n: 1 / (q * n)})
        return self * (1 / Fraction(other))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RadicalSum.rational(other)
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        return hash(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def to_text(self) -> str:
        return render(self)

    def to_decimal(self, digits: int) -> decimal.Decimal:
        with decimal.localcontext() as ctx:
            ctx.prec = digits + 20
            total = decimal.Decimal(0)
            for n, q in self._terms:
                part = decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator)
                if n != 1:
                    part *= decimal.Decimal(n).sqrt()
                total += part
            return +total

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"RadicalSum({render(self)})"


def _coerce(value) -> RadicalSum:
    if isinstance(value, RadicalSum):
        return value
    return RadicalSum.rational(value)


ZERO = RadicalSum()
ONE = RadicalSum.rational(1)


def sqrt_normalize(r) -> RadicalSum:
    """The unique q*sqrt(s) with s squarefree and q**2 * s == r."""
    r = Fraction(r)
    if r < 0:
        raise QuantumNumberError("nonnegative radicand", str(r))
    if r == 0:
        return ZERO
    # sqrt(p/q) = sqrt(p*q)/q
    return RadicalSum({r.numerator * r.denominator: Fraction(1, r.denominator)})


def radical_arith(a: RadicalSum, b: RadicalSum, op: str) -> RadicalSum:
    if op == 'add':
        return a + b
    if op == 'mul':
        return a * b
    raise ValueError(f"unknown radical operation {op!r}")


def signed_sqrt(sign: int, r) -> RadicalSum:
    """sign * sqrt(r) for a nonnegative rational r."""
    root = sqrt_normalize(r)
    return -root if sign < 0 else root


def half_angle_beta(p: int, q: int) -> Fraction:
    """Integral over [0, pi] of cos^p(t/2) sin^q(t/2) sin(t) dt, for even p and q."""
    if p < 0 or q < 0 or p % 2 or q % 2:
        raise QuantumNumberError("even half-angle exponents", f"p={p}, q={q}")
    return Fraction(2 * factorial(q // 2) * factorial(p // 2), factorial((p + q) // 2 + 1))


def _render_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def render(value: RadicalSum) -> str:
    """Canonical text: terms by radicand, '(p/q)*sqrt(r/s)', '0' for zero."""
    pieces = []
    for index, (n, q) in enumerate(value._terms):
        magnitude = abs(q)
        if n == 1:
            body = _render_fraction(magnitude)
        else:
            split = gcd(magnitude.denominator, n)
            shown = magnitude * split
            radicand = f"{n // split}/{split}" if split != 1 else f"{n}"
            body = f"({shown.numerator}/{shown.denominator})*sqrt({radicand})"
        if index == 0:
            pieces.append(f"-{body}" if q < 0 else body)
        else:
            pieces.append(f" - {body}" if q < 0 else f" + {body}")
    return ''.join(pieces) if pieces else '0'


def parse(text: str) -> RadicalSum:
    """Inverse of render."""
    text = text.strip()
    if text == '0':
        return ZERO
    tokens = re.split(r"\s+([+-])\s+", text)
    signs = [1]
    head = tokens[0]
    if head.startswith('-'):
        signs[0] = -1
        head = head[1:]
    bodies = [head]
    for i in range(1, len(tokens), 2):
        signs.append(-1 if tokens[i] == '-' else 1)
        bodies.append(tokens[i + 1])
    total = ZERO
    for sign, body in zip(signs, bodies):
        match = _TERM.match(body)
        if match:
            p, q, r, s = match.groups()
            term = sqrt_normalize(Fraction(int(r), int(s or 1))) * Fraction(int(p), int(q))
        else:
            match = _RATIONAL.match(body)
            if not match:
                raise QuantumNumberError("canonical radical text", f"cannot parse {body!r}")
            p, q = match.groups()
            term = RadicalSum.rational(Fraction(int(p), int(q or 1)))
        total = total + (term if sign > 0 else -term)
    return total


def format_decimal(value: RadicalSum, digits: int) -> str:
    """Display-only decimal with `digits` places after the point."""
    approx = value.to_decimal(digits)
    with decimal.localcontext() as ctx:
        ctx.prec = digits + 40
        return str(approx.quantize(decimal.Decimal(1).scaleb(-digits)))
