"""
Special polynomials with exact rational coefficients: generalized Laguerre,
Jacobi, the factored Wigner small-d, and the monomial <-> Laguerre change of
basis used by the radial integrals.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, Rational, Symbol
from sympy.polys.domains import QQ

from angmom.exact import (
    HalfInt, RadicalSum, binomial, factorial, sqrt_normalize, whole,
)
from angmom.errors import QuantumNumberError

logger = logging.getLogger(__name__)

X_SYMBOL = Symbol('x')


class RationalPoly:
    """
    Polynomial in one variable over QQ, backed by a sympy Poly. `coeffs`
    lists the coefficients as Fractions, constant term first.
    """

    __slots__ = ('poly', 'coeffs')

    def __init__(self, coeffs=()):
        descending = [_rational(c) for c in coeffs][::-1]
        self._hold(Poly(descending or [0], X_SYMBOL, domain=QQ))

    def _hold(self, poly):
        self.poly = poly
        self.coeffs = () if poly.is_zero else tuple(_fraction(c) for c in reversed(poly.all_coeffs()))

    @classmethod
    def from_poly(cls, poly):
        result = cls.__new__(cls)
        result._hold(poly)
        return result

    @classmethod
    def constant(cls, value):
        return cls([value])

    @classmethod
    def linear(cls, slope, intercept):
        """slope*x + intercept"""
        return cls([intercept, slope])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other):
        return RationalPoly.from_poly(self.poly + _as_poly(other).poly)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly.from_poly(-self.poly)

    def __sub__(self, other):
        return RationalPoly.from_poly(self.poly - _as_poly(other).poly)

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            return self.scale(other)
        return RationalPoly.from_poly(self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise QuantumNumberError("nonnegative polynomial power", str(exponent))
        return RationalPoly.from_poly(self.poly ** exponent)

    def scale(self, factor):
        return RationalPoly.from_poly(self.poly.mul_ground(_rational(factor)))

    def evaluate(self, x) -> Fraction:
        return _fraction(self.poly.eval(_rational(x)))

    def compose_linear(self, slope, intercept):
        """p(slope*x + intercept)"""
        return RationalPoly.from_poly(self.poly.compose(RationalPoly.linear(slope, intercept).poly))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPoly.constant(other)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return '0'
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            magnitude = abs(c)
            number = str(magnitude.numerator) if magnitude.denominator == 1 else f"{magnitude.numerator}/{magnitude.denominator}"
            if k == 0:
                body = number
            else:
                power = 'x' if k == 1 else f"x^{k}"
                body = power if magnitude == 1 else f"{number}*{power}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return ''.join(parts)

    def __repr__(self):
        return f"RationalPoly({self})"


def _rational(value) -> Rational:
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _as_poly(value):
    return value if isinstance(value, RationalPoly) else RationalPoly.constant(value)


X = RationalPoly.linear(1, 0)


@lru_cache(maxsize=None)
def laguerre(n: int, alpha: int) -> RationalPoly:
    """Standard generalized Laguerre polynomial, L_0 = 1."""
    if n < 0 or alpha < 0:
        raise QuantumNumberError("nonnegative Laguerre order", f"n={n}, alpha={alpha}")
    return RationalPoly(
        Fraction((-1) ** k * binomial(n + alpha, n - k), factorial(k)) for k in range(n + 1)
    )


def laguerre_descending(n: int, alpha: int) -> RationalPoly:
    """
    The same polynomial assembled from the descending-order sum: the
    coefficient of x^(n-k) is (-1)^n (-1)^k (alpha+n)! / (k! (n-k)! (alpha+n-k)!).
    """
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = Fraction(
            (-1) ** (n + k) * factorial(alpha + n),
            factorial(k) * factorial(n - k) * factorial(alpha + n - k),
        )
    return RationalPoly(coeffs)


def laguerre_recurrence_residual(n: int, alpha: int) -> RationalPoly:
    """(n+1)L_{n+1} - (2n+1+alpha-x)L_n + (n+alpha)L_{n-1}; zero for n >= 1."""
    return (
        laguerre(n + 1, alpha) * (n + 1)
        - RationalPoly.linear(-1, 2 * n + 1 + alpha) * laguerre(n, alpha)
        + laguerre(n - 1, alpha) * (n + alpha)
    )


@lru_cache(maxsize=None)
def jacobi(n: int, alpha: int, beta: int) -> RationalPoly:
    """P_n^(alpha, beta)(z) from the explicit finite sum."""
    if min(n, alpha, beta) < 0:
        raise QuantumNumberError("nonnegative Jacobi parameters", f"{n}, {alpha}, {beta}")
    minus = RationalPoly.linear(Fraction(1, 2), Fraction(-1, 2))  # (z-1)/2
    plus = RationalPoly.linear(Fraction(1, 2), Fraction(1, 2))  # (z+1)/2
    total = RationalPoly()
    for s in range(n + 1):
        weight = binomial(n + alpha, n - s) * binomial(n + beta, s)
        total = total + (minus ** s) * (plus ** (n - s)) * weight
    return total


def jacobi_recurrence_residual(n: int, alpha: int, beta: int) -> RationalPoly:
    """Three-term recurrence for P_n from P_{n-1}, P_{n-2}; zero for n >= 2."""
    s = 2 * n + alpha + beta
    lhs = jacobi(n, alpha, beta) * (2 * n * (n + alpha + beta) * (s - 2))
    middle = RationalPoly.linear(s * (s - 2), alpha * alpha - beta * beta) * jacobi(n - 1, alpha, beta) * (s - 1)
    last = jacobi(n - 2, alpha, beta) * (2 * (n + alpha - 1) * (n + beta - 1) * s)
    return lhs - middle + last


def monomial_to_laguerre(r: int, alpha: int):
    """Coefficients c_i with x^r / r! = sum_i c_i L_i^alpha(x)."""
    return [Fraction((-1) ** i * binomial(r + alpha, r - i)) for i in range(r + 1)]


def laguerre_weighted_overlap(n1: int, a1: int, n2: int, a2: int, p: int) -> Fraction:
    """Integral over [0, inf) of x^p e^-x L_n1^a1(x) L_n2^a2(x)."""
    if min(n1, a1, n2, a2, p) < 0:
        raise QuantumNumberError("nonnegative overlap arguments", f"{(n1, a1, n2, a2, p)}")
    product = laguerre(n1, a1) * laguerre(n2, a2)
    return sum(
        (c * factorial(p + k) for k, c in enumerate(product.coeffs)),
        Fraction(0),
    )


def endpoint_values(kind: str, n: int, alpha: int, beta: int = 0) -> Fraction:
    if kind in ('jacobi_at_one', 'laguerre_at_zero'):
        return Fraction(binomial(n + alpha, n))
    raise ValueError(f"unknown endpoint kind {kind!r}")


def laguerre_product_expansion(n1: int, a1: int, n2: int, a2: int):
    """
    Double-sum form of L_n1^a1(x c) L_n2^a2(x (1-c)): maps (i, j) to the
    coefficient of c^(n1-i) (1-c)^(n2-j) x^(n1-i+n2-j).
    """
    first = laguerre(n1, a1)
    second = laguerre(n2, a2)
    return {
        (i, j): first.coefficient(n1 - i) * second.coefficient(n2 - j)
        for i in range(n1 + 1)
        for j in range(n2 + 1)
    }


@dataclass(frozen=True)
class SmallD:
    """
    d^j_{m,mp}(theta) in factored form:
    prefactor * sin^sin_half_power(theta/2) * cos^cos_half_power(theta/2) * jacobi_part(cos theta).
    """

    j: HalfInt
    m: HalfInt
    mp: HalfInt
    prefactor: RadicalSum
    cos_half_power: int
    sin_half_power: int
    jacobi_part: RationalPoly

    def at_identity(self) -> RadicalSum:
        if self.sin_half_power:
            return RadicalSum()
        return self.prefactor * self.jacobi_part.evaluate(1)

    def squared_polynomial(self) -> RationalPoly:
        """d^2 as a polynomial in z = cos(theta)."""
        sin_sq = RationalPoly.linear(Fraction(-1, 2), Fraction(1, 2))  # sin^2(theta/2)
        cos_sq = RationalPoly.linear(Fraction(1, 2), Fraction(1, 2))
        return (
            (sin_sq ** self.sin_half_power)
            * (cos_sq ** self.cos_half_power)
            * (self.jacobi_part * self.jacobi_part)
        ).scale(self.prefactor.squared_rational())


def wigner_small_d(j, m, mp) -> SmallD:
    j, m, mp = HalfInt.of(j), HalfInt.of(m), HalfInt.of(mp)
    for label, proj in (('m', m), ('mp', mp)):
        if abs(proj) > j or (j - proj).twice % 2:
            raise QuantumNumberError("|m| <= j with whole j - m", f"j={j}, {label}={proj}")
    candidates = [
        (whole(j + mp), 'j+mp'),
        (whole(j - mp), 'j-mp'),
        (whole(j + m), 'j+m'),
        (whole(j - m), 'j-m'),
    ]
    k, which = min(candidates, key=lambda item: item[0])
    if which in ('j+mp', 'j-m'):
        a = whole(m - mp)
        lam = a
    else:
        a = whole(mp - m)
        lam = 0
    b = j.twice - 2 * k - a
    ratio = Fraction(binomial(j.twice - k, k + a), binomial(k + b, b))
    prefactor = sqrt_normalize(ratio)
    if lam % 2:
        prefactor = -prefactor
    return SmallD(
        j=j, m=m, mp=mp,
        prefactor=prefactor,
        cos_half_power=b,
        sin_half_power=a,
        jacobi_part=jacobi(k, a, b),
    )
