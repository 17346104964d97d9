from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.polys.domains import QQ

from angmom.errors import QuantumNumberError
from angmom.exact import HalfInt, factorial, sqrt_normalize
from angmom.polyn import (
    RationalPoly, X, endpoint_values, jacobi, jacobi_recurrence_residual, laguerre,
    laguerre_descending, laguerre_product_expansion, laguerre_recurrence_residual,
    laguerre_weighted_overlap, monomial_to_laguerre, wigner_small_d,
)

x = sympy.Symbol('x')
orders = st.integers(min_value=0, max_value=7)
parameters = st.integers(min_value=0, max_value=5)


def coefficients(expr):
    return tuple(Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(expr, x).all_coeffs()))


def test_rational_poly_algebra():
    p = X * X - 1
    assert p.degree == 2
    assert p.evaluate(3) == 8
    assert (X - 1) * (X + 1) == p
    assert p.compose_linear(2, 1) == (X * 2 + 1) ** 2 - 1
    assert p - p == 0
    assert str(RationalPoly([Fraction(1, 2), 0, -3])) == '1/2 - 3*x^2'
    assert p.scale(Fraction(1, 2)).coefficient(2) == Fraction(1, 2)
    assert p.coefficient(7) == 0


def test_rational_poly_is_a_sympy_poly_over_qq():
    p = laguerre(3, 1)
    assert isinstance(p.poly, sympy.Poly)
    assert p.poly.domain == QQ
    assert p.poly == sympy.Poly(sympy.assoc_laguerre(3, 1, x), x, domain=QQ)
    assert RationalPoly.from_poly(p.poly * p.poly) == p * p
    with pytest.raises(QuantumNumberError):
        X ** -1


@given(orders, parameters)
def test_laguerre_matches_sympy(n, alpha):
    assert laguerre(n, alpha).coeffs == coefficients(sympy.assoc_laguerre(n, alpha, x))


@given(orders, parameters)
def test_descending_sum_is_the_standard_polynomial(n, alpha):
    assert laguerre_descending(n, alpha) == laguerre(n, alpha)


@given(st.integers(min_value=1, max_value=7), parameters)
def test_laguerre_recurrence(n, alpha):
    assert laguerre_recurrence_residual(n, alpha).is_zero()


@given(orders, parameters, parameters)
def test_jacobi_matches_sympy(n, alpha, beta):
    assert jacobi(n, alpha, beta).coeffs == coefficients(sympy.jacobi(n, alpha, beta, x))


@given(st.integers(min_value=2, max_value=7), parameters, parameters)
def test_jacobi_recurrence(n, alpha, beta):
    assert jacobi_recurrence_residual(n, alpha, beta).is_zero()


@given(orders, parameters)
def test_endpoint_values(n, alpha):
    assert jacobi(n, alpha, 2).evaluate(1) == endpoint_values('jacobi_at_one', n, alpha)
    assert laguerre(n, alpha).evaluate(0) == endpoint_values('laguerre_at_zero', n, alpha)


def test_endpoint_rejects_unknown_kind():
    with pytest.raises(ValueError):
        endpoint_values('hermite', 1, 0)


@pytest.mark.parametrize("bad", [(-1, 0), (2, -1)], ids=['order', 'alpha'])
def test_laguerre_rejects_negative(bad):
    with pytest.raises(QuantumNumberError):
        laguerre(*bad)


@given(orders, orders, parameters)
def test_laguerre_orthogonality(n1, n2, alpha):
    expected = Fraction(factorial(n1 + alpha), factorial(n1)) if n1 == n2 else 0
    assert laguerre_weighted_overlap(n1, alpha, n2, alpha, alpha) == expected


@given(st.integers(min_value=0, max_value=6), parameters)
def test_monomial_to_laguerre(r, alpha):
    total = RationalPoly()
    for i, c in enumerate(monomial_to_laguerre(r, alpha)):
        total = total + laguerre(i, alpha).scale(c)
    assert total == (X ** r).scale(Fraction(1, factorial(r)))


def test_laguerre_product_expansion_leading_entry():
    expansion = laguerre_product_expansion(2, 1, 1, 0)
    assert set(expansion) == {(i, j) for i in range(3) for j in range(2)}
    # x^2/2 from L_2^1 times -x from L_1^0
    assert expansion[(0, 0)] == Fraction(-1, 2)
    assert expansion[(2, 1)] == laguerre(2, 1).evaluate(0) * laguerre(1, 0).evaluate(0)


def test_small_d_examples():
    d = wigner_small_d('1/2', '1/2', '1/2')
    assert (d.cos_half_power, d.sin_half_power) == (1, 0)
    assert d.prefactor == 1
    d = wigner_small_d(1, 1, 0)
    assert d.prefactor == -sqrt_normalize(2)
    assert d.squared_polynomial() == (1 - X * X).scale(Fraction(1, 2))


@given(st.integers(min_value=0, max_value=6), st.data())
def test_small_d_rows_are_normalized(twice_j, data):
    j = HalfInt(twice_j)
    mp = HalfInt(data.draw(st.sampled_from(range(-twice_j, twice_j + 1, 2))))
    total = RationalPoly()
    for twice_m in range(-twice_j, twice_j + 1, 2):
        d = wigner_small_d(j, HalfInt(twice_m), mp)
        total = total + d.squared_polynomial()
        assert d.at_identity() == (1 if twice_m == mp.twice else 0)
    assert total == 1


def test_small_d_rejects_bad_projection():
    with pytest.raises(QuantumNumberError):
        wigner_small_d(1, '1/2', 0)
