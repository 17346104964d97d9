import math
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from angmom.errors import ConsistencyError, QuantumNumberError
from angmom.exact import (
    HalfInt, ONE, RadicalSum, ZERO, binomial, factorial, format_decimal,
    half_angle_beta, parse, pochhammer, radical_arith, render, signed_sqrt, sqrt_normalize,
    square_split, whole,
)

positive_fractions = st.fractions(min_value=Fraction(1, 1000), max_value=1000)
radical_sums = st.dictionaries(
    st.integers(min_value=1, max_value=30),
    st.fractions(min_value=-50, max_value=50, max_denominator=20),
    max_size=4,
).map(RadicalSum)


@pytest.mark.parametrize("text, twice", [
    ('1/2', 1), ('3/2', 3), ('-1/2', -1), ('2', 4), ('0.5', 1), ('0', 0),
], ids=['half', 'three-halves', 'negative', 'integer', 'decimal', 'zero'])
def test_half_int_parse(text, twice):
    assert HalfInt.parse(text).twice == twice


@pytest.mark.parametrize("text", ['1/3', 'abc', '0.25'])
def test_half_int_rejects(text):
    with pytest.raises(QuantumNumberError) as info:
        HalfInt.parse(text)
    assert info.value.invariant == 'half-integer'


def test_half_int_arithmetic_and_text():
    a, b = HalfInt.parse('3/2'), HalfInt.parse('1/2')
    assert a + b == 2
    assert (a - b).integer() == 1
    assert str(-b) == '-1/2'
    assert abs(HalfInt(-3)) == a
    assert b < a
    assert hash(HalfInt(2)) == hash(1)
    with pytest.raises(QuantumNumberError):
        b.integer()


def test_whole_rejects_half_odd_sums():
    assert whole(HalfInt(1), HalfInt(3)) == 2
    with pytest.raises(QuantumNumberError):
        whole(HalfInt(1), 1)


def test_factorial_kernels():
    assert factorial(0) == 1
    assert factorial(10) == 3628800
    assert pochhammer(3, 0) == 1
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(-2, 5) == 0
    assert binomial(5, 7) == 0
    with pytest.raises(QuantumNumberError):
        factorial(-1)


@pytest.mark.parametrize("n", [0, 1, 20, 171, 400])
def test_factorial_matches_math(n):
    assert factorial(n) == math.factorial(n)


@given(st.integers(min_value=1, max_value=10 ** 6))
def test_square_split(n):
    root, core = square_split(n)
    assert root * root * core == n
    assert all(power == 1 for power in sympy.factorint(core).values())


@given(positive_fractions)
def test_sqrt_normalize_squares_back(r):
    root = sqrt_normalize(r)
    assert root.squared_rational() == r
    assert root.sign() == 1
    assert len(root.terms) == 1


def test_radical_sum_identities():
    r2 = sqrt_normalize(2)
    assert r2 * r2 == 2
    assert sqrt_normalize(8) == r2 * 2
    assert sqrt_normalize(Fraction(1, 2)) * 2 == r2
    assert r2 - r2 == ZERO
    assert not (r2 - r2)
    assert (r2 + ONE).sign() == 1
    assert (ONE - r2).sign() == -1
    assert r2 / r2 == ONE
    assert radical_arith(r2, r2, 'mul') == 2
    assert signed_sqrt(-1, 3) == -sqrt_normalize(3)
    with pytest.raises(ConsistencyError):
        (r2 + ONE).squared_rational()
    with pytest.raises(QuantumNumberError):
        sqrt_normalize(-1)


@pytest.mark.parametrize("value, text", [
    (ZERO, '0'),
    (RadicalSum.rational(Fraction(-3, 4)), '-3/4'),
    (-sqrt_normalize(Fraction(1, 3)), '-(1/1)*sqrt(1/3)'),
    (sqrt_normalize(Fraction(1, 2)), '(1/1)*sqrt(1/2)'),
    (sqrt_normalize(2), '(1/1)*sqrt(2)'),
    (sqrt_normalize(Fraction(2, 3)), '(1/1)*sqrt(2/3)'),
    (ONE + sqrt_normalize(3), '1 + (1/1)*sqrt(3)'),
], ids=['zero', 'rational', 'negative-third', 'half', 'two', 'two-thirds', 'sum'])
def test_render(value, text):
    assert render(value) == text
    assert parse(text) == value


@given(positive_fractions, st.sampled_from([1, -1]))
def test_parse_inverts_render(r, sign):
    value = signed_sqrt(sign, r)
    assert parse(render(value)) == value


def test_parse_rejects_garbage():
    with pytest.raises(QuantumNumberError):
        parse('sqrt(2)')


def test_format_decimal():
    assert format_decimal(sqrt_normalize(2), 10) == '1.4142135624'
    assert format_decimal(RadicalSum.rational(Fraction(-1, 4)), 3) == '-0.250'


def test_half_angle_beta():
    # integral of sin(t) over [0, pi]
    assert half_angle_beta(0, 0) == 2
    assert half_angle_beta(2, 0) == 1
    assert half_angle_beta(2, 2) == Fraction(1, 3)
    with pytest.raises(QuantumNumberError):
        half_angle_beta(1, 0)


@given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=12))
def test_half_angle_beta_is_symmetric(a, b):
    assert half_angle_beta(2 * a, 2 * b) == half_angle_beta(2 * b, 2 * a)


def test_sqrt_normalize_pulls_out_square_factors():
    root = sqrt_normalize(Fraction(8, 3))
    assert root.terms == {6: Fraction(2, 3)}
    assert root == sqrt_normalize(6) * Fraction(2, 3)


@settings(max_examples=200)
@given(radical_sums, radical_sums, radical_sums)
def test_radical_arith_ring_laws(a, b, c):
    for op in ('add', 'mul'):
        assert radical_arith(a, b, op) == radical_arith(b, a, op)
        assert radical_arith(radical_arith(a, b, op), c, op) == radical_arith(a, radical_arith(b, c, op), op)
    left = radical_arith(a, radical_arith(b, c, 'add'), 'mul')
    right = radical_arith(radical_arith(a, b, 'mul'), radical_arith(a, c, 'mul'), 'add')
    assert left == right


def _reference_sign(value):
    with mp.workdps(80):
        total = sum(
            (mpf(q.numerator) / q.denominator * mp.sqrt(n) for n, q in value.terms.items()),
            mpf(0),
        )
        return (total > 0) - (total < 0)


def test_sign_agrees_with_high_precision_evaluation():
    checked = 0
    for q1, q2, q3, q6 in product(range(-2, 3), repeat=4):
        for q5 in (Fraction(-1, 3), 0, Fraction(1, 3)):
            value = RadicalSum({1: q1, 2: q2, 3: q3, 6: Fraction(q6, 2), 5: q5})
            assert value.sign() == _reference_sign(value), render(value)
            checked += 1
    assert checked > 1000


@given(radical_sums)
def test_sign_of_random_sums(value):
    assert value.sign() == _reference_sign(value)
    assert (-value).sign() == -value.sign()


def test_sign_of_close_cancellations():
    r2, r3 = sqrt_normalize(2), sqrt_normalize(3)
    assert (RadicalSum.rational(Fraction(577, 408)) - r2).sign() == 1
    assert (r2 + r3 - sqrt_normalize(10)).sign() == -1
    assert (RadicalSum({1: 5, 6: 2}) - (r2 + r3) * (r2 + r3)).sign() == 0


def test_sign_is_exact_beyond_decimal_precision():
    # (3 - 2 sqrt 2)^70 = x - y sqrt 2 with x, y near 10^53 and a difference near 10^-54
    tiny = ONE
    for _ in range(70):
        tiny = tiny * RadicalSum({1: 3, 2: -2})
    assert len(tiny.terms) == 2
    assert tiny.sign() == 1
    assert (-tiny).sign() == -1
    assert abs(-tiny) == tiny


def test_rational_values_hash_like_fractions():
    assert hash(RadicalSum.rational(3)) == hash(3)
    assert hash(RadicalSum.rational(Fraction(3, 2))) == hash(Fraction(3, 2))
    assert hash(ZERO) == hash(0)
    assert 3 in {RadicalSum.rational(3)}
    assert RadicalSum.rational(Fraction(1, 2)) in {Fraction(1, 2): 'half'}
