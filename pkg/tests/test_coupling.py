from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy.physics.wigner import clebsch_gordan as sympy_cg, wigner_3j

from angmom.basis import CGKey, PassageKey, enumerate_cg_keys, enumerate_passage_keys, map_abs_indices
from angmom.coupling import (
    CGValue, calibration, cg_hypergeometric, cg_hypergeometric_raw, cg_laguerre_integral,
    cg_racah_oracle, cg_vilenkin, clebsch_gordan, gaunt_cg, hypergeometric_3f2,
    laguerre_basis_coefficient, passage_element, radial_overlap, radial_overlap_series,
    radial_selection_contributions, reconcile, symmetry_orbit, threej, vilenkin_key, _sector,
)
from angmom.errors import ConsistencyError, IndeterminateTermError, QuantumNumberError
from angmom.exact import HalfInt, render, sqrt_normalize
from angmom.polyn import laguerre

cg_keys = st.sampled_from(enumerate_cg_keys(5))
passage_keys = st.sampled_from(enumerate_passage_keys(4))
nonnegative_passage_keys = st.sampled_from(
    [k for k in enumerate_passage_keys(5) if k.m1.twice >= 0 and k.m2.twice >= 0]
)


def _vilenkin_cases(max_2j):
    cases = []
    for t1 in range(max_2j + 1):
        for t2 in range(max_2j + 1):
            for t3 in range(abs(t1 - t2), t1 + t2 + 1, 2):
                for k in range(min(t1, t2) + 1):
                    cases.append((HalfInt(t1), HalfInt(t2), HalfInt(t3), k))
    return cases


@given(key=cg_keys)
@settings(max_examples=200)
def test_oracle_matches_sympy(key, as_sympy, same_value):
    expected = sympy_cg(*(as_sympy(v) for v in (key.j1, key.j2, key.j3, key.m1, key.m2, key.m3)))
    assert same_value(cg_racah_oracle(key).value, expected)


@given(key=cg_keys)
def test_threej_matches_sympy(key, as_sympy, same_value):
    args = (key.j1, key.j2, key.j3, key.m1, key.m2, -key.m3)
    assert same_value(threej(*args).value, wigner_3j(*(as_sympy(v) for v in args)))


@pytest.mark.parametrize("args, text", [
    ((1, 1, 0, 0, 0, 0), '-(1/1)*sqrt(1/3)'),
    (('1/2', '1/2', 1, '1/2', '1/2', -1), '-(1/1)*sqrt(1/3)'),
    ((1, 1, 1, 0, 0, 0), '0'),
], ids=['singlet', 'stretched-spins', 'odd-sum'])
def test_threej_values(args, text):
    assert render(threej(*args).value) == text


def test_stretched_cg_is_one():
    assert cg_racah_oracle(CGKey.make(2, '3/2', '7/2', 2, '3/2')).value == 1
    assert clebsch_gordan('1/2', '1/2', '1/2', '-1/2', 1, 0).value == sqrt_normalize(Fraction(1, 2))


@pytest.mark.parametrize("args", [
    (1, 0, 1, 0, 1, 1),
    (1, 0, 1, 0, 3, 0),
    (1, '1/2', 1, 0, 1, '1/2'),
], ids=['m-sum', 'triangle', 'parity'])
def test_clebsch_gordan_is_zero_outside_selection_rules(args):
    assert clebsch_gordan(*args).sign == 0


def test_cg_value_invariants():
    with pytest.raises(ConsistencyError):
        CGValue(sqrt_normalize(2), 0)
    value = CGValue.from_value(-sqrt_normalize(3), 5)
    assert value.sign == -1
    assert value.squared() == 3
    assert value.times_sign(-1).value == sqrt_normalize(3)
    assert value.same_magnitude(CGValue.from_value(sqrt_normalize(3)))


def test_hypergeometric_sum():
    # Chu-Vandermonde: 2F1(-2, 1; 3; 1) = (2)_2 / (3)_2
    assert hypergeometric_3f2((-2, 1, 5), (3, 5)) == Fraction(1, 2)
    with pytest.raises(IndeterminateTermError) as info:
        hypergeometric_3f2((-2, 1, 1), (-1, 1))
    assert info.value.k == 2
    with pytest.raises(ConsistencyError):
        hypergeometric_3f2((Fraction(1, 2), 1, 1), (2, 2))


@given(passage_keys)
def test_radial_overlap_series_matches_the_polynomials(key):
    sector = _sector(key)
    assert radial_overlap_series(sector) == radial_overlap(sector)


@given(nonnegative_passage_keys)
def test_hypergeometric_matches_oracle(key):
    mapped = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key
    assert cg_hypergeometric(key).value == cg_racah_oracle(mapped).value


def test_hypergeometric_sign_holds_on_every_key():
    wrong = []
    for key in enumerate_passage_keys(4):
        if key.m1.twice < 0 or key.m2.twice < 0:
            continue
        mapped = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key
        if cg_hypergeometric(key).value != cg_racah_oracle(mapped).value:
            wrong.append(str(key))
    assert wrong == []


@pytest.mark.parametrize("labels", [(0, 0, 1, 0, 0), (1, 0, 0, 0, 1)], ids=['j1-zero', 'j2-zero'])
def test_hypergeometric_raw_sign_needs_no_calibration(labels):
    key = PassageKey.make(*labels)
    mapped = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key
    assert cg_hypergeometric_raw(key).value == sqrt_normalize(Fraction(1, 2))
    assert cg_racah_oracle(mapped).value == sqrt_normalize(Fraction(1, 2))


def test_hypergeometric_known_value():
    value = cg_hypergeometric((1, 1, 1, 0, 1))
    assert value.magnitude == Fraction(1, 2)
    assert value.phase_exponent_raw == 0
    assert cg_hypergeometric_raw(PassageKey.make(1, 1, 1, 0, 1)).magnitude == value.magnitude


def test_calibration_points_are_exact():
    for pipeline in ('hypergeometric', 'gaunt', 'laguerre_integral'):
        assert calibration(pipeline).offset in (1, -1)
    assert calibration('hypergeometric').offset == 1
    assert calibration('laguerre_integral').offset == 1
    key = PassageKey.make('1/2', '1/2', '1/2', '1/2', 1)
    mapped = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key
    assert cg_hypergeometric(key).value == cg_racah_oracle(mapped).value
    assert gaunt_cg('1/2', '1/2', 1, '1/2', '1/2').value == 1
    with pytest.raises(QuantumNumberError):
        calibration('abacus')


@given(st.sampled_from(enumerate_cg_keys(4)))
def test_gaunt_matches_oracle(key):
    assert gaunt_cg(key.j1, key.j2, key.j3, key.m1, key.m2).value == cg_racah_oracle(key).value


def test_gaunt_printed_convention_skips_calibration():
    raw = gaunt_cg('1/2', '1/2', 1, '1/2', '1/2', convention='printed')
    assert raw.magnitude == 1
    with pytest.raises(QuantumNumberError):
        gaunt_cg('1/2', '1/2', 1, '1/2', '1/2', convention='sideways')


@pytest.mark.parametrize("case", _vilenkin_cases(4), ids=str)
def test_laguerre_integral_matches_oracle(case):
    l1, l2, l3, k = case
    got = cg_laguerre_integral(l1, l2, l3, k)
    assert got.value == cg_racah_oracle(vilenkin_key(l1, l2, l3, k)).value


def test_laguerre_integral_exchanges_larger_l1():
    swapped = cg_laguerre_integral(1, '1/2', '1/2', 0)
    assert swapped.value == cg_racah_oracle(vilenkin_key(1, '1/2', '1/2', 0)).value
    assert swapped.value == cg_laguerre_integral('1/2', 1, '1/2', 0).value
    assert cg_laguerre_integral(2, 1, 1, 1).value == cg_racah_oracle(vilenkin_key(2, 1, 1, 1)).value
    with pytest.raises(QuantumNumberError):
        cg_laguerre_integral('1/2', 1, '1/2', 3)
    with pytest.raises(QuantumNumberError):
        cg_laguerre_integral(2, '1/2', '1/2', 0)


def test_vilenkin_needs_whole_l3():
    with pytest.raises(QuantumNumberError) as info:
        cg_vilenkin('1/2', 1, '3/2', 0)
    assert info.value.invariant == 'whole l3'
    assert cg_vilenkin(0, 1, 1, 0).phase_exponent_raw == 2


def test_laguerre_basis_coefficient():
    poly = laguerre(2, 1) * 3 + laguerre(0, 1)
    assert laguerre_basis_coefficient(poly, 2, 1) == 3
    assert laguerre_basis_coefficient(poly, 1, 1) == 0
    assert laguerre_basis_coefficient(poly, 0, 1) == 1


@given(st.sampled_from(enumerate_passage_keys(4)))
def test_radial_selection_keeps_only_the_leading_term(key):
    assert set(radial_selection_contributions(key.j1, key.m1, key.j2, key.m2, key.j3)) <= {(0, 0)}


@given(passage_keys)
def test_passage_routes_agree_in_magnitude(key):
    signed = passage_element(key.j1, key.m1, key.j2, key.m2, key.j3, route='signed')
    absolute = passage_element(key.j1, key.m1, key.j2, key.m2, key.j3, route='abs')
    assert signed.magnitude == absolute.magnitude
    assert signed.phase_exponent_raw == (key.j2 - key.m2).integer()


def test_passage_rejects_unknown_route():
    with pytest.raises(QuantumNumberError):
        passage_element(0, 0, 0, 0, 0, route='diagonal')


@given(cg_keys)
def test_symmetry_orbit_preserves_3j_magnitude(key):
    orbit = symmetry_orbit(key)
    assert (key, 0) in orbit
    assert 1 <= len(orbit) <= 4
    original = threej(key.j1, key.j2, key.j3, key.m1, key.m2, -key.m3)
    for image, _ in orbit:
        other = threej(image.j1, image.j2, image.j3, image.m1, image.m2, -image.m3)
        assert other.magnitude == original.magnitude


def test_reconcile_rows_are_consistent():
    rows = {row.item: row for row in reconcile(2)}
    assert set(rows) >= {
        'vilenkin-printed', 'laguerre-integral-printed', 'phi-uniform', 'phi-literal',
        'hypergeometric-printed', 'signed-map-printed', 'gaunt-printed-prefactor', 'symmetry-sign',
    }
    for row in rows.values():
        assert row.cases == row.agree + row.disagree
        assert len(row.examples) <= 5
    assert rows['phi-literal'].disagree > 0
