from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from angmom.basis import (
    CGKey, PassageKey, Polar4DLabel, energy_index, enumerate_cg_keys, enumerate_passage_keys,
    map_abs_indices, map_signed_indices, map_signed_printed, normalization_4d, phase_exponent_abs,
    polar2d_label, polar4d_label, radial_labels, signed_map_orbit, signed_map_step, unmap_signed,
    validate_triple,
)
from angmom.errors import QuantumNumberError
from angmom.exact import HalfInt

passage_keys = st.sampled_from(enumerate_passage_keys(4))
cg_keys = st.sampled_from(enumerate_cg_keys(4))


@pytest.mark.parametrize("triple, ok", [
    ((1, 1, 0), True),
    ((1, 1, 2), True),
    (('1/2', '1/2', 1), True),
    (('1/2', 1, '1/2'), True),
    ((1, 1, 3), False),
    (('1/2', '1/2', '1/2'), False),
], ids=['zero', 'stretched', 'spins', 'half-one', 'too-long', 'parity'])
def test_validate_triple(triple, ok):
    assert validate_triple(*triple) is ok


def test_cg_key_rejects_violations():
    with pytest.raises(QuantumNumberError) as info:
        CGKey.make(1, 1, 3, 0, 0)
    assert info.value.invariant == 'triangle'
    with pytest.raises(QuantumNumberError) as info:
        CGKey.make(1, 1, 1, '1/2', '1/2')
    assert info.value.invariant == 'whole j - m'
    with pytest.raises(QuantumNumberError):
        CGKey.make(1, 1, 0, 1, 0)


def test_passage_key_rejects_violations():
    with pytest.raises(QuantumNumberError):
        PassageKey.make('1/2', '1/2', '1/2', '1/2', 0)
    with pytest.raises(QuantumNumberError):
        PassageKey.make(1, 1, 1, 1, 3)
    assert PassageKey.make(1, 1, 1, 0, 1).n == 1


def test_2d_labels():
    label = polar2d_label('3/2', '-1/2')
    assert label.n == 1
    assert energy_index(label) == 4
    with pytest.raises(QuantumNumberError):
        polar2d_label(1, '1/2')


def test_4d_labels():
    label = polar4d_label('1/2', 1, '3/2', '1/2', -1)
    assert label == Polar4DLabel(n=0, j3=HalfInt(3), m=HalfInt(3), mp=HalfInt(1))
    assert radial_labels(1, '1/2', '3/2') == (0, 4)
    assert normalization_4d(1, 1) == Fraction(1, 24)


@given(passage_keys)
def test_signed_map_round_trips(key):
    mapped = map_signed_indices(key.j1, key.j2, key.j3, key.m1, key.m2)
    assert unmap_signed(mapped.key) == key
    assert mapped.key.j1 + mapped.key.j2 == key.j1 + key.j2
    assert mapped.key.j3 == key.j3
    assert mapped.phase_exponent == (key.j2 - key.m2).integer()


@pytest.mark.parametrize("labels, cycle", [
    (('1/2', '1/2', '1/2', '1/2', 1), 1),
    ((1, 1, 0, 0, 1), 2),
    ((1, 0, 0, 0, 0), 0),
], ids=['fixed-point', 'two-cycle', 'leaves-labels'])
def test_signed_map_orbit(labels, cycle):
    start = PassageKey.make(*labels)
    length, path = signed_map_orbit(start)
    assert length == cycle
    assert path[0] == start
    assert len(path) == max(cycle, 1)


@given(passage_keys)
def test_signed_map_cycles_have_length_one_or_two(key):
    length, _ = signed_map_orbit(key)
    assert length in (0, 1, 2)
    if length:
        assert signed_map_step(signed_map_step(key)) == key
    if length == 1:
        assert signed_map_step(key) == key


@given(cg_keys)
def test_unmap_is_a_left_inverse(key):
    labels = unmap_signed(key)
    assert map_signed_indices(labels.j1, labels.j2, labels.j3, labels.m1, labels.m2).key == key


@given(passage_keys)
def test_abs_map_matches_signed_map_for_nonnegative_m(key):
    if key.m1.twice < 0 or key.m2.twice < 0:
        with pytest.raises(QuantumNumberError):
            map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2)
        return
    absolute = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2)
    assert absolute.key == map_signed_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key


def test_phase_readings_differ_only_in_the_first_term():
    uniform = phase_exponent_abs(1, 1, 1, 1, 0, 'uniform')
    literal = phase_exponent_abs(1, 1, 1, 1, 0, 'literal')
    assert uniform == 4
    assert literal == Fraction(7, 2)
    with pytest.raises(QuantumNumberError):
        phase_exponent_abs(1, 1, 1, 1, 0, 'sideways')


def test_literal_reading_can_be_half_odd():
    values = {
        phase_exponent_abs(k.j1, k.j2, k.j3, k.m1, k.m2, 'literal').denominator
        for k in enumerate_passage_keys(2) if k.m1.twice >= 0 and k.m2.twice >= 0
    }
    assert values == {1, 2}


def test_printed_signed_map_is_raw():
    labels = map_signed_printed('1/2', '1/2', 1, '1/2', '-1/2')
    # doubled (J1, M1, J2, M2, j3): M1 exceeds J1
    assert labels == (Fraction(0), Fraction(1), Fraction(2), Fraction(0), 2)


def test_enumeration_counts():
    assert len(enumerate_cg_keys(0)) == 1
    # (0,0,0), (0,1/2,1/2) x2, (1/2,0,1/2) x2, (1/2,1/2,0) x2; j3 = 1 is outside the range
    assert len(enumerate_cg_keys(1)) == 7
    keys = enumerate_cg_keys(3)
    assert [k.doubled() for k in keys] == sorted(k.doubled() for k in keys)
    assert all(k.n >= 0 for k in enumerate_passage_keys(3))
