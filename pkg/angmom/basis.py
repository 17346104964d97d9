"""
Quantum-number bookkeeping for the 2D and 4D polar oscillator bases and the
index maps that turn oscillator labels into Clebsch-Gordan arguments.

All arithmetic is on doubled integers; every halving is checked.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from angmom.exact import HalfInt, factorial, whole
from angmom.errors import QuantumNumberError

logger = logging.getLogger(__name__)

PHI_READINGS = ('uniform', 'literal')


def _half(doubled_sum: int, what: str) -> HalfInt:
    """Halve a doubled-quantity sum, which must itself be even."""
    if doubled_sum % 2:
        raise QuantumNumberError("integral index map", f"{what} = {doubled_sum}/4")
    return HalfInt(doubled_sum // 2)


def _check_projection(j: HalfInt, m: HalfInt, name: str):
    if j.twice < 0:
        raise QuantumNumberError("j >= 0", f"{name}: j={j}")
    if abs(m.twice) > j.twice:
        raise QuantumNumberError("|m| <= j", f"{name}: j={j}, m={m}")
    if (j.twice - m.twice) % 2:
        raise QuantumNumberError("whole j - m", f"{name}: j={j}, m={m}")


def validate_triple(j1, j2, j3) -> bool:
    t1, t2, t3 = (HalfInt.of(j).twice for j in (j1, j2, j3))
    if min(t1, t2, t3) < 0:
        return False
    if (t1 + t2 + t3) % 2:
        return False
    return abs(t1 - t2) <= t3 <= t1 + t2


@dataclass(frozen=True)
class Polar2DLabel:
    j: HalfInt
    m: HalfInt

    @property
    def n(self) -> int:
        """Radial node count, j = n + |m|."""
        return whole(self.j - abs(self.m))

    @property
    def energy_index(self) -> int:
        """Energy in units of hbar*omega: 2n + 2|m| + 1."""
        return 2 * self.n + abs(self.m).twice + 1


def polar2d_label(j, m) -> Polar2DLabel:
    j, m = HalfInt.of(j), HalfInt.of(m)
    _check_projection(j, m, "2D label")
    return Polar2DLabel(j, m)


def energy_index(label: Polar2DLabel) -> int:
    return label.energy_index


@dataclass(frozen=True)
class Polar4DLabel:
    n: int
    j3: HalfInt
    m: HalfInt
    mp: HalfInt

    def __post_init__(self):
        if self.n < 0:
            raise QuantumNumberError("n >= 0", f"n={self.n}")
        _check_projection(self.j3, self.m, "4D label m")
        _check_projection(self.j3, self.mp, "4D label m'")


def polar4d_label(j1, j2, j3, m1, m2) -> Polar4DLabel:
    """4D label reached from two 2D labels: m = |m1|+|m2|, m' = |m2|-|m1|."""
    j1, j2, j3, m1, m2 = (HalfInt.of(v) for v in (j1, j2, j3, m1, m2))
    n = whole(j1 + j2 - j3)
    return Polar4DLabel(n=n, j3=j3, m=abs(m1) + abs(m2), mp=abs(m2) - abs(m1))


@dataclass(frozen=True, order=True)
class CGKey:
    """Arguments of <j1 m1; j2 m2 | j3 m1+m2>."""

    j1: HalfInt
    j2: HalfInt
    j3: HalfInt
    m1: HalfInt
    m2: HalfInt

    def __post_init__(self):
        if not validate_triple(self.j1, self.j2, self.j3):
            raise QuantumNumberError("triangle", f"({self.j1}, {self.j2}, {self.j3})")
        _check_projection(self.j1, self.m1, "j1/m1")
        _check_projection(self.j2, self.m2, "j2/m2")
        if abs(self.m3.twice) > self.j3.twice:
            raise QuantumNumberError("|m3| <= j3", f"j3={self.j3}, m3={self.m3}")

    @classmethod
    def make(cls, j1, j2, j3, m1, m2):
        return cls(*(HalfInt.of(v) for v in (j1, j2, j3, m1, m2)))

    @property
    def m3(self) -> HalfInt:
        return self.m1 + self.m2

    def doubled(self):
        return tuple(v.twice for v in (self.j1, self.j2, self.j3, self.m1, self.m2))

    def __str__(self):
        return f"<{self.j1} {self.m1}; {self.j2} {self.m2} | {self.j3} {self.m3}>"


@dataclass(frozen=True, order=True)
class PassageKey:
    """
    Oscillator labels (j1, m1), (j2, m2) of the two 2D states and the 4D
    angular momentum j3. Not a CG key: the triangle rule does not apply here.
    """

    j1: HalfInt
    m1: HalfInt
    j2: HalfInt
    m2: HalfInt
    j3: HalfInt

    def __post_init__(self):
        _check_projection(self.j1, self.m1, "oscillator 1")
        _check_projection(self.j2, self.m2, "oscillator 2")
        if self.j3.twice < 0:
            raise QuantumNumberError("j3 >= 0", str(self.j3))
        doubled_n = self.j1.twice + self.j2.twice - self.j3.twice
        if doubled_n < 0 or doubled_n % 2:
            raise QuantumNumberError("whole n = j1 + j2 - j3 >= 0", f"{self}")
        bound = max(abs(self.m1.twice + self.m2.twice), abs(self.m1.twice - self.m2.twice))
        if bound > self.j3.twice:
            raise QuantumNumberError("|m1 +- m2| <= j3", f"{self}")

    @classmethod
    def make(cls, j1, m1, j2, m2, j3):
        return cls(*(HalfInt.of(v) for v in (j1, m1, j2, m2, j3)))

    @property
    def n(self) -> int:
        return whole(self.j1 + self.j2 - self.j3)

    def doubled(self):
        return tuple(v.twice for v in (self.j1, self.m1, self.j2, self.m2, self.j3))

    def __str__(self):
        return f"(j1={self.j1}, m1={self.m1}, j2={self.j2}, m2={self.m2}, j3={self.j3})"


@dataclass(frozen=True)
class MappedKey:
    key: CGKey
    phase_exponent: int


def _map_labels(j1, j2, m1, m2):
    """Doubled (J1, M1, J2, M2) of the signed map; also used by the abs map."""
    t1, t2, s1, s2 = j1.twice, j2.twice, m1.twice, m2.twice
    return (
        _half(t1 + t2 - s1 + s2, "j1 map"),
        _half(t2 - t1 + s1 + s2, "m1 map"),
        _half(t1 + t2 + s1 - s2, "j2 map"),
        _half(t1 - t2 + s1 + s2, "m2 map"),
    )


def _build_key(labels, j3, context):
    big1, small1, big2, small2 = labels
    try:
        return CGKey(big1, big2, j3, small1, small2)
    except QuantumNumberError as e:
        raise QuantumNumberError(e.invariant, f"mapped from {context}")


def phase_exponent_abs(j1, j2, j3, am1, am2, reading: str = 'uniform') -> Fraction:
    """
    phi = j2^{|m2|} + m2^{|m|} + N with N = n1 + n2 + n. The uniform reading
    takes j2^{|m2|} as j2^{|m|}; the literal one as j2 + |m2|.
    """
    if reading not in PHI_READINGS:
        raise QuantumNumberError("phase reading", reading)
    j1, j2, j3, am1, am2 = (HalfInt.of(v) for v in (j1, j2, j3, am1, am2))
    _, _, big2, small2 = _map_labels(j1, j2, am1, am2)
    total = whole(j1 - am1) + whole(j2 - am2) + whole(j1 + j2 - j3)
    first = big2 if reading == 'uniform' else j2 + am2
    return (first + small2).value + total


def map_abs_indices(j1, j2, j3, am1, am2, reading: str = 'uniform') -> MappedKey:
    j1, j2, j3, am1, am2 = (HalfInt.of(v) for v in (j1, j2, j3, am1, am2))
    if am1.twice < 0 or am2.twice < 0:
        raise QuantumNumberError("|m| >= 0", f"am1={am1}, am2={am2}")
    _check_projection(j1, am1, "oscillator 1")
    _check_projection(j2, am2, "oscillator 2")
    key = _build_key(_map_labels(j1, j2, am1, am2), j3, f"abs map of {(j1, j2, j3, am1, am2)}")
    phi = phase_exponent_abs(j1, j2, j3, am1, am2, reading)
    if phi.denominator != 1:
        raise QuantumNumberError("integral phase exponent", f"{reading} reading gives phi={phi}")
    return MappedKey(key=key, phase_exponent=int(phi))


def map_signed_indices(j1, j2, j3, m1, m2) -> MappedKey:
    """Signed map with m1^m = (j2 - j1 + m1 + m2)/2; phase exponent j2 - m2."""
    j1, j2, j3, m1, m2 = (HalfInt.of(v) for v in (j1, j2, j3, m1, m2))
    _check_projection(j1, m1, "oscillator 1")
    _check_projection(j2, m2, "oscillator 2")
    key = _build_key(_map_labels(j1, j2, m1, m2), j3, f"signed map of {(j1, j2, j3, m1, m2)}")
    return MappedKey(key=key, phase_exponent=whole(j2 - m2))


def signed_map_step(labels: PassageKey) -> PassageKey:
    """Signed map of `labels`, read back as oscillator labels with the same j3."""
    key = map_signed_indices(labels.j1, labels.j2, labels.j3, labels.m1, labels.m2).key
    return PassageKey(key.j1, key.m1, key.j2, key.m2, labels.j3)


def signed_map_orbit(labels: PassageKey, limit: int = 16):
    """
    Iterate signed_map_step from `labels` until a label set repeats.

    Returns (cycle length, labels visited). The cycle length is 0 when an
    image stops being a valid CG key or oscillator label set before any
    repeat, and also when nothing repeats within `limit` steps.
    """
    seen = {labels: 0}
    path = [labels]
    current = labels
    for step in range(1, limit + 1):
        try:
            current = signed_map_step(current)
        except QuantumNumberError:
            return 0, tuple(path)
        if current in seen:
            return step - seen[current], tuple(path)
        seen[current] = step
        path.append(current)
    return 0, tuple(path)


def map_signed_printed(j1, j2, j3, m1, m2):
    """
    The signed map with m1^m = (j2 - j1 + m1 - m2)/2, returned as raw doubled
    labels (J1, M1, J2, M2, j3) without validation.
    """
    t1, t2, s1, s2 = (HalfInt.of(v).twice for v in (j1, j2, m1, m2))
    return (
        Fraction(t1 + t2 - s1 + s2, 2),
        Fraction(t2 - t1 + s1 - s2, 2),
        Fraction(t1 + t2 + s1 - s2, 2),
        Fraction(t1 - t2 + s1 + s2, 2),
        HalfInt.of(j3).twice,
    )


def unmap_signed(key: CGKey) -> PassageKey:
    """Oscillator labels whose signed map is `key`."""
    ts, tr = key.j1.twice, key.j2.twice
    ms, mr = key.m1.twice, key.m2.twice
    return PassageKey(
        j1=_half(ts - ms + tr + mr, "j1 unmap"),
        m1=_half(tr + mr - ts + ms, "m1 unmap"),
        j2=_half(ts + ms + tr - mr, "j2 unmap"),
        m2=_half(ts + ms - tr + mr, "m2 unmap"),
        j3=key.j3,
    )


def radial_labels(j1, j2, j3):
    """(n, alpha) = (j1 + j2 - j3, 2 j3 + 1)."""
    if not validate_triple(j1, j2, j3):
        raise QuantumNumberError("triangle", f"({j1}, {j2}, {j3})")
    j1, j2, j3 = (HalfInt.of(v) for v in (j1, j2, j3))
    return whole(j1 + j2 - j3), j3.twice + 1


def normalization_4d(n: int, j3) -> Fraction:
    """N^2 = n! / (n + 2 j3 + 1)! of the 4D radial function."""
    return Fraction(factorial(n), factorial(n + HalfInt.of(j3).twice + 1))


def enumerate_cg_keys(max_2j: int):
    """Valid CG keys with all doubled j <= max_2j, lexicographic on doubled values."""
    keys = []
    for t1 in range(max_2j + 1):
        for t2 in range(max_2j + 1):
            for t3 in range(abs(t1 - t2), min(t1 + t2, max_2j) + 1, 2):
                for s1 in range(-t1, t1 + 1, 2):
                    for s2 in range(-t2, t2 + 1, 2):
                        if abs(s1 + s2) <= t3:
                            keys.append(CGKey(HalfInt(t1), HalfInt(t2), HalfInt(t3), HalfInt(s1), HalfInt(s2)))
    return keys


def enumerate_passage_keys(max_2j: int):
    """Valid oscillator label sets with doubled j1, j2 <= max_2j."""
    keys = []
    for t1 in range(max_2j + 1):
        for s1 in range(-t1, t1 + 1, 2):
            for t2 in range(max_2j + 1):
                for s2 in range(-t2, t2 + 1, 2):
                    low = max(abs(s1 + s2), abs(s1 - s2))
                    for t3 in range(low, t1 + t2 + 1, 2):
                        keys.append(PassageKey(HalfInt(t1), HalfInt(s1), HalfInt(t2), HalfInt(s2), HalfInt(t3)))
    return keys
