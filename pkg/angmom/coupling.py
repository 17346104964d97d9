"""
Clebsch-Gordan coefficients and oscillator passage elements.

The Racah single sum is the oracle. The other pipelines rebuild the same
numbers from oscillator-basis integrals: a terminating 3F2 from the radial
overlap, the half-angle Gaunt integral, a closed mu-sum and the Laguerre
integral representation. Each pipeline reports the exponent of the phase it
applied; a one-point calibration against the oracle fixes the remaining
sign offset.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from angmom.basis import (
    CGKey, PassageKey, enumerate_cg_keys, enumerate_passage_keys, map_abs_indices,
    map_signed_indices, map_signed_printed, phase_exponent_abs, unmap_signed,
    validate_triple,
)
from angmom.exact import (
    HalfInt, RadicalSum, ZERO, binomial, factorial, half_angle_beta, pochhammer,
    render, sqrt_normalize, whole,
)
from angmom.errors import (
    ConsistencyError, IndeterminateTermError, QuantumNumberError,
)
from angmom.polyn import (
    RationalPoly, jacobi, laguerre, laguerre_product_expansion,
    laguerre_weighted_overlap, wigner_small_d,
)

logger = logging.getLogger(__name__)

CONVENTIONS = ('calibrated', 'printed')


@dataclass(frozen=True)
class CGValue:
    magnitude: RadicalSum
    sign: int
    phase_exponent_raw: int = 0

    def __post_init__(self):
        if self.magnitude.is_zero() != (self.sign == 0):
            raise ConsistencyError(f"magnitude {self.magnitude} with sign {self.sign}")

    @classmethod
    def from_value(cls, value: RadicalSum, phase_exponent_raw: int = 0):
        sign = value.sign()
        return cls(magnitude=abs(value), sign=sign, phase_exponent_raw=phase_exponent_raw)

    @classmethod
    def zero(cls, phase_exponent_raw: int = 0):
        return cls(magnitude=ZERO, sign=0, phase_exponent_raw=phase_exponent_raw)

    @property
    def value(self) -> RadicalSum:
        return -self.magnitude if self.sign < 0 else self.magnitude

    def squared(self) -> Fraction:
        return self.magnitude.squared_rational()

    def times_sign(self, factor: int):
        return CGValue(self.magnitude, self.sign * factor, self.phase_exponent_raw)

    def same_magnitude(self, other) -> bool:
        return self.magnitude == other.magnitude

    def __str__(self):
        return render(self.value)


def _parity(exponent) -> int:
    return -1 if int(exponent) % 2 else 1


def overlap_sign(overlap, exponent: int) -> int:
    """Condon-Shortley sign of a passage element: sign of the overlap times (-1)^exponent."""
    if overlap == 0:
        return 0
    return (1 if overlap > 0 else -1) * _parity(exponent)


def _halves(*values):
    return tuple(HalfInt.of(v) for v in values)


# --- oracle -----------------------------------------------------------------

@lru_cache(maxsize=None)
def _racah_sum(t1, t2, t3, s1, s2):
    """Condon-Shortley CG for doubled arguments, as (sum, radicand)."""
    j1, j2, j3, m1, m2 = (HalfInt(t) for t in (t1, t2, t3, s1, s2))
    m3 = m1 + m2
    radicand = Fraction(
        (t3 + 1)
        * factorial(whole(j1 + j2 - j3))
        * factorial(whole(j1 - j2 + j3))
        * factorial(whole(-j1 + j2 + j3)),
        factorial(whole(j1 + j2 + j3) + 1),
    )
    radicand *= (
        factorial(whole(j1 + m1)) * factorial(whole(j1 - m1))
        * factorial(whole(j2 + m2)) * factorial(whole(j2 - m2))
        * factorial(whole(j3 + m3)) * factorial(whole(j3 - m3))
    )
    args = (
        whole(j1 + j2 - j3),
        whole(j1 - m1),
        whole(j2 + m2),
    )
    shifts = (whole(j3 - j2 + m1), whole(j3 - j1 - m2))
    k_min = max(0, -shifts[0], -shifts[1])
    k_max = min(args)
    total = Fraction(0)
    for k in range(k_min, k_max + 1):
        denominator = (
            factorial(k) * factorial(args[0] - k) * factorial(args[1] - k)
            * factorial(args[2] - k) * factorial(shifts[0] + k) * factorial(shifts[1] + k)
        )
        total += Fraction((-1) ** k, denominator)
    return total, radicand


def cg_racah_oracle(key: CGKey) -> CGValue:
    total, radicand = _racah_sum(*key.doubled())
    if total == 0:
        return CGValue.zero()
    return CGValue.from_value(sqrt_normalize(radicand) * total)


def clebsch_gordan(j1, m1, j2, m2, j3, m3) -> CGValue:
    """<j1 m1; j2 m2 | j3 m3>, zero outside the selection rules."""
    j1, m1, j2, m2, j3, m3 = _halves(j1, m1, j2, m2, j3, m3)
    if m1 + m2 != m3:
        return CGValue.zero()
    try:
        key = CGKey(j1, j2, j3, m1, m2)
    except QuantumNumberError:
        return CGValue.zero()
    return cg_racah_oracle(key)


def threej(j1, j2, j3, m1, m2, m3) -> CGValue:
    j1, j2, j3, m1, m2, m3 = _halves(j1, j2, j3, m1, m2, m3)
    if (m1 + m2 + m3).twice != 0:
        return CGValue.zero()
    cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)
    if cg.sign == 0:
        return cg
    exponent = whole(j1 - j2 - m3)
    value = cg.value * sqrt_normalize(Fraction(1, j3.twice + 1)) * _parity(exponent)
    return CGValue.from_value(value, exponent)


# --- terminating hypergeometric series ---------------------------------------

def _nonpositive_integer(value: Fraction):
    return value.denominator == 1 and value <= 0


def hypergeometric_3f2(upper, lower) -> Fraction:
    """
    Terminating 3F2(upper; lower; 1) summed exactly. Raises
    IndeterminateTermError if a lower Pochhammer reaches zero while the
    series is still running.
    """
    upper = [Fraction(u) for u in upper]
    lower = [Fraction(b) for b in lower]
    stops = [int(-u) for u in upper if _nonpositive_integer(u)]
    if not stops:
        raise ConsistencyError(f"3F2{tuple(upper)} does not terminate")
    last = min(stops)
    total = Fraction(0)
    for i in range(last + 1):
        for b in lower:
            if _nonpositive_integer(b) and i > -b:
                raise IndeterminateTermError(i, f"lower parameter {b}")
        numerator = Fraction(1)
        for u in upper:
            numerator *= pochhammer(u, i)
        denominator = Fraction(factorial(i))
        for b in lower:
            denominator *= pochhammer(b, i)
        total += numerator / denominator
    return total


# --- passage-sector pipelines -------------------------------------------------

@dataclass(frozen=True)
class _Sector:
    """Integer bookkeeping of a passage key in the |m| sector."""

    a: HalfInt
    b: HalfInt
    j3: HalfInt
    n: int
    n1: int
    n2: int
    d: int

    @property
    def A(self):
        return self.a.twice

    @property
    def B(self):
        return self.b.twice

    @property
    def s(self):
        return whole(self.j3 + self.a - self.b)

    @property
    def c(self):
        return whole(self.j3 - self.a + self.b) + 1


def _sector(key: PassageKey) -> _Sector:
    a, b = abs(key.m1), abs(key.m2)
    return _Sector(
        a=a, b=b, j3=key.j3,
        n=key.n,
        n1=whole(key.j1 - a),
        n2=whole(key.j2 - b),
        d=whole(key.j3 - a - b),
    )


def passage_normalization_squared(sector: _Sector) -> Fraction:
    """Square of the factor turning the radial overlap into the passage element."""
    j3, a, b = sector.j3, sector.a, sector.b
    inner = Fraction(
        factorial(whole(j3 + a - b)) * factorial(whole(j3 - a + b)),
        (j3.twice + 1) * factorial(whole(j3 + a + b)) * factorial(sector.d),
    )
    return Fraction(
        factorial(sector.n) * binomial(sector.d + sector.B, sector.d) ** 2
        * factorial(sector.B) ** 2 * factorial(sector.n1) * factorial(sector.n2),
        factorial(sector.n + j3.twice + 1) * factorial(sector.n1 + sector.A) * factorial(sector.n2 + sector.B),
    ) / inner


def radial_overlap(sector: _Sector) -> Fraction:
    """Integral of x^(A+d) e^-x L_n^(2j3+1) L_n1^A, straight from the polynomials."""
    return laguerre_weighted_overlap(sector.n, sector.j3.twice + 1, sector.n1, sector.A, sector.A + sector.d)


def radial_overlap_series(sector: _Sector) -> Fraction:
    """The same overlap as t0 * 3F2(-n1, s+1, 1-c; A+1, 1-c-n; 1)."""
    n, n1, A, s, c = sector.n, sector.n1, sector.A, sector.s, sector.c
    t0 = Fraction(binomial(n1 + A, n1) * factorial(s)) * pochhammer(c, n) / factorial(n)
    return t0 * hypergeometric_3f2((-n1, s + 1, 1 - c), (A + 1, 1 - c - n))


def _passage(key) -> PassageKey:
    if isinstance(key, PassageKey):
        return key
    return PassageKey.make(*key)


def cg_hypergeometric_raw(key) -> CGValue:
    key = _passage(key)
    sector = _sector(key)
    overlap = radial_overlap_series(sector)
    if overlap == 0:
        return CGValue.zero(sector.n1)
    magnitude = sqrt_normalize(passage_normalization_squared(sector) * overlap * overlap)
    return CGValue(magnitude, overlap_sign(overlap, sector.n1), sector.n1)


def cg_hypergeometric(key, convention: str = 'calibrated') -> CGValue:
    """
    Passage element in the |m| sector from the terminating 3F2; its
    magnitude equals the oracle on the absolute-value map of the key.
    """
    raw = cg_hypergeometric_raw(key)
    return _calibrated('hypergeometric', raw, convention)


def cg_hypergeometric_printed(key) -> CGValue:
    """The closed form with the printed 3F2 parameters and prefactor."""
    key = _passage(key)
    j1, j2, j3 = key.j1, key.j2, key.j3
    a, b = abs(key.m1), abs(key.m2)
    n = key.n
    front = factorial(whole(j1 + j2 - a - b)) * factorial(whole(j1 + j2 - b + a))
    radicand = Fraction(
        (j3.twice + 1) * factorial(whole(j3 + a + b)) * factorial(whole(j3 + a - b)),
        factorial(n) * factorial(whole(j1 + j2 + j3) + 1) * factorial(whole(j3 - a - b))
        * factorial(whole(j3 - a + b))
        * factorial(whole(j1 - a)) * factorial(whole(j1 + a))
        * factorial(whole(j2 - b)) * factorial(whole(j2 + b)),
    )
    series = hypergeometric_3f2(
        (-n, -(j1 + j2 + j3).value - 1, (-j2 + b).value),
        ((-j1 - j2 + a + b).value, (-j1 - j2 - a + b).value),
    )
    value = sqrt_normalize(radicand) * (front * series)
    return CGValue.from_value(value, n)


def gaunt_integral(a, b, c, alpha, beta) -> RadicalSum:
    """
    Integral over [0, pi] of cos^p0(t/2) sin^q0(t/2) d^c_{gamma, b-a}(t) sin t,
    p0 = a+b+alpha-beta, q0 = a+b-alpha+beta, gamma = -alpha-beta.
    """
    a, b, c, alpha, beta = _halves(a, b, c, alpha, beta)
    gamma = -alpha - beta
    p0 = whole(a + b + alpha - beta)
    q0 = whole(a + b - alpha + beta)
    small_d = wigner_small_d(c, gamma, b - a)
    cos_power = p0 + small_d.cos_half_power
    sin_power = q0 + small_d.sin_half_power
    if cos_power % 2 or sin_power % 2:
        raise ConsistencyError(f"odd half-angle exponents {cos_power}, {sin_power} in Gaunt integrand")
    total = Fraction(0)
    # cos(theta) = C - S with C = cos^2(theta/2), S = sin^2(theta/2)
    for u, coefficient in enumerate(small_d.jacobi_part.coeffs):
        if coefficient == 0:
            continue
        for v in range(u + 1):
            total += coefficient * binomial(u, v) * (-1) ** v * half_angle_beta(
                cos_power + 2 * (u - v), sin_power + 2 * v,
            )
    return small_d.prefactor * total


def _gaunt_radicand(a, b, c, alpha, beta) -> Fraction:
    delta = whole(a + b + c)
    return Fraction(
        factorial(delta + 1) * factorial(delta - c.twice),
        factorial(whole(a + alpha)) * factorial(whole(a - alpha))
        * factorial(whole(b + beta)) * factorial(whole(b - beta)),
    )


def gaunt_cg_raw(a, b, c, alpha, beta) -> CGValue:
    a, b, c, alpha, beta = _halves(a, b, c, alpha, beta)
    if not validate_triple(a, b, c):
        raise QuantumNumberError("triangle", f"({a}, {b}, {c})")
    CGKey(a, b, c, alpha, beta)
    exponent = whole(a - alpha)
    value = (
        gaunt_integral(a, b, c, alpha, beta)
        * sqrt_normalize(_gaunt_radicand(a, b, c, alpha, beta) * (c.twice + 1) / 4)
        * _parity(exponent)
    )
    if value.is_zero():
        return CGValue.zero(exponent)
    return CGValue.from_value(value, exponent)


def gaunt_cg(a, b, c, alpha, beta, convention: str = 'calibrated') -> CGValue:
    """<a alpha; b beta | c, alpha+beta> from the half-angle integral of three small-d's."""
    return _calibrated('gaunt', gaunt_cg_raw(a, b, c, alpha, beta), convention)


def gaunt_cg_printed(a, b, c, alpha, beta) -> CGValue:
    """The printed prefactor (-1)^(b+beta) sqrt((D+1)!(D-2c)!/...) times the integral."""
    a, b, c, alpha, beta = _halves(a, b, c, alpha, beta)
    exponent = whole(b + beta)
    value = gaunt_integral(a, b, c, alpha, beta) * sqrt_normalize(
        _gaunt_radicand(a, b, c, alpha, beta)
    ) * _parity(exponent)
    if value.is_zero():
        return CGValue.zero(exponent)
    return CGValue.from_value(value, exponent)


def vilenkin_key(l1, l2, l3, k) -> CGKey:
    """<l1, k-l1; l2, l2-k | l3, l2-l1>."""
    l1, l2, l3 = _halves(l1, l2, l3)
    return CGKey(l1, l2, l3, HalfInt(2 * k) - l1, l2 - HalfInt(2 * k))


def _check_vilenkin_range(l1, l2, l3, k):
    if not validate_triple(l1, l2, l3):
        raise QuantumNumberError("triangle", f"({l1}, {l2}, {l3})")
    if not 0 <= k <= min(l1.twice, l2.twice):
        raise QuantumNumberError("0 <= k <= min(2 l1, 2 l2)", f"k={k}")


def cg_vilenkin(l1, l2, l3, k: int) -> CGValue:
    """
    The closed mu-sum as printed, with the phase exponent 2 l2. The Gamma
    ratio is exact only for whole l3.
    """
    l1, l2, l3 = _halves(l1, l2, l3)
    _check_vilenkin_range(l1, l2, l3, k)
    if not l3.is_integer:
        raise QuantumNumberError("whole l3", f"l3={l3} leaves a factor of sqrt(pi)")
    top = whole(l1 + l2 - l3)
    total = Fraction(0)
    for mu in range(0, min(top, k) + 1):
        total += Fraction(
            (-1) ** mu * factorial(l2.twice - mu),
            factorial(mu) * factorial(top - mu) * factorial(k - mu),
        ) / pochhammer((l1 + l2).value - mu + 1, l3.integer() + 1)
    exponent = l2.twice
    value = RadicalSum.rational(total * _parity(exponent))
    if value.is_zero():
        return CGValue.zero(exponent)
    return CGValue.from_value(value, exponent)


def _laguerre_integral_parts(l1, l2, l3, k):
    """(overlap, squared norm of x^(l3) L_N^(2l3+1)) with N = l1 + l2 - l3."""
    top = whole(l1 + l2 - l3)
    power = whole(l2 - l1 + l3)
    overlap = laguerre_weighted_overlap(l1.twice - k, (l2 - l1).twice, top, l3.twice + 1, power)
    norm_squared = laguerre_weighted_overlap(top, l3.twice + 1, top, l3.twice + 1, l3.twice)
    return overlap, norm_squared


def cg_laguerre_integral_raw(l1, l2, l3, k: int) -> CGValue:
    l1, l2, l3 = _halves(l1, l2, l3)
    _check_vilenkin_range(l1, l2, l3, k)
    if l1 > l2:
        # <j1 m1; j2 m2|J M> = <j2 -m2; j1 -m1|J -M> carries the vilenkin key of
        # (l1, l2, l3, k) onto that of (l2, l1, l3, k) with no phase
        return cg_laguerre_integral_raw(l2, l1, l3, k)
    overlap, norm_squared = _laguerre_integral_parts(l1, l2, l3, k)
    exponent = l1.twice - k
    if overlap == 0:
        return CGValue.zero(exponent)
    squared = overlap * overlap * Fraction(factorial(l1.twice - k), factorial(l2.twice - k)) / norm_squared
    return CGValue(sqrt_normalize(squared), overlap_sign(overlap, exponent), exponent)


def cg_laguerre_integral(l1, l2, l3, k: int, convention: str = 'calibrated') -> CGValue:
    """
    <l1, k-l1; l2, l2-k | l3, l2-l1> from the weighted Laguerre overlap,
    divided by the norm of the radial factor. The overlap needs l1 <= l2;
    larger l1 goes through the exchange-and-reflect symmetry.
    """
    return _calibrated('laguerre_integral', cg_laguerre_integral_raw(l1, l2, l3, k), convention)


def cg_laguerre_integral_printed(l1, l2, l3, k: int) -> CGValue:
    """sqrt((2l2-k)!/(2l1-k)!) times the overlap, without the norm."""
    l1, l2, l3 = _halves(l1, l2, l3)
    _check_vilenkin_range(l1, l2, l3, k)
    overlap, _ = _laguerre_integral_parts(l1, l2, l3, k)
    value = sqrt_normalize(Fraction(factorial(l2.twice - k), factorial(l1.twice - k))) * overlap
    if value.is_zero():
        return CGValue.zero(k)
    return CGValue.from_value(value, k)


def laguerre_basis_coefficient(poly: RationalPoly, k: int, alpha: int) -> Fraction:
    """Coefficient of L_k^alpha when `poly` is expanded in the Laguerre basis."""
    weighted = poly * laguerre(k, alpha)
    moment = sum((c * factorial(alpha + i) for i, c in enumerate(weighted.coeffs)), Fraction(0))
    return moment * factorial(k) / factorial(alpha + k)


def radial_selection_contributions(j1, m1, j2, m2, j3):
    """
    (i, j) terms of the Laguerre product expansion whose radial and
    angular integrals against the 4D state are both nonzero.
    """
    key = PassageKey.make(j1, m1, j2, m2, j3)
    sector = _sector(key)
    alpha = sector.j3.twice + 1
    angular_jacobi = jacobi(sector.d, sector.B, sector.A).compose_linear(2, -1)
    expansion = laguerre_product_expansion(sector.n1, sector.A, sector.n2, sector.B)
    survivors = []
    for (i, j), coefficient in sorted(expansion.items()):
        if coefficient == 0:
            continue
        r = sector.n - i - j
        radial = laguerre_weighted_overlap(sector.n, alpha, 0, 0, alpha + r)
        # integral over c in [0, 1] of c^(A+n1-i) (1-c)^(B+n2-j) P(2c-1)
        p, q = sector.A + sector.n1 - i, sector.B + sector.n2 - j
        angular = sum(
            (
                cpoly * Fraction(factorial(p + e) * factorial(q), factorial(p + e + q + 1))
                for e, cpoly in enumerate(angular_jacobi.coeffs)
            ),
            Fraction(0),
        )
        if radial * angular != 0:
            survivors.append((i, j))
    logger.debug(f"Radial selection for {key}: {survivors}")
    return survivors


def passage_element(j1, m1, j2, m2, j3, route: str = 'abs', reading: str = 'uniform') -> CGValue:
    """
    <Phi_{j1 m1} Phi_{j2 m2} | Psi_{n j3}> through the absolute-value map
    (phase (-1)^phi) or the signed map ((-1)^(j2-m2) sqrt(2j3+1) times a 3j).
    """
    key = PassageKey.make(j1, m1, j2, m2, j3)
    if route == 'abs':
        mapped = map_abs_indices(key.j1, key.j2, key.j3, abs(key.m1), abs(key.m2), reading)
        cg = cg_racah_oracle(mapped.key)
        return CGValue(cg.magnitude, cg.sign * _parity(mapped.phase_exponent), mapped.phase_exponent)
    if route == 'signed':
        mapped = map_signed_indices(key.j1, key.j2, key.j3, key.m1, key.m2)
        k = mapped.key
        symbol = threej(k.j1, k.j2, k.j3, k.m1, k.m2, -k.m3)
        value = symbol.value * sqrt_normalize(k.j3.twice + 1) * _parity(mapped.phase_exponent)
        if value.is_zero():
            return CGValue.zero(mapped.phase_exponent)
        return CGValue.from_value(value, mapped.phase_exponent)
    raise QuantumNumberError("route in {abs, signed}", route)


def symmetry_orbit(key: CGKey):
    """
    Images of `key` under sign flips of the oscillator m's behind it, each
    with the CG phase exponent relating it to `key` (the 3j values coincide).
    """
    labels = unmap_signed(key)
    base = whole(key.j1 - key.j2 + key.m3)
    orbit = set()
    for s1 in (1, -1):
        for s2 in (1, -1):
            image = map_signed_indices(
                labels.j1, labels.j2, labels.j3,
                HalfInt(s1 * labels.m1.twice), HalfInt(s2 * labels.m2.twice),
            ).key
            orbit.add((image, whole(image.j1 - image.j2 + image.m3) - base))
    return frozenset(orbit)


# --- calibration --------------------------------------------------------------

@dataclass(frozen=True)
class Calibration:
    pipeline: str
    reference: str
    offset: int


def _reference_pair(pipeline):
    if pipeline == 'hypergeometric':
        key = PassageKey.make('1/2', '1/2', '1/2', '1/2', 1)
        mapped = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key
        return str(key), cg_hypergeometric_raw(key), cg_racah_oracle(mapped)
    if pipeline == 'gaunt':
        args = ('1/2', '1/2', 1, '1/2', '1/2')
        return str(args), gaunt_cg_raw(*args), clebsch_gordan('1/2', '1/2', '1/2', '1/2', 1, 1)
    if pipeline == 'laguerre_integral':
        key = vilenkin_key('1/2', '1/2', 1, 1)
        return str(key), cg_laguerre_integral_raw('1/2', '1/2', 1, 1), cg_racah_oracle(key)
    raise QuantumNumberError("known pipeline", pipeline)


@lru_cache(maxsize=None)
def calibration(pipeline: str) -> Calibration:
    reference, raw, oracle = _reference_pair(pipeline)
    if raw.magnitude != oracle.magnitude or raw.sign == 0:
        raise ConsistencyError(
            f"{pipeline} calibration at {reference}: raw {raw} against oracle {oracle}"
        )
    offset = raw.sign * oracle.sign
    logger.info(f"Calibrated pipeline {pipeline} at {reference}: sign offset {offset:+d}")
    return Calibration(pipeline=pipeline, reference=reference, offset=offset)


def _calibrated(pipeline, raw: CGValue, convention: str) -> CGValue:
    if convention not in CONVENTIONS:
        raise QuantumNumberError("phase convention", convention)
    if convention == 'printed' or raw.sign == 0:
        return raw
    return raw.times_sign(calibration(pipeline).offset)


# --- reconciliation -------------------------------------------------------------

@dataclass
class ReconcileRow:
    item: str
    cases: int = 0
    agree: int = 0
    disagree: int = 0
    note: str = ''
    examples: list = field(default_factory=list)

    def record(self, ok: bool, example: str = ''):
        self.cases += 1
        if ok:
            self.agree += 1
        else:
            self.disagree += 1
            if example and len(self.examples) < 5:
                self.examples.append(example)


def _vilenkin_arguments(max_2j):
    for t1 in range(max_2j + 1):
        for t2 in range(t1, max_2j + 1):
            for t3 in range(abs(t1 - t2), t1 + t2 + 1, 2):
                for k in range(0, min(t1, t2) + 1):
                    l1, l2, l3 = HalfInt(t1), HalfInt(t2), HalfInt(t3)
                    try:
                        key = vilenkin_key(l1, l2, l3, k)
                    except QuantumNumberError:
                        continue
                    yield l1, l2, l3, k, key


def reconcile(max_2j: int = 4):
    """Compare the printed variants with the oracle; returns ReconcileRow items."""
    rows = []

    vilenkin = ReconcileRow('vilenkin-printed', note='mu-sum as printed, whole l3 only')
    laguerre_printed = ReconcileRow('laguerre-integral-printed', note='printed prefactor, no norm')
    for l1, l2, l3, k, key in _vilenkin_arguments(max_2j):
        oracle = cg_racah_oracle(key)
        laguerre_printed.record(
            cg_laguerre_integral_printed(l1, l2, l3, k).magnitude == oracle.magnitude, str(key),
        )
        if l3.is_integer:
            vilenkin.record(cg_vilenkin(l1, l2, l3, k).magnitude == oracle.magnitude, str(key))
    rows.extend([vilenkin, laguerre_printed])

    readings = {reading: ReconcileRow(f'phi-{reading}', note='sign of abs route against signed route')
                for reading in ('uniform', 'literal')}
    hypergeometric = ReconcileRow('hypergeometric-printed', note='printed 3F2 magnitude against oracle')
    signed_map = ReconcileRow('signed-map-printed', note='printed m1 map yields a valid CG key')
    flagged = []
    for key in enumerate_passage_keys(max_2j):
        printed = map_signed_printed(key.j1, key.j2, key.j3, key.m1, key.m2)
        signed_map.record(_printed_labels_valid(printed), str(key))
        if key.m1.twice < 0 or key.m2.twice < 0:
            continue
        signed = passage_element(key.j1, key.m1, key.j2, key.m2, key.j3, route='signed')
        for reading, row in readings.items():
            phi = phase_exponent_abs(key.j1, key.j2, key.j3, key.m1, key.m2, reading)
            if phi.denominator != 1:
                row.record(False, f"{key} phi={phi}")
                continue
            value = passage_element(key.j1, key.m1, key.j2, key.m2, key.j3, route='abs', reading=reading)
            row.record(value.sign == signed.sign, str(key))
        mapped = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key
        try:
            printed_value = cg_hypergeometric_printed(key)
        except IndeterminateTermError as e:
            flagged.append(str(key))
            hypergeometric.record(False, f"{key} indeterminate at k={e.k}")
            continue
        hypergeometric.record(printed_value.magnitude == cg_racah_oracle(mapped).magnitude, str(key))
    if flagged:
        logger.warning(f"Printed 3F2 indeterminate on {len(flagged)} keys")
    hypergeometric.note += f'; {len(flagged)} indeterminate'
    rows.extend([readings['uniform'], readings['literal'], hypergeometric, signed_map])

    gaunt = ReconcileRow('gaunt-printed-prefactor', note='printed prefactor against oracle, magnitude')
    symmetry = ReconcileRow('symmetry-sign', note='3j sign equal across the sign-flip orbit')
    for key in enumerate_cg_keys(max_2j):
        oracle = cg_racah_oracle(key)
        printed = gaunt_cg_printed(key.j1, key.j2, key.j3, key.m1, key.m2)
        gaunt.record(printed.magnitude == oracle.magnitude, str(key))
        original = threej(key.j1, key.j2, key.j3, key.m1, key.m2, -key.m3)
        for image, _ in symmetry_orbit(key):
            other = threej(image.j1, image.j2, image.j3, image.m1, image.m2, -image.m3)
            symmetry.record(other.sign == original.sign, f"{key} -> {image}")
    rows.extend([gaunt, symmetry])

    for row in rows:
        if row.disagree:
            logger.warning(f"Reconciliation {row.item}: {row.disagree} of {row.cases} disagree")
    return rows


def _printed_labels_valid(labels) -> bool:
    """Labels are doubled; a half-odd doubled label has no CG key."""
    big1, small1, big2, small2, doubled_j3 = labels
    if any(v.denominator != 1 for v in (big1, big2, small1, small2)):
        return False
    try:
        CGKey(*(HalfInt(int(v)) for v in (big1, big2, doubled_j3, small1, small2)))
    except QuantumNumberError:
        return False
    return True
