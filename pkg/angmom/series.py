"""
Truncated multivariate power series over exact rationals, the Fock-Bargmann
pairing of monomials, and the generating-function expansions: the Laguerre
generating function, the 3j exponential over seven variables and the
two-parameter passage generating function.
"""
import json
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import product

from sympy.polys.domains import QQ
from sympy.polys.rings import ring
from sympy.polys.ring_series import rs_exp, rs_mul, rs_pow, rs_trunc

from angmom.basis import PassageKey, enumerate_passage_keys
from angmom.coupling import (
    CGValue, _sector, overlap_sign, passage_element, passage_normalization_squared,
    radial_overlap_series,
)
from angmom.errors import ConsistencyError, QuantumNumberError
from angmom.exact import HalfInt, factorial, sqrt_normalize, whole
from angmom.polyn import RationalPoly, laguerre, laguerre_weighted_overlap

logger = logging.getLogger(__name__)

THREEJ_VARS = ('xi1', 'xi2', 'eta1', 'eta2', 't1', 't2', 'tp1', 'tp2', 's')
CG_GF_VARS = ('u', 'v')
LAGUERRE_GF_VARS = ('s', 'x')

GRADE = 'deg_'


@lru_cache(maxsize=None)
def graded_ring(variables: tuple):
    """
    QQ[variables, deg_]. Every stored monomial carries deg_ to the power of
    its total degree, so the rs_* truncation in deg_ is a total-degree cut.
    """
    if GRADE in variables:
        raise QuantumNumberError("series variable names", f"{GRADE} is reserved")
    return ring(list(variables) + [GRADE], QQ)[0]


def _qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class MultiSeries:
    """
    Polynomial truncated at total degree `trunc`. `bounds` is a tuple of
    (variable indices, cap) pairs; terms whose degree in those variables
    exceeds the cap are dropped as well.
    """

    __slots__ = ('vars', 'trunc', 'bounds', 'ring', 'poly')

    def __init__(self, variables, terms=None, trunc=0, bounds=()):
        self.vars = tuple(variables)
        self.trunc = trunc
        self.bounds = tuple(bounds)
        self.ring = graded_ring(self.vars)
        graded = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.vars):
                raise QuantumNumberError("exponent vector length", f"{exps} for {self.vars}")
            if Fraction(c) != 0:
                graded[exps + (sum(exps),)] = _qq(c)
        self.poly = self._admit(self.ring.from_dict(graded))

    @classmethod
    def _wrap(cls, variables, poly, trunc, bounds):
        series = cls.__new__(cls)
        series.vars = tuple(variables)
        series.trunc = trunc
        series.bounds = tuple(bounds)
        series.ring = poly.ring
        series.poly = series._admit(poly)
        return series

    @property
    def grade(self):
        return self.ring.gens[-1]

    def _admit(self, poly):
        poly = rs_trunc(poly, self.grade, self.trunc + 1)
        if not self.bounds:
            return poly
        return self.ring.from_dict({
            monom: c for monom, c in poly.items()
            if all(sum(monom[i] for i in group) <= cap for group, cap in self.bounds)
        })

    @property
    def terms(self) -> dict:
        """Exponent vector (without the grade) -> Fraction."""
        return {monom[:-1]: _fraction(c) for monom, c in self.poly.items()}

    @classmethod
    def zero(cls, variables, trunc, bounds=()):
        return cls(variables, {}, trunc, bounds)

    @classmethod
    def constant(cls, variables, value, trunc, bounds=()):
        return cls(variables, {(0,) * len(variables): value}, trunc, bounds)

    @classmethod
    def monomial(cls, variables, powers: dict, coefficient=1, trunc=0, bounds=()):
        """coefficient * prod(var**power) from a name -> power mapping."""
        exps = tuple(powers.get(name, 0) for name in variables)
        return cls(variables, {exps: coefficient}, trunc, bounds)

    def index(self, name) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise QuantumNumberError("known series variable", f"{name} not in {self.vars}")

    def is_zero(self) -> bool:
        return not self.poly

    def constant_term(self) -> Fraction:
        return _fraction(self.poly.get(self.ring.zero_monom, QQ.zero))

    def _like(self, other):
        if not isinstance(other, MultiSeries):
            return MultiSeries.constant(self.vars, other, self.trunc, self.bounds)
        if other.vars != self.vars:
            raise QuantumNumberError("matching series variables", f"{self.vars} vs {other.vars}")
        return other

    def _bounds_with(self, other):
        return self.bounds if self.bounds == other.bounds else self.bounds + other.bounds

    def __add__(self, other):
        other = self._like(other)
        return MultiSeries._wrap(
            self.vars, self.poly + other.poly, min(self.trunc, other.trunc), self._bounds_with(other),
        )

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries._wrap(self.vars, -self.poly, self.trunc, self.bounds)

    def __sub__(self, other):
        return self + (-self._like(other))

    def scale(self, factor):
        return MultiSeries._wrap(self.vars, self.poly * _qq(factor), self.trunc, self.bounds)

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        other = self._like(other)
        trunc = min(self.trunc, other.trunc)
        poly = rs_mul(self.poly, other.poly, self.grade, trunc + 1)
        return MultiSeries._wrap(self.vars, poly, trunc, self._bounds_with(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.vars == other.vars and self.poly == other.poly

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"MultiSeries(vars={self.vars}, trunc={self.trunc}, terms={len(self.poly)})"

    def to_json(self) -> str:
        """Sorted exponent vectors with their coefficients as 'p/q' strings."""
        rows = [
            [list(exps), f"{c.numerator}/{c.denominator}"]
            for exps, c in sorted(self.terms.items())
        ]
        return json.dumps({'vars': list(self.vars), 'trunc': self.trunc, 'terms': rows}, sort_keys=True, indent=2)


def series_add(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    return a + b


def series_mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    return a * b


def series_exp(a: MultiSeries) -> MultiSeries:
    """sum a^k / k! up to the truncation degree; a must have no constant term."""
    if a.constant_term() != 0:
        raise QuantumNumberError("zero constant term", f"exp of series with constant {a.constant_term()}")
    return MultiSeries._wrap(a.vars, rs_exp(a.poly, a.grade, a.trunc + 1), a.trunc, a.bounds)


def binomial_series(variables, powers: dict, coefficient, exponent: int, trunc: int, bounds=()):
    """(1 + coefficient * monomial)^exponent for any integer exponent."""
    base = tuple(powers.get(name, 0) for name in variables)
    step = sum(base)
    if step == 0:
        raise QuantumNumberError("nonconstant monomial", str(powers))
    one = MultiSeries.constant(variables, 1, trunc, bounds)
    monomial = MultiSeries.monomial(variables, powers, coefficient, trunc, bounds)
    base_poly = one.poly + monomial.poly
    return MultiSeries._wrap(one.vars, rs_pow(base_poly, exponent, one.grade, trunc + 1), trunc, bounds)


def coeff(a: MultiSeries, expvec) -> Fraction:
    expvec = tuple(expvec)
    if sum(expvec) > a.trunc:
        raise QuantumNumberError("degree within truncation", f"{expvec} beyond {a.trunc}")
    return _fraction(a.poly.get(expvec + (sum(expvec),), QQ.zero))


def extract(a: MultiSeries, fixed: dict) -> MultiSeries:
    """Coefficient of the monomial `fixed` (name -> power) as a series in the other variables."""
    positions = {a.index(name): power for name, power in fixed.items()}
    keep = [i for i in range(len(a.vars)) if i not in positions]
    degree = sum(positions.values())
    if degree > a.trunc:
        raise QuantumNumberError("degree within truncation", f"{fixed} beyond {a.trunc}")
    terms = {}
    for exps, c in a.terms.items():
        if all(exps[i] == p for i, p in positions.items()):
            terms[tuple(exps[i] for i in keep)] = c
    remap = {old: new for new, old in enumerate(keep)}
    bounds = tuple(
        (tuple(remap[i] for i in group if i in remap), cap)
        for group, cap in a.bounds
        if any(i in remap for i in group)
    )
    return MultiSeries([a.vars[i] for i in keep], terms, a.trunc - degree, bounds)


def bargmann_pair(f: MultiSeries, g: MultiSeries, paired_vars) -> MultiSeries:
    """
    Gaussian-measure pairing <z^n, z^m> = n! delta_nm over each paired
    variable. Unpaired variables of both factors pass through to the result.
    """
    paired = tuple(paired_vars)
    for name in paired:
        f.index(name)
        g.index(name)
    out_vars = [v for v in f.vars if v not in paired]
    out_vars += [v for v in g.vars if v not in paired and v not in out_vars]
    f_paired = [f.index(v) for v in paired]
    g_paired = [g.index(v) for v in paired]
    f_rest = [(f.index(v), out_vars.index(v)) for v in f.vars if v not in paired]
    g_rest = [(g.index(v), out_vars.index(v)) for v in g.vars if v not in paired]

    by_key = {}
    for exps, c in g.terms.items():
        by_key.setdefault(tuple(exps[i] for i in g_paired), []).append((exps, c))

    acc = {}
    for e1, c1 in f.terms.items():
        key = tuple(e1[i] for i in f_paired)
        partners = by_key.get(key)
        if not partners:
            continue
        weight = 1
        for k in key:
            weight *= factorial(k)
        for e2, c2 in partners:
            exps = [0] * len(out_vars)
            for i, j in f_rest:
                exps[j] += e1[i]
            for i, j in g_rest:
                exps[j] += e2[i]
            exps = tuple(exps)
            acc[exps] = acc.get(exps, Fraction(0)) + c1 * c2 * weight
    return MultiSeries(out_vars, acc, min(f.trunc, g.trunc))


def pair_value(f: MultiSeries, g: MultiSeries) -> Fraction:
    """Full pairing over every shared variable, as a number."""
    paired = bargmann_pair(f, g, f.vars)
    return paired.constant_term()


# --- Laguerre generating function -----------------------------------------------

def laguerre_gf(alpha: int, max_n: int) -> MultiSeries:
    """(1-s)^(-alpha-1) exp(-x s / (1-s)) over (s, x), truncated at total degree 2 max_n."""
    trunc = 2 * max_n
    geometric = binomial_series(LAGUERRE_GF_VARS, {'s': 1}, -1, -1, trunc)
    inner = MultiSeries.monomial(LAGUERRE_GF_VARS, {'s': 1, 'x': 1}, -1, trunc) * geometric
    front = binomial_series(LAGUERRE_GF_VARS, {'s': 1}, -1, -alpha - 1, trunc)
    return front * series_exp(inner)


def laguerre_gf_coefficients(alpha: int, max_n: int):
    """The x-polynomials multiplying s^n, n = 0..max_n."""
    series = laguerre_gf(alpha, max_n)
    return [
        RationalPoly(coeff(series, (n, k)) for k in range(n + 1))
        for n in range(max_n + 1)
    ]


def laguerre_gf_mismatches(max_n: int = 6, max_alpha: int = 4):
    """(n, alpha) pairs where the generating function and laguerre() differ."""
    bad = []
    for alpha in range(max_alpha + 1):
        for n, poly in enumerate(laguerre_gf_coefficients(alpha, max_n)):
            if poly != laguerre(n, alpha):
                bad.append((n, alpha))
    return bad


# --- 3j generating function --------------------------------------------------

def threej_exponent(trunc: int) -> MultiSeries:
    """xi1(eta1 t2 + eta2 tp1) + xi2(-eta1 tp2 + eta2 t1) - s(t1 t2 + tp1 tp2)."""
    pieces = (
        ({'xi1': 1, 'eta1': 1, 't2': 1}, 1),
        ({'xi1': 1, 'eta2': 1, 'tp1': 1}, 1),
        ({'xi2': 1, 'eta1': 1, 'tp2': 1}, -1),
        ({'xi2': 1, 'eta2': 1, 't1': 1}, 1),
        ({'s': 1, 't1': 1, 't2': 1}, -1),
        ({'s': 1, 'tp1': 1, 'tp2': 1}, -1),
    )
    total = MultiSeries.zero(THREEJ_VARS, trunc)
    for powers, c in pieces:
        total = total + MultiSeries.monomial(THREEJ_VARS, powers, c, trunc)
    return total


def expand_3j_gf(max_degree: int):
    """
    Expand the 3j exponential to total degree max_degree and label every
    coefficient by (j1, m1, j2, m2, j3, m, mp, p).
    """
    series = series_exp(threej_exponent(max_degree))
    labelled = {}
    for exps, c in series.terms.items():
        labelled[threej_labels(exps)] = c
    logger.debug(f"3j generating function to degree {max_degree}: {len(labelled)} terms")
    return labelled


def threej_labels(exps):
    xi1, xi2, eta1, eta2, t1, t2, tp1, tp2, p = exps
    return (
        HalfInt(t1 + t2), HalfInt(t1 - t2),
        HalfInt(tp1 + tp2), HalfInt(tp1 - tp2),
        HalfInt(xi1 + xi2),
        HalfInt(eta1 - eta2), HalfInt(xi1 - xi2),
        p,
    )


def threej_monomial(key: PassageKey):
    """Exponent vector in THREEJ_VARS whose coefficient carries the passage element of `key`."""
    j1, m1, j2, m2, j3 = key.j1, key.m1, key.j2, key.m2, key.j3
    m = -(m1 + m2)
    mp = m2 - m1
    return (
        whole(j3 + mp), whole(j3 - mp),
        whole(j3 + m), whole(j3 - m),
        whole(j1 + m1), whole(j1 - m1),
        whole(j2 + m2), whole(j2 - m2),
        key.n,
    )


def threej_degree(key: PassageKey) -> int:
    return sum(threej_monomial(key))


def gf_passage_value(series: MultiSeries, key: PassageKey) -> CGValue:
    """Passage element from the 3j generating-function coefficient of `key`."""
    exps = threej_monomial(key)
    c = coeff(series, exps)
    p = key.n
    if c == 0:
        return CGValue.zero(key.j2.twice)
    radicand = Fraction((key.j3.twice + 1) * factorial(p), factorial(p + key.j3.twice + 1))
    for e in exps[:-1]:
        radicand *= factorial(e)
    return CGValue(sqrt_normalize(radicand * c * c), overlap_sign(c, key.j2.twice), key.j2.twice)


def gf_passage_values(max_2j: int):
    """
    (key, generating-function value, signed-route value) for every passage
    key with doubled j1, j2 <= max_2j.
    """
    keys = enumerate_passage_keys(max_2j)
    degree = max((threej_degree(k) for k in keys), default=0)
    series = series_exp(threej_exponent(degree))
    rows = []
    for key in keys:
        rows.append((key, gf_passage_value(series, key),
                     passage_element(key.j1, key.m1, key.j2, key.m2, key.j3, route='signed')))
    return rows


def gf_sign_offset() -> int:
    """Sign between the generating-function value and the signed route at the stretched monomial."""
    key = PassageKey.make('1/2', '-1/2', 0, 0, '1/2')
    series = series_exp(threej_exponent(threej_degree(key)))
    raw = gf_passage_value(series, key)
    reference = passage_element(key.j1, key.m1, key.j2, key.m2, key.j3, route='signed')
    if raw.magnitude != reference.magnitude:
        raise ConsistencyError(f"3j generating function off at {key}: {raw} vs {reference}")
    return raw.sign * reference.sign


# --- two-parameter passage generating function --------------------------------

CG_GF_SIDES = ('integral', 'closed', 'printed')


def _cg_gf_parameters(j3, am1, am2):
    j3, a, b = HalfInt.of(j3), HalfInt.of(am1), HalfInt.of(am2)
    if a.twice < 0 or b.twice < 0:
        raise QuantumNumberError("|m| >= 0", f"am1={a}, am2={b}")
    if (a + b) > j3:
        raise QuantumNumberError("|m1| + |m2| <= j3", f"{a} + {b} > {j3}")
    d = whole(j3 - a - b)
    return j3, a, b, d


def cg_gf_integral_side(j3, am1, am2, max_n: int) -> MultiSeries:
    """sum over (n1, n) of the overlap of L_n1^(2|m1|) and L_n^(2j3+1) against x^s e^-x."""
    j3, a, b, d = _cg_gf_parameters(j3, am1, am2)
    s = whole(j3 + a - b)
    terms = {}
    for n1, n in product(range(max_n + 1), repeat=2):
        if n1 + n <= max_n:
            terms[(n1, n)] = laguerre_weighted_overlap(n1, a.twice, n, j3.twice + 1, s)
    return MultiSeries(CG_GF_VARS, terms, max_n)


def cg_gf_closed_form(j3, am1, am2, max_n: int, printed: bool = False) -> MultiSeries:
    """
    s! (1-u)^d (1-v)^(-c) (1-uv)^(-(s+1)), or the printed exponents
    (1-u)^(-(s-1)) (1-v)^(c-1) when `printed` is set.
    """
    j3, a, b, d = _cg_gf_parameters(j3, am1, am2)
    s = whole(j3 + a - b)
    c = whole(j3 - a + b) + 1
    u_exponent, v_exponent = (-(s - 1), c - 1) if printed else (d, -c)
    result = (
        binomial_series(CG_GF_VARS, {'u': 1}, -1, u_exponent, max_n)
        * binomial_series(CG_GF_VARS, {'v': 1}, -1, v_exponent, max_n)
        * binomial_series(CG_GF_VARS, {'u': 1, 'v': 1}, -1, -(s + 1), max_n)
    )
    return result.scale(factorial(s))


def expand_cg_gf(j3, am1, am2, max_n: int, side: str = 'integral'):
    """
    Passage elements keyed by (n1, n) from the chosen side of the
    two-parameter generating function; n2 = n + d - n1 < 0 gives zero.
    """
    if side not in CG_GF_SIDES:
        raise QuantumNumberError("generating-function side", side)
    j3, a, b, d = _cg_gf_parameters(j3, am1, am2)
    if side == 'integral':
        series = cg_gf_integral_side(j3, a, b, max_n)
    else:
        series = cg_gf_closed_form(j3, a, b, max_n, printed=(side == 'printed'))
    values = {}
    for n1, n in product(range(max_n + 1), repeat=2):
        if n1 + n > max_n:
            continue
        n2 = n + d - n1
        if n2 < 0:
            values[(n1, n)] = CGValue.zero(n1)
            continue
        key = PassageKey(a + n1, a, b + n2, b, j3)
        overlap = coeff(series, (n1, n))
        if overlap == 0:
            values[(n1, n)] = CGValue.zero(n1)
            continue
        squared = passage_normalization_squared(_sector(key)) * overlap * overlap
        values[(n1, n)] = CGValue(sqrt_normalize(squared), overlap_sign(overlap, n1), n1)
    return values


def cg_gf_key(j3, am1, am2, n1: int, n: int):
    """Passage key addressed by u^n1 v^n, or None when n2 would be negative."""
    j3, a, b, d = _cg_gf_parameters(j3, am1, am2)
    n2 = n + d - n1
    if n2 < 0:
        return None
    return PassageKey(a + n1, a, b + n2, b, j3)


def cg_gf_series_check(j3, am1, am2, max_n: int) -> bool:
    """The generating-function overlap matches the terminating-series overlap coefficientwise."""
    series = cg_gf_integral_side(j3, am1, am2, max_n)
    for (n1, n) in series.terms:
        key = cg_gf_key(j3, am1, am2, n1, n)
        if key is not None and radial_overlap_series(_sector(key)) != coeff(series, (n1, n)):
            return False
    return True
