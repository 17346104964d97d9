"""
Recoupling of four angular momenta: the generating-function route through the
coupling form and the Bargmann pairing, the CG-contraction oracle, and the 6j,
9j and Racah W symbols built on it.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from angmom.basis import validate_triple
from angmom.config import current_settings
from angmom.coupling import CGValue, clebsch_gordan
from angmom.errors import ConsistencyError, QuantumNumberError, ResourceBudgetError
from angmom.exact import HalfInt, ZERO, sqrt_normalize, whole
from angmom.series import MultiSeries, pair_value, series_exp, extract

logger = logging.getLogger(__name__)

SPINORS = ('a', 'b', 'c', 'd', 'z')
SPINOR_VARS = tuple(f"{x}{i}" for x in SPINORS for i in (1, 2))
MARKERS = ('alpha1', 'alpha2', 'alpha3', 'beta1', 'beta2', 'beta3', 'gamma1', 'gamma2', 'gamma3')
COUPLING_VARS = SPINOR_VARS + MARKERS

SIDES = {
    'first': ('a', 'b', 'c', 'd'),
    'second': ('a', 'd', 'c', 'b'),
}

# (markers, bracket kind, left slot, right slot); slots p, q, r, s
_FAMILIES = (
    (('alpha3',), 'antisym', 'p', 'q'),
    (('beta3',), 'antisym', 'r', 's'),
    (('gamma3', 'alpha1', 'beta1'), 'antisym', 'q', 's'),
    (('gamma3', 'alpha1', 'beta2'), 'antisym', 'q', 'r'),
    (('gamma3', 'alpha2', 'beta1'), 'antisym', 'p', 's'),
    (('gamma3', 'alpha2', 'beta2'), 'antisym', 'p', 'r'),
    (('gamma2', 'alpha2'), 'sym', 'z', 'p'),
    (('gamma2', 'alpha1'), 'sym', 'z', 'q'),
    (('gamma1', 'beta2'), 'sym', 'z', 'r'),
    (('gamma1', 'beta1'), 'sym', 'z', 's'),
)


@dataclass(frozen=True)
class CouplingForm:
    side: str
    slots: tuple
    families: tuple
    quadratic: MultiSeries

    def family_count(self) -> int:
        return len(self.families)


def _bracket_terms(kind, x, y):
    """[xy] = x1 y2 - x2 y1 or (xy) = x1 y1 + x2 y2 as (powers, sign) pairs."""
    if kind == 'antisym':
        return (({f"{x}1": 1, f"{y}2": 1}, 1), ({f"{x}2": 1, f"{y}1": 1}, -1))
    return (({f"{x}1": 1, f"{y}1": 1}, 1), ({f"{x}2": 1, f"{y}2": 1}, 1))


def _merge(*powers):
    merged = {}
    for p in powers:
        for name, e in p.items():
            merged[name] = merged.get(name, 0) + e
    return merged


def build_coupling_form(side: str) -> CouplingForm:
    """
    Q = alpha3[pq] + beta3[rs] + gamma3(alpha1 beta1[qs] + alpha1 beta2[qr]
    + alpha2 beta1[ps] + alpha2 beta2[pr]) + gamma2(alpha2(zp) + alpha1(zq))
    + gamma1(beta2(zr) + beta1(zs)), with (p, q, r, s) = (a, b, c, d) on the
    first side and (a, d, c, b) on the second.
    """
    if side not in SIDES:
        raise QuantumNumberError("coupling side in {first, second}", side)
    slots = dict(zip('pqrs', SIDES[side]), z='z')
    families = tuple(
        (markers, kind, slots[left], slots[right]) for markers, kind, left, right in _FAMILIES
    )
    quadratic = MultiSeries.zero(COUPLING_VARS, 5)
    for markers, kind, x, y in families:
        marker_powers = {m: 1 for m in markers}
        for powers, sign in _bracket_terms(kind, x, y):
            quadratic = quadratic + MultiSeries.monomial(COUPLING_VARS, _merge(marker_powers, powers), sign, 5)
    return CouplingForm(side=side, slots=SIDES[side], families=families, quadratic=quadratic)


def marker_targets(jp, jq, jr, js, J1, J2, j) -> dict:
    """Marker exponents selecting the intermediate J1 (p q), J2 (r s) and total j."""
    exps = {
        'alpha3': whole(jp + jq - J1),
        'alpha1': whole(J1 + jq - jp),
        'alpha2': whole(J1 + jp - jq),
        'beta3': whole(jr + js - J2),
        'beta1': whole(J2 + js - jr),
        'beta2': whole(J2 + jr - js),
        'gamma3': whole(J1 + J2 - j),
        'gamma2': whole(j + J1 - J2),
        'gamma1': whole(j + J2 - J1),
    }
    if min(exps.values()) < 0:
        raise QuantumNumberError("triangle", f"marker exponents {exps}")
    return exps


def _family_counts(targets):
    """Bracket counts n_f whose marker totals equal `targets`."""
    g3 = targets['gamma3']
    for n2 in range(g3 + 1):
        for n3 in range(g3 - n2 + 1):
            for n4 in range(g3 - n2 - n3 + 1):
                n5 = g3 - n2 - n3 - n4
                n6 = targets['alpha2'] - n4 - n5
                n7 = targets['alpha1'] - n2 - n3
                n9 = targets['beta1'] - n2 - n4
                n8 = targets['beta2'] - n3 - n5
                if min(n6, n7, n8, n9) < 0:
                    continue
                if n6 + n7 != targets['gamma2'] or n8 + n9 != targets['gamma1']:
                    continue
                yield (targets['alpha3'], targets['beta3'], n2, n3, n4, n5, n6, n7, n8, n9)


def spinor_degree(spins: dict) -> int:
    return sum(HalfInt.of(spins[x]).twice for x in SPINORS)


def _spinor_bounds(spins):
    return tuple(
        ((2 * i, 2 * i + 1), HalfInt.of(spins[x]).twice) for i, x in enumerate(SPINORS)
    )


def expand_coupling_form(form: CouplingForm, spins: dict, J1, J2, j, budget=None) -> MultiSeries:
    """
    Coefficient of the marker monomial for (J1, J2, j) in exp(Q), as a
    polynomial in the spinor components. Each family contributes B^n / n!.
    """
    if budget is None:
        budget = current_settings().max_gf_degree
    degree = spinor_degree(spins)
    if degree > budget:
        raise ResourceBudgetError(degree, budget)
    p, q, r, s = form.slots
    targets = marker_targets(spins[p], spins[q], spins[r], spins[s], J1, J2, j)
    bounds = _spinor_bounds(spins)
    brackets = []
    for _, kind, x, y in form.families:
        bracket = MultiSeries.zero(SPINOR_VARS, degree, bounds)
        for powers, sign in _bracket_terms(kind, x, y):
            bracket = bracket + MultiSeries.monomial(SPINOR_VARS, powers, sign, degree, bounds)
        brackets.append(bracket)
    powers_cache = {}

    def scaled_power(f, n):
        if (f, n) not in powers_cache:
            if n == 0:
                powers_cache[(f, n)] = MultiSeries.constant(SPINOR_VARS, 1, degree, bounds)
            else:
                powers_cache[(f, n)] = (scaled_power(f, n - 1) * brackets[f]).scale(Fraction(1, n))
        return powers_cache[(f, n)]

    total = MultiSeries.zero(SPINOR_VARS, degree, bounds)
    for counts in _family_counts(targets):
        term = MultiSeries.constant(SPINOR_VARS, 1, degree, bounds)
        for f, n in enumerate(counts):
            term = term * scaled_power(f, n)
            if term.is_zero():
                break
        total = total + term
    logger.debug(f"Coupling form {form.side} at {targets}: {len(total.terms)} spinor terms")
    return total


def expand_coupling_exponential(form: CouplingForm, spins: dict, J1, J2, j) -> MultiSeries:
    """
    The same coefficient taken from series_exp(Q) directly; only practical
    for the smallest spins.
    """
    p, q, r, s = form.slots
    targets = marker_targets(spins[p], spins[q], spins[r], spins[s], J1, J2, j)
    trunc = spinor_degree(spins) + sum(targets.values())
    marker_bounds = tuple(((COUPLING_VARS.index(m),), e) for m, e in targets.items())
    bounds = _spinor_bounds(spins) + marker_bounds
    quadratic = MultiSeries(COUPLING_VARS, form.quadratic.terms, trunc, bounds)
    return extract(series_exp(quadratic), targets)


def _check_recoupling_triangles(j1, j2, j3, j4, j12, j34, j14, j23, j):
    for triple in ((j1, j2, j12), (j3, j4, j34), (j12, j34, j), (j1, j4, j14), (j2, j3, j23), (j14, j23, j)):
        if not validate_triple(*triple):
            raise QuantumNumberError("triangle", f"({', '.join(str(t) for t in triple)})")


def _halves(*values):
    return tuple(HalfInt.of(v) for v in values)


@lru_cache(maxsize=None)
def _recoupling_gf_raw(doubled, budget):
    j1, j2, j3, j4, j12, j34, j14, j23, j = (HalfInt(t) for t in doubled)
    spins = {'a': j1, 'b': j2, 'c': j3, 'd': j4, 'z': j}
    first = expand_coupling_form(build_coupling_form('first'), spins, j12, j34, j, budget)
    second = expand_coupling_form(build_coupling_form('second'), spins, j14, j23, j, budget)
    norm1, norm2 = pair_value(first, first), pair_value(second, second)
    if norm1 == 0 or norm2 == 0:
        raise ConsistencyError(f"empty coupled state for {doubled}")
    overlap = pair_value(second, first)
    # the second form couples (c, b) into j23; the oracle couples (b, c)
    exponent = whole(j2 + j3 - j23)
    if overlap == 0:
        return CGValue.zero(exponent)
    value = sqrt_normalize(Fraction(1) / (norm1 * norm2)) * overlap
    return CGValue.from_value(value * (-1 if exponent % 2 else 1), exponent)


def recoupling_value(j1, j2, j3, j4, j12, j34, j14, j23, j, budget=None, convention='calibrated') -> CGValue:
    """
    <(j1 j2)j12, (j3 j4)j34; j | (j1 j4)j14, (j2 j3)j23; j> from the paired
    generating functions, normalized by their self-pairings.
    """
    args = _halves(j1, j2, j3, j4, j12, j34, j14, j23, j)
    _check_recoupling_triangles(*args)
    if budget is None:
        budget = current_settings().max_gf_degree
    raw = _recoupling_gf_raw(tuple(a.twice for a in args), budget)
    if convention == 'printed' or raw.sign == 0:
        return raw
    return raw.times_sign(recoupling_calibration())


TRIVIAL_CONFIGURATION = ('1/2', 0, 0, '1/2', '1/2', '1/2', 1, 0, 1)


@lru_cache(maxsize=None)
def recoupling_calibration() -> int:
    """Sign making the generating-function route agree with the oracle at the trivial configuration."""
    raw = recoupling_value(*TRIVIAL_CONFIGURATION, budget=spinor_degree(
        dict(zip(SPINORS, ('1/2', 0, 0, '1/2', 1)))), convention='printed')
    oracle = recoupling_oracle(*TRIVIAL_CONFIGURATION)
    if raw.magnitude != oracle.magnitude:
        raise ConsistencyError(f"recoupling calibration: {raw} against {oracle}")
    offset = raw.sign * oracle.sign
    logger.info(f"Calibrated recoupling generating function: sign offset {offset:+d}")
    return offset


def _projections(j):
    return [HalfInt(t) for t in range(-j.twice, j.twice + 1, 2)]


@lru_cache(maxsize=None)
def _recoupling_oracle_doubled(doubled, doubled_m):
    j1, j2, j3, j4, j12, j34, j14, j23, j = (HalfInt(t) for t in doubled)
    big_m = HalfInt(doubled_m)
    total = ZERO
    for m1 in _projections(j1):
        for m2 in _projections(j2):
            for m3 in _projections(j3):
                m4 = big_m - m1 - m2 - m3
                if abs(m4) > j4:
                    continue
                left = clebsch_gordan(j1, m1, j2, m2, j12, m1 + m2)
                if left.sign == 0:
                    continue
                right = clebsch_gordan(j1, m1, j4, m4, j14, m1 + m4)
                if right.sign == 0:
                    continue
                pieces = (
                    clebsch_gordan(j3, m3, j4, m4, j34, m3 + m4),
                    clebsch_gordan(j12, m1 + m2, j34, m3 + m4, j, big_m),
                    clebsch_gordan(j2, m2, j3, m3, j23, m2 + m3),
                    clebsch_gordan(j14, m1 + m4, j23, m2 + m3, j, big_m),
                )
                if any(p.sign == 0 for p in pieces):
                    continue
                product = left.value * right.value
                for p in pieces:
                    product = product * p.value
                total = total + product
    return CGValue.zero() if total.is_zero() else CGValue.from_value(total)


def recoupling_oracle(j1, j2, j3, j4, j12, j34, j14, j23, j, m=None) -> CGValue:
    """The same overlap as a sum of six CG products at fixed total projection m (default j)."""
    args = _halves(j1, j2, j3, j4, j12, j34, j14, j23, j)
    _check_recoupling_triangles(*args)
    big_m = args[-1] if m is None else HalfInt.of(m)
    if abs(big_m) > args[-1] or (args[-1] - big_m).twice % 2:
        raise QuantumNumberError("|m| <= j", f"m={big_m}, j={args[-1]}")
    return _recoupling_oracle_doubled(tuple(a.twice for a in args), big_m.twice)


def _couplings(x, y):
    return [HalfInt(t) for t in range(abs(x.twice - y.twice), x.twice + y.twice + 1, 2)]


def recoupling_matrix(j1, j2, j3, j4, j, method='oracle'):
    """
    Rows (j12, j34), columns (j14, j23), entries CGValue; only labels that
    can reach the total j appear.
    """
    j1, j2, j3, j4, j = _halves(j1, j2, j3, j4, j)
    rows = [(a, b) for a in _couplings(j1, j2) for b in _couplings(j3, j4) if validate_triple(a, b, j)]
    cols = [(a, b) for a in _couplings(j1, j4) for b in _couplings(j2, j3) if validate_triple(a, b, j)]
    evaluate = recoupling_oracle if method == 'oracle' else recoupling_value
    matrix = [[evaluate(j1, j2, j3, j4, r[0], r[1], c[0], c[1], j) for c in cols] for r in rows]
    return rows, cols, matrix


def unitarity_defects(rows, cols, matrix):
    """Nonzero entries of M M^T - 1, as ((row, row'), value)."""
    defects = []
    for i in range(len(rows)):
        for k in range(len(rows)):
            total = ZERO
            for entry_i, entry_k in zip(matrix[i], matrix[k]):
                total = total + entry_i.value * entry_k.value
            expected = 1 if i == k else 0
            if total != expected:
                defects.append(((rows[i], rows[k]), total))
    return defects


def enumerate_recoupling_configs(max_2j: int):
    """All (j1, j2, j3, j4, j12, j34, j14, j23, j) with every doubled label <= max_2j."""
    spins = [HalfInt(t) for t in range(max_2j + 1)]
    configs = []
    for j1 in spins:
        for j2 in spins:
            for j3 in spins:
                for j4 in spins:
                    for j12 in _couplings(j1, j2):
                        for j34 in _couplings(j3, j4):
                            for j in _couplings(j12, j34):
                                if max(j12.twice, j34.twice, j.twice) > max_2j:
                                    continue
                                for j14 in _couplings(j1, j4):
                                    for j23 in _couplings(j2, j3):
                                        if max(j14.twice, j23.twice) > max_2j:
                                            continue
                                        if validate_triple(j14, j23, j):
                                            configs.append((j1, j2, j3, j4, j12, j34, j14, j23, j))
    return configs


# --- 6j, 9j, Racah W ---------------------------------------------------------

def _sixj_triangles(a, b, c, d, e, f):
    return all(validate_triple(*t) for t in ((a, b, c), (a, e, f), (d, b, f), (d, e, c)))


@lru_cache(maxsize=None)
def _sixj_doubled(doubled):
    a, b, c, d, e, f = (HalfInt(t) for t in doubled)
    if not _sixj_triangles(a, b, c, d, e, f):
        return CGValue.zero()
    overlap = recoupling_oracle(a, b, d, 0, c, d, a, f, e)
    if overlap.sign == 0:
        return overlap
    exponent = whole(a + b + d + e)
    value = overlap.value * sqrt_normalize(Fraction(1, (c.twice + 1) * (f.twice + 1)))
    if exponent % 2:
        value = -value
    return CGValue.from_value(value, exponent)


def sixj(a, b, c, d, e, f) -> CGValue:
    """{a b c; d e f} from the four-momentum overlap with one momentum set to zero."""
    return _sixj_doubled(tuple(x.twice for x in _halves(a, b, c, d, e, f)))


def ninej(rows) -> CGValue:
    """{j1 j2 j3; j4 j5 j6; j7 j8 j9} as a single sum over three 6j products."""
    (j1, j2, j3), (j4, j5, j6), (j7, j8, j9) = (_halves(*row) for row in rows)
    lines = ((j1, j2, j3), (j4, j5, j6), (j7, j8, j9), (j1, j4, j7), (j2, j5, j8), (j3, j6, j9))
    if not all(validate_triple(*t) for t in lines):
        return CGValue.zero()
    low = max(abs(j1.twice - j9.twice), abs(j4.twice - j8.twice), abs(j2.twice - j6.twice))
    high = min(j1.twice + j9.twice, j4.twice + j8.twice, j2.twice + j6.twice)
    total = ZERO
    for doubled_x in range(low, high + 1, 2):
        x = HalfInt(doubled_x)
        product = (
            sixj(j1, j4, j7, j8, j9, x).value
            * sixj(j2, j5, j8, j4, x, j6).value
            * sixj(j3, j6, j9, x, j1, j2).value
        )
        total = total + product * (doubled_x + 1) * (-1) ** doubled_x
    return CGValue.zero() if total.is_zero() else CGValue.from_value(total)


def racah_w(a, b, c, d, e, f) -> CGValue:
    """W(abcd; ef) = (-1)^(a+b+c+d) {a b e; d c f}."""
    a, b, c, d, e, f = _halves(a, b, c, d, e, f)
    symbol = sixj(a, b, e, d, c, f)
    if symbol.sign == 0:
        return symbol
    exponent = whole(a + b + c + d)
    return CGValue(symbol.magnitude, symbol.sign * (-1) ** (exponent % 2), exponent)
