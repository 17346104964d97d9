import sys
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import partial

from colorama import Fore, Style

from angmom.basis import (
    enumerate_cg_keys, enumerate_passage_keys, map_abs_indices, signed_map_orbit,
)
from angmom.coupling import (
    CGValue, ReconcileRow, cg_hypergeometric, cg_hypergeometric_raw, cg_laguerre_integral,
    cg_racah_oracle, clebsch_gordan, gaunt_cg, radial_selection_contributions, reconcile,
    symmetry_orbit, threej, vilenkin_key,
)
from angmom.errors import EXIT_OK, EXIT_VERIFICATION_FAILED, QuantumNumberError
from angmom.exact import HalfInt, ZERO, render
from angmom.recoupling import (
    enumerate_recoupling_configs, recoupling_matrix, recoupling_oracle, recoupling_value,
    unitarity_defects,
)
from angmom.series import (
    cg_gf_closed_form, cg_gf_integral_side, cg_gf_key, expand_cg_gf, gf_passage_values,
    gf_sign_offset, laguerre_gf_mismatches,
)

logger = logging.getLogger(__name__)

EXACT, MAGNITUDE, FAILURE = 'exact', 'magnitude', 'failure'
SUITES = ('pipelines', 'orthogonality', 'symmetry', 'gf', 'recoupling', 'reconcile')
SHOWN_FAILURES = 20


@dataclass
class VerifySuiteResult:
    name: str
    cases: int = 0
    exact: int = 0
    magnitude_only: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def record(self, outcome):
        status, key, detail = outcome
        self.cases += 1
        if status == EXACT:
            self.exact += 1
        elif status == MAGNITUDE:
            self.magnitude_only += 1
        else:
            self.failures.append((key, detail))

    def extend(self, outcomes):
        for outcome in outcomes:
            self.record(outcome)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        return (
            f"{self.name}: cases={self.cases} exact={self.exact} "
            f"magnitude_only={self.magnitude_only} failures={len(self.failures)}"
        )


def paint(text, colour):
    """Colour only when a terminal is reading."""
    if not sys.stdout.isatty():
        return text
    return f"{colour}{text}{Style.RESET_ALL}"


def compare(key, got: CGValue, expected: CGValue, pipeline: str):
    """Signed comparison; a value off only by its sign is still a failure."""
    if got.value == expected.value:
        return EXACT, str(key), ''
    detail = f"{pipeline}={render(got.value)} oracle={render(expected.value)}"
    if got.magnitude == expected.magnitude:
        detail += ' sign mismatch'
    return FAILURE, str(key), detail


# --- per-chunk checks; module level so they pickle into worker processes ------

def check_hypergeometric(chunk):
    outcomes = []
    for key in chunk:
        mapped = map_abs_indices(key.j1, key.j2, key.j3, key.m1, key.m2).key
        outcomes.append(compare(key, cg_hypergeometric(key), cg_racah_oracle(mapped), 'hypergeometric'))
    return outcomes


def check_gaunt(chunk):
    return [
        compare(key, gaunt_cg(key.j1, key.j2, key.j3, key.m1, key.m2), cg_racah_oracle(key), 'gaunt')
        for key in chunk
    ]


def check_laguerre_integral(chunk):
    return [
        compare(vilenkin_key(l1, l2, l3, k), cg_laguerre_integral(l1, l2, l3, k),
                cg_racah_oracle(vilenkin_key(l1, l2, l3, k)), 'laguerre_integral')
        for l1, l2, l3, k in chunk
    ]


def check_radial_selection(chunk):
    outcomes = []
    for key in chunk:
        survivors = radial_selection_contributions(key.j1, key.m1, key.j2, key.m2, key.j3)
        ok = set(survivors) <= {(0, 0)}
        outcomes.append((EXACT if ok else FAILURE, str(key), '' if ok else f"contributions {survivors}"))
    return outcomes


def check_cg_orthogonality(chunk):
    outcomes = []
    for t1, t2 in chunk:
        j1, j2 = HalfInt(t1), HalfInt(t2)
        bad = []
        for doubled_m in range(-(t1 + t2), t1 + t2 + 1, 2):
            big_m = HalfInt(doubled_m)
            couplings = [HalfInt(t) for t in range(abs(t1 - t2), t1 + t2 + 1, 2) if t >= abs(doubled_m)]
            pairs = [
                (HalfInt(s1), big_m - HalfInt(s1))
                for s1 in range(-t1, t1 + 1, 2)
                if abs(doubled_m - s1) <= t2
            ]
            for a in couplings:
                for b in couplings:
                    total = ZERO
                    for m1, m2 in pairs:
                        total = total + (clebsch_gordan(j1, m1, j2, m2, a, big_m).value
                                         * clebsch_gordan(j1, m1, j2, m2, b, big_m).value)
                    if total != (1 if a == b else 0):
                        bad.append(f"M={big_m} j3={a},{b}: {render(total)}")
        outcomes.append((FAILURE if bad else EXACT, f"(j1={j1}, j2={j2})", '; '.join(bad[:3])))
    return outcomes


def check_recoupling_unitarity(chunk):
    outcomes = []
    for doubled in chunk:
        j1, j2, j3, j4, j = (HalfInt(t) for t in doubled)
        rows, cols, matrix = recoupling_matrix(j1, j2, j3, j4, j)
        defects = unitarity_defects(rows, cols, matrix) if rows else []
        if len(rows) != len(cols):
            defects.append(('shape', f"{len(rows)}x{len(cols)}"))
        label = f"(j1..j4={j1},{j2},{j3},{j4}; j={j})"
        outcomes.append((FAILURE if defects else EXACT, label, str(defects[:2]) if defects else ''))
    return outcomes


def check_symmetry(chunk):
    outcomes = []
    for key in chunk:
        original = threej(key.j1, key.j2, key.j3, key.m1, key.m2, -key.m3)
        status = EXACT
        for image, _ in symmetry_orbit(key):
            other = threej(image.j1, image.j2, image.j3, image.m1, image.m2, -image.m3)
            if other.magnitude != original.magnitude:
                status = FAILURE
                break
            if other.sign != original.sign:
                status = MAGNITUDE
        outcomes.append((status, str(key), '' if status != FAILURE else f"image {image}"))
    return outcomes


def check_cg_gf(chunk):
    outcomes = []
    for doubled_j3, doubled_a, doubled_b, max_n in chunk:
        j3, a, b = HalfInt(doubled_j3), HalfInt(doubled_a), HalfInt(doubled_b)
        label = f"(j3={j3}, |m1|={a}, |m2|={b})"
        integral = cg_gf_integral_side(j3, a, b, max_n)
        closed = cg_gf_closed_form(j3, a, b, max_n)
        if integral != closed:
            outcomes.append((FAILURE, label, 'closed form differs from the integral side'))
            continue
        outcomes.append((EXACT, label, ''))
        for (n1, n), value in sorted(expand_cg_gf(j3, a, b, max_n).items()):
            key = cg_gf_key(j3, a, b, n1, n)
            if key is None:
                ok = value.sign == 0
                outcomes.append((EXACT if ok else FAILURE, f"{label} u^{n1} v^{n}", '' if ok else str(value)))
                continue
            outcomes.append(compare(key, value, cg_hypergeometric_raw(key), 'cg_gf'))
    return outcomes


def check_recoupling(budget, chunk):
    outcomes = []
    for config in chunk:
        oracle = recoupling_oracle(*config)
        j = config[-1]
        for doubled_m in range(-j.twice, j.twice, 2):
            if recoupling_oracle(*config, m=HalfInt(doubled_m)).value != oracle.value:
                outcomes.append((FAILURE, str(config), f"oracle depends on m={HalfInt(doubled_m)}"))
                break
        else:
            got = recoupling_value(*config, budget=budget)
            label = '(' + ', '.join(str(x) for x in config) + ')'
            outcomes.append(compare(label, got, oracle, 'generating_function'))
    return outcomes


# --- suites -------------------------------------------------------------------

def _unique_passage_keys(max_2j):
    return [k for k in enumerate_passage_keys(max_2j) if k.m1.twice >= 0 and k.m2.twice >= 0]


def _laguerre_integral_arguments(max_2j):
    arguments = []
    for t1 in range(max_2j + 1):
        for t2 in range(max_2j + 1):
            for t3 in range(abs(t1 - t2), t1 + t2 + 1, 2):
                for k in range(0, min(t1, t2) + 1):
                    try:
                        vilenkin_key(HalfInt(t1), HalfInt(t2), HalfInt(t3), k)
                    except QuantumNumberError:
                        continue
                    arguments.append((HalfInt(t1), HalfInt(t2), HalfInt(t3), k))
    return arguments


def _cg_gf_arguments(max_2j, max_n):
    arguments = []
    for doubled_j3 in range(max_2j + 1):
        for doubled_a in range(doubled_j3 + 1):
            for doubled_b in range(doubled_j3 - doubled_a + 1):
                if (doubled_j3 - doubled_a - doubled_b) % 2 == 0:
                    arguments.append((doubled_j3, doubled_a, doubled_b, max_n))
    return arguments


class VerifyCog:
    """
    Runs the invariant suites. Every suite but `reconcile` exits nonzero on a
    hard failure; `reconcile` only reports.
    """

    def __init__(self, hub):
        self.hub = hub

    def register(self, subparsers):
        verify = subparsers.add_parser('verify', help='run an invariant suite')
        verify.add_argument('suite', choices=SUITES)
        verify.add_argument('--max-2j', type=int, default=None, dest='max_2j')
        verify.set_defaults(handler=self.verify)

    async def sweep(self, result, func, items):
        outcomes = await self.hub.run_sweep(func, self.hub.chunked(items))
        for chunk in outcomes:
            result.extend(chunk)
        return result

    async def pipelines(self, max_2j):
        result = VerifySuiteResult('pipelines')
        steps = (
            ('hypergeometric', check_hypergeometric, _unique_passage_keys(max_2j)),
            ('gaunt', check_gaunt, enumerate_cg_keys(min(max_2j, 6))),
            ('laguerre_integral', check_laguerre_integral, _laguerre_integral_arguments(min(max_2j, 4))),
            ('radial_selection', check_radial_selection, enumerate_passage_keys(min(max_2j, 6))),
        )
        for name, func, items in steps:
            before = (result.cases, result.exact, result.magnitude_only, len(result.failures))
            await self.sweep(result, func, items)
            result.notes.append(
                f"{name}: cases={result.cases - before[0]} exact={result.exact - before[1]} "
                f"magnitude_only={result.magnitude_only - before[2]} failures={len(result.failures) - before[3]}"
            )
        return result

    async def orthogonality(self, max_2j):
        result = VerifySuiteResult('orthogonality')
        pairs = [(t1, t2) for t1 in range(max_2j + 1) for t2 in range(max_2j + 1)]
        await self.sweep(result, check_cg_orthogonality, pairs)
        small = min(max_2j, 3)
        outer = [
            (t1, t2, t3, t4, t)
            for t1 in range(small + 1) for t2 in range(small + 1)
            for t3 in range(small + 1) for t4 in range(small + 1)
            for t in range(small + 1)
            if (t1 + t2 + t3 + t4 + t) % 2 == 0
        ]
        await self.sweep(result, check_recoupling_unitarity, outer)
        return result

    async def symmetry(self, max_2j):
        result = VerifySuiteResult('symmetry')
        keys = enumerate_cg_keys(max_2j)
        await self.sweep(result, check_symmetry, keys)
        sizes = Counter(len(symmetry_orbit(key)) for key in keys)
        result.notes.append(f"sign-flip orbit sizes: {dict(sorted(sizes.items()))}")
        cycles = Counter(signed_map_orbit(labels)[0] for labels in enumerate_passage_keys(max_2j))
        result.notes.append(f"signed-map cycle lengths (0 = leaves the labels): {dict(sorted(cycles.items()))}")
        logger.info(f"Signed-map cycle lengths: {dict(sorted(cycles.items()))}")
        result.notes.append(f"3j sign flips inside orbits: {result.magnitude_only} of {result.cases} keys")
        logger.info(f"Symmetry orbit sign pattern: {result.magnitude_only} keys with a sign flip")
        return result

    async def gf(self, max_2j):
        result = VerifySuiteResult('gf')
        mismatches = laguerre_gf_mismatches(6, 4)
        for n in range(7):
            for alpha in range(5):
                ok = (n, alpha) not in mismatches
                result.record((EXACT if ok else FAILURE, f"laguerre gf n={n} alpha={alpha}", ''))
        offset = gf_sign_offset()
        for key, value, reference in gf_passage_values(min(max_2j, 4)):
            result.record(compare(key, value.times_sign(offset), reference, 'threej_gf'))
        await self.sweep(result, check_cg_gf, _cg_gf_arguments(min(max_2j, 4), 6))
        return result

    async def recoupling(self, max_2j):
        result = VerifySuiteResult('recoupling')
        configs = enumerate_recoupling_configs(min(max_2j, 3))
        await self.sweep(result, partial(check_recoupling, self.hub.settings.max_gf_degree), configs)
        return result

    async def reconcile(self, max_2j):
        rows = reconcile(max_2j)
        printed_gf = ReconcileRow('cg-gf-printed', note='printed closed form against the integral side')
        for doubled_j3, doubled_a, doubled_b, max_n in _cg_gf_arguments(min(max_2j, 4), 6):
            j3, a, b = HalfInt(doubled_j3), HalfInt(doubled_a), HalfInt(doubled_b)
            integral = cg_gf_integral_side(j3, a, b, max_n)
            printed = cg_gf_closed_form(j3, a, b, max_n, printed=True)
            printed_gf.record(integral == printed, f"(j3={j3}, |m1|={a}, |m2|={b})")
        rows.append(printed_gf)
        recoupling_sign = ReconcileRow('recoupling-sign', note='calibrated generating-function sign against the CG sum')
        for config in enumerate_recoupling_configs(min(max_2j, 2)):
            got = recoupling_value(*config, budget=self.hub.settings.max_gf_degree)
            recoupling_sign.record(got.sign == recoupling_oracle(*config).sign, ' '.join(str(x) for x in config))
        rows.append(recoupling_sign)
        return rows

    def report(self, result: VerifySuiteResult):
        print(paint(result.summary(), Fore.GREEN if result.passed else Fore.RED))
        for note in result.notes:
            print(f"  {note}")
        for key, detail in result.failures[:SHOWN_FAILURES]:
            print(f"  FAIL {key} {detail}")
        if len(result.failures) > SHOWN_FAILURES:
            print(f"  ... {len(result.failures) - SHOWN_FAILURES} more")

    def report_reconcile(self, rows):
        print("item,cases,agree,disagree,note")
        for row in rows:
            print(f"{row.item},{row.cases},{row.agree},{row.disagree},{row.note}")
            for example in row.examples:
                print(f"  {paint(example, Fore.YELLOW)}")

    async def verify(self, args):
        defaults = {'pipelines': 8, 'orthogonality': 8, 'symmetry': 8, 'gf': 4, 'recoupling': 3, 'reconcile': 4}
        max_2j = defaults[args.suite] if args.max_2j is None else args.max_2j
        if max_2j < 0:
            raise QuantumNumberError("max_2j >= 0", str(max_2j))
        logger.info(f"Running suite {args.suite} up to 2j={max_2j}")
        if args.suite == 'reconcile':
            self.report_reconcile(await self.reconcile(max_2j))
            return EXIT_OK
        result = await getattr(self, args.suite)(max_2j)
        self.report(result)
        if not result.passed:
            logger.error(f"Suite {args.suite} failed on {len(result.failures)} of {result.cases} cases")
            return EXIT_VERIFICATION_FAILED
        return EXIT_OK


async def setup(hub):
    await hub.add_cog(VerifyCog(hub))
