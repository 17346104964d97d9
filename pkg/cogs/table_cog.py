import io
import csv
import json
import logging
from functools import partial

from angmom.basis import CGKey, enumerate_cg_keys, validate_triple
from angmom.coupling import cg_racah_oracle, threej
from angmom.errors import EXIT_OK, QuantumNumberError
from angmom.exact import HalfInt, render
from angmom.recoupling import sixj

logger = logging.getLogger(__name__)

SYMBOLS = ('cg', 'threej', 'sixj')
FORMATS = ('csv', 'json')
COLUMNS = ('symbol', 'twice_args', 'value', 'value_squared')


def _fraction_text(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def table_arguments(what, max_2j):
    """Doubled argument tuples for the sweep, lexicographic."""
    if what in ('cg', 'threej'):
        return [key.doubled() for key in enumerate_cg_keys(max_2j)]
    if what == 'sixj':
        span = range(max_2j + 1)
        rows = []
        for doubled in ((a, b, c, d, e, f) for a in span for b in span for c in span
                        for d in span for e in span for f in span):
            a, b, c, d, e, f = (HalfInt(t) for t in doubled)
            if all(validate_triple(*t) for t in ((a, b, c), (a, e, f), (d, b, f), (d, e, c))):
                rows.append(doubled)
        return rows
    raise QuantumNumberError("table symbol in {cg, threej, sixj}", what)


def evaluate_rows(what, chunk):
    """One row dict per doubled argument tuple; module level so worker processes can run it."""
    rows = []
    for doubled in chunk:
        if what == 'cg':
            value = cg_racah_oracle(CGKey(*(HalfInt(t) for t in doubled)))
            shown = doubled
        elif what == 'threej':
            t1, t2, t3, s1, s2 = doubled
            value = threej(HalfInt(t1), HalfInt(t2), HalfInt(t3), HalfInt(s1), HalfInt(s2), HalfInt(-s1 - s2))
            shown = (t1, t2, t3, s1, s2, -s1 - s2)
        else:
            value = sixj(*(HalfInt(t) for t in doubled))
            shown = doubled
        rows.append({
            'symbol': what,
            'twice_args': ' '.join(str(t) for t in shown),
            'value': render(value.value),
            'value_squared': _fraction_text(value.squared()),
        })
    return rows


def render_table(what, max_2j, rows, fmt):
    if fmt == 'json':
        return json.dumps({'symbol': what, 'max_2j': max_2j, 'rows': rows}, sort_keys=True, indent=2) + '\n'
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


async def emit_table(hub, max_2j, what, fmt):
    """The whole document as text, independent of the worker count."""
    if max_2j < 0:
        raise QuantumNumberError("max_2j >= 0", str(max_2j))
    if fmt not in FORMATS:
        raise QuantumNumberError("format in {csv, json}", fmt)
    arguments = table_arguments(what, max_2j)
    chunks = hub.chunked(arguments)
    results = await hub.run_sweep(partial(evaluate_rows, what), chunks)
    rows = [row for chunk in results for row in chunk]
    logger.info(f"Table {what} up to 2j={max_2j}: {len(rows)} rows")
    return render_table(what, max_2j, rows, fmt)


class TableCog:
    """
    Sweeps a j-range and writes CG, 3j or 6j values as CSV or JSON.
    """

    def __init__(self, hub):
        self.hub = hub

    def register(self, subparsers):
        table = subparsers.add_parser('table', help='tabulate a symbol over a j-range')
        table.add_argument('--what', choices=SYMBOLS, default='cg')
        table.add_argument('--max-2j', type=int, default=2, dest='max_2j')
        table.add_argument('--format', choices=FORMATS, default='csv', dest='fmt')
        table.set_defaults(handler=self.table)

    async def table(self, args):
        document = await emit_table(self.hub, args.max_2j, args.what, args.fmt)
        print(document, end='')
        return EXIT_OK


async def setup(hub):
    await hub.add_cog(TableCog(hub))
