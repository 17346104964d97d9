import logging

from angmom.basis import CGKey, unmap_signed
from angmom.coupling import (
    cg_hypergeometric, cg_racah_oracle, gaunt_cg, passage_element, threej,
)
from angmom.errors import EXIT_OK, QuantumNumberError
from angmom.exact import HalfInt, format_decimal, render
from angmom.recoupling import ninej, sixj

logger = logging.getLogger(__name__)

PIPELINES = ('oracle', 'hypergeometric', 'gaunt')


def parse_row(text, size, name):
    """'1/2,1/2,1' -> HalfInts; the count must match."""
    parts = [p for p in text.split(',') if p.strip()]
    if len(parts) != size:
        raise QuantumNumberError(f"{size} values in {name}", f"got {text!r}")
    return [HalfInt.parse(p) for p in parts]


def print_value(value, digits=None):
    print(render(value.value))
    if digits is not None:
        print(format_decimal(value.value, digits))


class SymbolsCog:
    """
    Single-value commands: cg, threej, sixj, ninej and passage.
    """

    def __init__(self, hub):
        self.hub = hub

    def register(self, subparsers):
        cg = subparsers.add_parser('cg', help='<j1 m1; j2 m2 | j3 m1+m2>')
        for name in ('--j1', '--j2', '--j3', '--m1', '--m2'):
            cg.add_argument(name, required=True)
        cg.add_argument('--pipeline', choices=PIPELINES, default='oracle')
        cg.add_argument('--decimal', type=int, default=None, metavar='K')
        cg.set_defaults(handler=self.cg)

        three = subparsers.add_parser('threej', help='Wigner 3j symbol')
        three.add_argument('--row', required=True, help='j1,j2,j3')
        three.add_argument('--m', required=True, help='m1,m2,m3')
        three.add_argument('--decimal', type=int, default=None, metavar='K')
        three.set_defaults(handler=self.threej)

        six = subparsers.add_parser('sixj', help='Wigner 6j symbol')
        six.add_argument('--top', required=True, help='a,b,c')
        six.add_argument('--bottom', required=True, help='d,e,f')
        six.add_argument('--decimal', type=int, default=None, metavar='K')
        six.set_defaults(handler=self.sixj)

        nine = subparsers.add_parser('ninej', help='Wigner 9j symbol')
        for name in ('--row1', '--row2', '--row3'):
            nine.add_argument(name, required=True)
        nine.add_argument('--decimal', type=int, default=None, metavar='K')
        nine.set_defaults(handler=self.ninej)

        passage = subparsers.add_parser('passage', help='double 2D polar to 4D polar overlap')
        for name in ('--j1', '--m1', '--j2', '--m2', '--j3'):
            passage.add_argument(name, required=True)
        passage.add_argument('--route', choices=('abs', 'signed'), default='abs')
        passage.add_argument('--decimal', type=int, default=None, metavar='K')
        passage.set_defaults(handler=self.passage)

    async def cg(self, args):
        j1, j2, j3, m1, m2 = (HalfInt.parse(v) for v in (args.j1, args.j2, args.j3, args.m1, args.m2))
        convention = self.hub.settings.phase_convention
        if args.pipeline == 'oracle':
            value = cg_racah_oracle(CGKey(j1, j2, j3, m1, m2))
        elif args.pipeline == 'gaunt':
            value = gaunt_cg(j1, j2, j3, m1, m2, convention)
        else:
            # the 3F2 route is indexed by oscillator labels with nonnegative m
            labels = unmap_signed(CGKey(j1, j2, j3, m1, m2))
            if labels.m1.twice < 0 or labels.m2.twice < 0:
                raise QuantumNumberError("oscillator m >= 0 on the 3F2 route", str(labels))
            value = cg_hypergeometric(labels, convention)
        logger.debug(f"cg via {args.pipeline}: {value}")
        print_value(value, args.decimal)
        return EXIT_OK

    async def threej(self, args):
        j1, j2, j3 = parse_row(args.row, 3, '--row')
        m1, m2, m3 = parse_row(args.m, 3, '--m')
        if not (abs(m1) <= j1 and abs(m2) <= j2 and abs(m3) <= j3):
            raise QuantumNumberError("|m| <= j", f"{args.row} / {args.m}")
        print_value(threej(j1, j2, j3, m1, m2, m3), args.decimal)
        return EXIT_OK

    async def sixj(self, args):
        print_value(sixj(*parse_row(args.top, 3, '--top'), *parse_row(args.bottom, 3, '--bottom')), args.decimal)
        return EXIT_OK

    async def ninej(self, args):
        rows = [parse_row(getattr(args, f'row{i}'), 3, f'--row{i}') for i in (1, 2, 3)]
        print_value(ninej(rows), args.decimal)
        return EXIT_OK

    async def passage(self, args):
        labels = [HalfInt.parse(v) for v in (args.j1, args.m1, args.j2, args.m2, args.j3)]
        value = passage_element(*labels, route=args.route, reading=self.hub.settings.phi_reading)
        print_value(value, args.decimal)
        return EXIT_OK


async def setup(hub):
    await hub.add_cog(SymbolsCog(hub))
