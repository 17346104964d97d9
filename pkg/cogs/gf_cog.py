import logging

from angmom.errors import EXIT_OK, QuantumNumberError, ResourceBudgetError
from angmom.exact import HalfInt
from angmom.recoupling import COUPLING_VARS, build_coupling_form
from angmom.series import MultiSeries, cg_gf_integral_side, series_exp, threej_exponent

logger = logging.getLogger(__name__)

WHICH = ('3j', 'cg', 'recoupling')


class GeneratingFunctionCog:
    """
    Dumps a generating-function expansion in the fixture JSON format.
    """

    def __init__(self, hub):
        self.hub = hub

    def register(self, subparsers):
        gf = subparsers.add_parser('gf-expand', help='expand a generating function to a fixed degree')
        gf.add_argument('--which', choices=WHICH, required=True)
        gf.add_argument('--degree', type=int, required=True)
        gf.add_argument('--j3', default='1', help='cg: the 4D angular momentum')
        gf.add_argument('--am1', default='0', help='cg: |m1|')
        gf.add_argument('--am2', default='0', help='cg: |m2|')
        gf.add_argument('--side', choices=('first', 'second'), default='first', help='recoupling: coupling order')
        gf.set_defaults(handler=self.expand)

    def expansion(self, args) -> MultiSeries:
        if args.degree < 0:
            raise QuantumNumberError("degree >= 0", str(args.degree))
        if args.which == '3j':
            return series_exp(threej_exponent(args.degree))
        if args.which == 'cg':
            j3, am1, am2 = (HalfInt.parse(v) for v in (args.j3, args.am1, args.am2))
            return cg_gf_integral_side(j3, am1, am2, args.degree)
        if args.degree > self.hub.settings.max_gf_degree:
            raise ResourceBudgetError(args.degree, self.hub.settings.max_gf_degree)
        form = build_coupling_form(args.side)
        return series_exp(MultiSeries(COUPLING_VARS, form.quadratic.terms, args.degree))

    async def expand(self, args):
        series = self.expansion(args)
        logger.info(f"Expanded {args.which} generating function to degree {args.degree}: {len(series.terms)} terms")
        print(series.to_json())
        return EXIT_OK


async def setup(hub):
    await hub.add_cog(GeneratingFunctionCog(hub))
