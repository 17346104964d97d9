"""Exact angular-momentum coupling coefficients from oscillator-basis integrals."""
from angmom.exact import HalfInt, RadicalSum, render, parse
from angmom.basis import CGKey, PassageKey
from angmom.coupling import CGValue, cg_racah_oracle, clebsch_gordan, threej, passage_element
from angmom.recoupling import sixj, ninej, racah_w, recoupling_value, recoupling_oracle

__all__ = [
    'HalfInt', 'RadicalSum', 'render', 'parse',
    'CGKey', 'PassageKey',
    'CGValue', 'cg_racah_oracle', 'clebsch_gordan', 'threej', 'passage_element',
    'sixj', 'ninej', 'racah_w', 'recoupling_value', 'recoupling_oracle',
]
