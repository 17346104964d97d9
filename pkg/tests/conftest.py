import asyncio

import pytest
import sympy
from hypothesis import settings

from angmom.exact import HalfInt

settings.register_profile('angmom', deadline=None)
settings.load_profile('angmom')

ENV_VARS = (
    'ANGMOM_LOG_LEVEL', 'ANGMOM_WORKERS', 'ANGMOM_MAX_GF_DEGREE',
    'ANGMOM_PHI_READING', 'ANGMOM_PHASE_CONVENTION',
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ENV_VARS:
        monkeypatch.delenv(var, raising=False)


@pytest.fixture(scope="session")
def as_sympy():
    """RadicalSum or HalfInt -> sympy expression."""
    def convert(value):
        if isinstance(value, HalfInt):
            return sympy.Rational(value.twice, 2)
        return sum(
            (sympy.Rational(q.numerator, q.denominator) * sympy.sqrt(n) for n, q in value.terms.items()),
            sympy.Integer(0),
        )
    return convert


@pytest.fixture(scope="session")
def same_value(as_sympy):
    def check(value, expected):
        return sympy.simplify(as_sympy(value) - sympy.sympify(expected)) == 0
    return check


@pytest.fixture
def cli(capsys):
    """Run the command line in-process; returns (exit code, stdout, stderr)."""
    from main import run_command

    def run(*argv):
        code = asyncio.run(run_command(list(argv)))
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return run
