import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from codepth3.cli import CORPUS_NAMES, load_corpus_text  # noqa: E402
from codepth3.exactlin import PrimeField  # noqa: E402
from codepth3.parsing import parse_ideal_file, parse_polynomials  # noqa: E402
from codepth3.polyring import PolynomialRing  # noqa: E402
from codepth3.quotient import QuotientRing  # noqa: E402


@pytest.fixture(scope="session")
def ring():
    return PolynomialRing(PrimeField(32003), ("x", "y", "z"))


@pytest.fixture(scope="session")
def P(ring):
    """Parse one polynomial in the default ring."""

    def parse(text):
        (f,) = parse_polynomials(text, ring)
        return f

    return parse


def quotient(ring, text):
    return QuotientRing(ring, parse_polynomials(text, ring))


@pytest.fixture(scope="session")
def Q(ring):
    def make(text):
        return quotient(ring, text)

    return make


@pytest.fixture(scope="session")
def corpus():
    out = {}
    for name in CORPUS_NAMES:
        spec, polys = parse_ideal_file(load_corpus_text(name))
        out[name] = QuotientRing(spec.ring(), polys)
    return out
