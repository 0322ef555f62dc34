import pytest

from gpi.freelie import parse_poly
from gpi.groupgrade import named_grading
from gpi.scalars import FieldMode

Q = FieldMode.rational()
F2 = FieldMode.finite(2)
F3 = FieldMode.finite(3)
F2INF = FieldMode.prime_infinite(2)


@pytest.fixture(scope="session")
def U():
    return named_grading("universal")


@pytest.fixture(scope="session")
def AU():
    return named_grading("almost-universal")


@pytest.fixture(scope="session")
def AC():
    return named_grading("almost-canonical")


@pytest.fixture(scope="session")
def R():
    return named_grading("remaining")


def P(text, grading):
    return parse_poly(text, grading)
