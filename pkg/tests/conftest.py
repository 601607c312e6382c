import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from witt_forms import parse_algebra, parse_field  # noqa: E402
from witt_forms.witt_module_ideals import paper_example_algebra  # noqa: E402


@pytest.fixture(scope="session")
def Rxy():
    return parse_field("R[[x,y]]")


@pytest.fixture(scope="session")
def Qx():
    return parse_field("Q[[x]]")


@pytest.fixture(scope="session")
def Q():
    return parse_field("Q")


@pytest.fixture(scope="session")
def example():
    return paper_example_algebra()


@pytest.fixture(scope="session")
def hamilton(Q):
    return parse_algebra("quat(a=-1,b=-1)", Q)


@pytest.fixture(scope="session")
def split_orth(Q):
    return parse_algebra("quat(a=1,b=1;inv=orth(i))", Q)


@pytest.fixture(scope="session")
def symp_xy(Rxy):
    return parse_algebra("quat(a=x,b=y)", Rxy)


@pytest.fixture(scope="session")
def etale_x(Qx):
    return parse_algebra("etale(d=x)", Qx)
