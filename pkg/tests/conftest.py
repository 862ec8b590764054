import os

import pytest

from fi_involutions.field import QI, gf_p2

GF9 = gf_p2(3)
DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(params=["qi", "gf9"])
def field(request):
    return QI if request.param == "qi" else GF9


@pytest.fixture
def data_dir():
    return DATA
