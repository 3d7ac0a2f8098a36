import pytest

from tabntt.planner import make_plan
from tabntt.tables import preprocess


@pytest.fixture(scope="session")
def ts4():
    # n=4, P=5 and the sweep picks omega=2
    return preprocess(make_plan(4, strategy="deterministic_sweep"))


@pytest.fixture(scope="session")
def ts16():
    return preprocess(make_plan(16))


@pytest.fixture(scope="session")
def ts16_m2():
    return preprocess(make_plan(16, m=2))


@pytest.fixture(scope="session")
def ts108():
    return preprocess(make_plan(100, m=3))
