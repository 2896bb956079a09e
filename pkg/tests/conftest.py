import pytest

from mpcost import build, load_builtin
from mpcost.profiles import BUILTIN_PROFILES


@pytest.fixture(scope="session")
def all_profiles():
    return {name: load_builtin(name) for name in BUILTIN_PROFILES}


@pytest.fixture(scope="session")
def inter_m3_medium(all_profiles):
    return all_profiles["inter-m3.medium"]


@pytest.fixture(scope="session")
def inter_m3_large(all_profiles):
    return all_profiles["inter-m3.large"]


@pytest.fixture()
def adder():
    """In, In, Add, Out."""
    return build([("in", []), ("in", []), ("add", [0, 1]), ("out", [2])])
