import pytest

from dkcalc.sgroup import make_instance


@pytest.fixture(scope="session")
def gamma():
    return make_instance("gamma")


@pytest.fixture(scope="session")
def expo():
    """Nonabelian symmetric fixture used for decompositions: maps [3] -> [n] into S3."""
    return make_instance("exponential:3:S3")


@pytest.fixture(scope="session")
def expo2():
    return make_instance("exponential:2:S3")
