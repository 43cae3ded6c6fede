import pytest

from ponfabric import OwcPonSpec, TraditionalSpec, build_owc_pon, build_traditional


@pytest.fixture(scope="session")
def default_owcpon():
    return build_owc_pon(OwcPonSpec())


@pytest.fixture(scope="session")
def default_traditional():
    return build_traditional(TraditionalSpec())
