import pytest

from stardrift import Rng, synthesize_pool, validate_params


@pytest.fixture(scope="session")
def pool(tmp_path_factory):
    """Small synthetic icon pool shared by the whole suite."""
    directory = tmp_path_factory.mktemp("pool")
    return synthesize_pool(directory, 12, Rng(2024))


@pytest.fixture()
def default_params():
    return validate_params({})


@pytest.fixture()
def rng():
    return Rng(7)
