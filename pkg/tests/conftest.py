import pytest

from helpers import reference_instance


@pytest.fixture(scope="session")
def inst_a():
    return reference_instance(c=1)


@pytest.fixture(scope="session")
def inst_a_c2():
    return reference_instance(c=2)
