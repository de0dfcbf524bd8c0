import pytest

from moonframe.catalog import builtin_frame, golay_fixture
from moonframe.lattice import frame_to_code, standard_leech


@pytest.fixture(scope="session")
def golay():
    return golay_fixture()


@pytest.fixture(scope="session")
def leech(golay):
    return standard_leech(golay)


@pytest.fixture(scope="session")
def code_k2(leech):
    """Extremal Type II Z4 code from the deterministic pair frame."""
    return frame_to_code(leech, builtin_frame(2))


@pytest.fixture(scope="session")
def table_k2(code_k2):
    from moonframe.moonshine import decompose
    return decompose(code_k2, order=10, workers=2)
