import pytest

from histq.scenarios import get_builtin


@pytest.fixture(scope="session")
def beamsplitter():
    return get_builtin("beamsplitter")


@pytest.fixture(scope="session")
def confirmation_b():
    return get_builtin("confirmation-b")


@pytest.fixture(scope="session")
def confirmation_c():
    return get_builtin("confirmation-c")


@pytest.fixture(scope="session")
def av():
    return get_builtin("av")


@pytest.fixture(scope="session")
def three_channel():
    return get_builtin("three-channel")


@pytest.fixture(scope="session")
def spin_half():
    return get_builtin("spin-half")
