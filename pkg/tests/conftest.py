import pytest

from klcells import coxeter

_CACHE = {}


def system(name):
    """Built systems are immutable; share them across the whole session."""
    if name not in _CACHE:
        _CACHE[name] = coxeter.build_system(name)
    return _CACHE[name]


@pytest.fixture(scope="session")
def i24():
    return system("I2:4")


@pytest.fixture(scope="session")
def i26():
    return system("I2:6")


@pytest.fixture(scope="session")
def a2():
    return system("A2")


@pytest.fixture(scope="session")
def a3():
    return system("A3")


@pytest.fixture(scope="session")
def b3():
    return system("B3")


@pytest.fixture(scope="session")
def b4():
    return system("B4")


@pytest.fixture(scope="session")
def f4():
    return system("F4")
