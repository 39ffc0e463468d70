import random

import pytest

from hmtriple import ExpansionWindow, GlobalContext, LocalTripleContext, builtin_sl2


def seeds(n=50, base=0):
    return [random.Random(f"{base}:{k}") for k in range(n)]


@pytest.fixture(scope="session")
def L():
    return builtin_sl2()


@pytest.fixture(scope="session")
def ctx(L):
    return LocalTripleContext(L, ExpansionWindow.square(2))


@pytest.fixture(scope="session")
def G2(L):
    return GlobalContext(L, (0, 1), (0, 2), ExpansionWindow.square(2))


@pytest.fixture(scope="session")
def G3(L):
    return GlobalContext(L, (0, 1, 3), (0, 2, 5), ExpansionWindow.square(2))
