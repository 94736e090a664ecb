import pytest

from homstruct.fixtures import (
    complete_digraph,
    digraph_m,
    directed_cycle,
    edgeless_set,
    empty_digraph,
    eta_perm,
)


@pytest.fixture(scope="session")
def m():
    return digraph_m()


@pytest.fixture(scope="session")
def eta():
    return eta_perm()


@pytest.fixture(scope="session")
def c4():
    return directed_cycle(4)
