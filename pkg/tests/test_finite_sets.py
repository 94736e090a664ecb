import itertools

import pytest

from homstruct.errors import InputError
from homstruct.finite_sets import SetBijection, ens_extend, ens_obstruction
from homstruct.fixtures import edgeless_set
from homstruct.homogeneity import katetov_obstruction
from homstruct.perms import Perm


def all_bijections(n):
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for img_set in itertools.combinations(range(n), k):
                for img in itertools.permutations(img_set):
                    yield SetBijection(n, dom, img)


def test_identity_bijection_extends_to_identity():
    f = SetBijection.identity(5, (1, 3))
    assert ens_extend(f) == Perm.identity(5)


def test_extend_example():
    f = SetBijection(4, (1, 3), (2, 0))
    assert ens_extend(f).mapping == (1, 2, 3, 0)


def test_total_bijection_extends_to_itself():
    f = SetBijection(3, (0, 1, 2), (2, 0, 1))
    assert ens_extend(f).mapping == (2, 0, 1)


def test_empty_bijection_extends_to_identity():
    assert ens_extend(SetBijection(4, (), ())) == Perm.identity(4)


def test_bijection_validation():
    with pytest.raises(InputError):
        SetBijection(3, (0, 1), (1, 1))
    with pytest.raises(InputError):
        SetBijection(3, (1, 0), (0, 1))
    with pytest.raises(InputError):
        SetBijection(3, (0,), (3,))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_functor_laws_exhaustive(n):
    ext = {(f.domain, f.images): ens_extend(f) for f in all_bijections(n)}
    for f in all_bijections(n):
        if f.domain == f.images:
            assert ext[(f.domain, f.domain)] == Perm.identity(n)
    for f in all_bijections(n):
        mid = tuple(sorted(f.images))
        for g in all_bijections(n):
            if g.domain != mid:
                continue
            comp = f.then(g)
            assert ext[(comp.domain, comp.images)] == ext[(g.domain, g.images)] * ext[(f.domain, f.images)]


def test_obstruction_thresholds():
    assert ens_obstruction(1) is None
    assert ens_obstruction(2) is None
    obs = ens_obstruction(3)
    assert obs.fixed_set == (0,) and obs.witness == Perm((0, 2, 1))
    assert len(ens_obstruction(5).fixed_set) == 3


def test_obstruction_rejects_non_positive():
    with pytest.raises(InputError):
        ens_obstruction(0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_obstruction_agrees_with_generic_scan(n):
    direct = ens_obstruction(n)
    generic = katetov_obstruction(edgeless_set(n))
    assert direct.fixed_set == generic.fixed_set
    assert direct.witness == generic.witness
