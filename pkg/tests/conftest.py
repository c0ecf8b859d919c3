import random
from fractions import Fraction

import pytest

from algdeform import builtins as builtin_lib
from algdeform import laws
from algdeform.laws import LawSpace


def rng(seed=0):
    return random.Random(seed)


def random_vec(n, r, bound=5, density=0.7):
    out = {}
    for i in range(n):
        if r.random() < density:
            v = Fraction(r.randint(-bound, bound))
            if v:
                out[i] = v
    return out


def random_law(m, symmetry, r, bound=3, density=0.5):
    space = LawSpace(m, symmetry)
    return space.law(random_vec(space.dim, r, bound=bound, density=density))


def random_on_locus(builtin_name, r, bound=2):
    """A random point of the locus: transport of a builtin by a random g."""
    b = builtin_lib.get_builtin(builtin_name)
    g = laws.random_invertible(b.law.dim, r, bound=bound)
    return laws.act(g, b.law), b.optype


@pytest.fixture
def sl2():
    return builtin_lib.get_builtin("sl2").law


@pytest.fixture
def heis3():
    return builtin_lib.get_builtin("heis3").law


@pytest.fixture
def aff1():
    return builtin_lib.get_builtin("aff1").law


@pytest.fixture
def kx2():
    return builtin_lib.get_builtin("kx2").law


@pytest.fixture
def leib2():
    return builtin_lib.get_builtin("leib2").law
