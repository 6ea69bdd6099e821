import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from lcfkit import base
from lcfkit.kernel import mk_conj, mk_disj, mk_iff, mk_imp, mk_not
from lcfkit.terms import BOOL, Var


@pytest.fixture(scope="session")
def core():
    return base.core_theory()


@pytest.fixture(scope="session")
def basethy():
    return base.base_theory()


P = Var("p", BOOL)
Q = Var("q", BOOL)
R = Var("r", BOOL)


def random_prop(rng: random.Random, size: int, atoms=(P, Q, R)):
    """A random propositional formula with exactly `size` nodes."""
    if size <= 1:
        return rng.choice(atoms)
    if size == 2 or rng.random() < 0.2:
        return mk_not(random_prop(rng, size - 1, atoms))
    left = rng.randint(1, size - 2)
    a = random_prop(rng, left, atoms)
    b = random_prop(rng, size - 1 - left, atoms)
    return rng.choice([mk_conj, mk_disj, mk_imp, mk_iff])(a, b)
