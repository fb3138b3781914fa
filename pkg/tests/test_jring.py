import random

import pytest
from hypothesis import given, settings, strategies as st

from hendo.hecke import HeckeElement
from hendo.jring import JRing
from hendo.ring import random_laurent

from systems import RANK2, system


def jring(tag):
    W, H, C, af, gi = system(tag)
    return JRing(H, C, af, gi)


@pytest.mark.parametrize("tag", RANK2 + ["A3"])
def test_unit_and_phi_determinant(tag):
    W, H, C, af, gi = system(tag)
    R = jring(tag)
    assert R.unit() == R.element({d: gi.n[d] for d in gi.D})
    assert R.phi_determinant()


@pytest.mark.parametrize("tag", RANK2)
def test_associativity_and_varpi(tag):
    R = jring(tag)
    assert R.check_associativity(10_000, seed=1) == []
    rep = R.check_varpi_hom()
    assert rep["multiplicative"] and rep["unital"]


@pytest.mark.parametrize("tag", ["A2", "B2", "2F4"])
def test_boxdot_and_cell_lifts(tag):
    W, H, C, *_ = system(tag)
    R = jring(tag)
    box = R.check_boxdot()
    assert box["stable"] and box["congruence"]
    assert all(R.lift_cell_module(c).ok for c in range(len(C.left_cells)))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.integers(0, 10 ** 6))
def test_varpi_is_multiplicative_on_random_elements(tag, seed):
    W, H, *_ = system(tag)
    R = jring(tag)
    rng = random.Random(seed)

    def elt():
        return HeckeElement(H, "C", {rng.randrange(W.size): random_laurent(rng, terms=2, bound=3)
                                     for _ in range(2)})
    a, b = elt(), elt()
    assert R.varpi(H.mul(a, b, "C")) == R.varpi(a) * R.varpi(b)
    assert R.varpi(a) == R.phi(H.dagger(a))
