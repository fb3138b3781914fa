"""Cached builds of the small systems used across the tests."""

from __future__ import annotations

import functools

from hendo.cells import CellDecomposition, a_function, gamma_table
from hendo.coxeter import build_system
from hendo.hecke import HeckeAlgebra

# rank <= 2 catalog: A1, A2, B2 (equal weights), G2, I2(8) with weights (2,4)
# as for 2F4, and the unequal-weight B2 systems of unitary groups.
RANK2 = ["A1", "A2", "B2", "G2", "2F4", "SU4", "SU5"]


@functools.lru_cache(maxsize=None)
def system(tag):
    W = build_system(tag)
    H = HeckeAlgebra(W)
    H.compute_all()
    C = CellDecomposition(H)
    af = a_function(H)
    gi = gamma_table(H, C, af)
    return W, H, C, af, gi


@functools.lru_cache(maxsize=None)
def endo_all(tag):
    from hendo import endo
    W, H, C, af, _ = system(tag)
    return endo.endo_algebra(H, C)


@functools.lru_cache(maxsize=None)
def strat(tag):
    from hendo import endo
    return endo.strat_modules(endo_all(tag))
