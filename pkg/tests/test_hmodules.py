from itertools import combinations

import pytest

from hendo.cells import a_height
from hendo.hmodules import (bottom_section_check, c_set, filtration_onto_checks, height_filtration,
                            q_perm_module, set_equality_w0J)

import oracles
from systems import system


def subsets(W):
    return [c for k in range(W.rank + 1) for c in combinations(range(W.rank), k)]


def transpose(M):
    return [list(r) for r in zip(*M)]


@pytest.mark.parametrize("tag", ["A2", "B2", "G2", "2F4"])
def test_perm_modules(tag):
    W, H, C, af, _ = system(tag)
    h = a_height(C, af, "left")
    for J in subsets(W):
        index = W.size // len(oracles.parabolic(W, J))
        left = q_perm_module(H, C, J, "left")
        right = q_perm_module(H, C, J, "right")
        assert left.rank == right.rank == index
        assert all(left.check_relations().values())
        assert all(right.check_relations().values())
        # x_J H acts by the transposes of H x_J's matrices on the dual basis
        assert right.column_matrices() == [transpose(M) for M in left.column_matrices()]
        assert set_equality_w0J(H, C, J)["equal"]
        # one section per left cell inside C_J
        F = height_filtration(left, C, h)
        cells_in = sorted(c for _, layer in F.sections for c in layer)
        assert cells_in == sorted({C.left_cell_of[w] for w in c_set(H, C, J)})


@pytest.mark.parametrize("tag", ["A2", "B2"])
def test_bottom_sections(tag):
    W, H, C, af, _ = system(tag)
    for J in subsets(W):
        r = bottom_section_check(H, C, J, afun=af)
        assert r["bottom_ok"] and r["others_ok"], r
        w0J = W.longest_in(J)
        assert w0J in C.left_cells[r["bottom"][0]]
        # the other sections sit strictly below in <=_L, so their a-values are no smaller
        assert all(af[C.left_cells[c][0]] >= af[w0J] for c in r["others"])


@pytest.mark.parametrize("tag", ["A2", "B2"])
def test_filtration_steps_are_onto(tag):
    W, H, C, af, _ = system(tag)
    for J in subsets(W):
        reps = filtration_onto_checks(H, C, J, afun=af)
        assert reps and all(r["ok"] for r in reps)
