import pytest

from hendo.cells import (a_height, check_a_constancy, check_h_support, dominance_check,
                         is_compatible, preceq, standard_height)

import oracles
from systems import RANK2, system

CELL_TAGS = RANK2 + ["A3"]


def rsk_partitions(W):
    P = oracles.partition_by([oracles.rsk(oracles.perm_of(W, w))[0] for w in range(W.size)])
    Q = oracles.partition_by([oracles.rsk(oracles.perm_of(W, w))[1] for w in range(W.size)])
    shape = oracles.partition_by([tuple(map(len, oracles.rsk(oracles.perm_of(W, w))[0]))
                                  for w in range(W.size)])
    return P, Q, shape


def as_sets(cells):
    return sorted(map(frozenset, cells), key=min)


@pytest.mark.parametrize("tag,left,two", [("A2", 4, 3), ("A3", 10, 5)])
def test_type_a_cells_match_rsk(tag, left, two):
    W, H, C, *_ = system(tag)
    assert all(W.matrix[k][k + 1] == 3 for k in range(W.rank - 1))
    P, Q, shape = rsk_partitions(W)
    assert len(C.left_cells) == left == oracles.involution_count(W.rank + 1)
    assert len(C.two_sided_cells) == two
    L, R = as_sets(C.left_cells), as_sets(C.right_cells)
    assert {tuple(L), tuple(R)} == {tuple(P), tuple(Q)}
    assert as_sets(C.two_sided_cells) == shape


@pytest.mark.parametrize("tag", ["A2", "A3"])
def test_a_function_is_n_of_the_rsk_shape(tag):
    W, H, C, af, _ = system(tag)
    for w in range(W.size):
        # a(w) = n(lambda) = sum (i-1) lambda_i for the RSK shape lambda
        shape = list(map(len, oracles.rsk(oracles.perm_of(W, w))[0]))
        assert af[w] == sum(i * r for i, r in enumerate(shape))
    assert af[0] == 0 and af[W.w0] == W.L[W.w0]


@pytest.mark.parametrize("tag", CELL_TAGS)
def test_h_support_and_a_constancy(tag):
    W, H, C, af, _ = system(tag)
    assert check_h_support(H, C) == []
    assert check_a_constancy(C, af)
    below_L, below_R = oracles.reference_leq(W, H), oracles.reference_leq(W, H, inverse=True)
    for x in range(W.size):
        for y in range(W.size):
            for z in H.product(x, y):
                assert z in below_L[y] and z in below_R[x]
    ref = oracles.reference_a(W, H)
    assert list(af.a) == ref
    for cell in C.two_sided_cells:
        assert len({ref[w] for w in cell}) == 1


@pytest.mark.parametrize("tag", CELL_TAGS)
def test_distinguished_involutions(tag):
    W, H, C, af, gi = system(tag)
    assert all(W.inverse[d] == d for d in gi.D)
    for cell in C.left_cells:
        assert sum(1 for d in gi.D if d in cell) == 1
    assert all(isinstance(g, int) for g in gi.gamma.values())
    assert all(gi.n[d] in (1, -1) for d in gi.D)


@pytest.mark.parametrize("tag", CELL_TAGS)
def test_heights_are_compatible(tag):
    W, H, C, af, _ = system(tag)
    lr = C.lr_preorder_on_left_cells()
    hl, hr = a_height(C, af, "left"), a_height(C, af, "right")
    assert is_compatible(hl, lr)
    assert is_compatible(hr, lr.opposite())
    assert is_compatible(standard_height(lr), lr)
    order = preceq(C, hr)
    assert is_compatible(hr, order)
    # a height compatible with the induced order is compatible with <=_LR^op and <=_L^op
    assert dominance_check(lr.opposite(), order)["dominates"]
    rep = [c[0] for c in C.left_cells]
    for i in range(len(rep)):
        for j in range(len(rep)):
            if C.leq_L(rep[j], rep[i]) and not C.leq_L(rep[i], rep[j]):
                assert hr[i] <= hr[j]
