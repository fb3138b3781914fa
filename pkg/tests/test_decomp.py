import pytest

from hendo import decomp, endo
from hendo.hmodules import dual_cell_module
from hendo.ring import FiniteField, Rationals, SpecializationTarget

from systems import strat, system


def one_per_two_sided(C):
    reps = {}
    for k in range(len(C.left_cells)):
        reps.setdefault(C.left_to_two[k], k)
    return [reps[j] for j in sorted(reps)]


def lattices(tag):
    W, H, C, *_ = system(tag)
    return [dual_cell_module(H, C, k) for k in one_per_two_sided(C)]


def test_A1_over_F9_merges_both_characters():
    # T_s acts by q or by -1 on the two generic characters; with q = 2 in F_3
    # these coincide, so one modular irreducible takes both
    F = FiniteField(3)
    assert F.from_int(2) == F.neg(F.one())
    tr = decomp.triple_with_q(3, 2, 2)
    D = decomp.decomposition_matrix(lattices("A1"), tr.target())
    assert D.entries == [[1, 1]]
    v = decomp.unitriangularity_check(D)
    assert v["unitriangular"] and not v["square"]


@pytest.mark.parametrize("tag", ["A1", "A2"])
def test_generic_position_gives_identity(tag):
    lats = lattices(tag)
    n = len(lats)
    for target in (decomp.TripleSpec("DVR", 101, 1, 3).target(), SpecializationTarget(Rationals(), 2)):
        D = decomp.decomposition_matrix(lats, target)
        assert D.entries == [[int(i == j) for j in range(n)] for i in range(n)]


def test_endo_A1_decomposition_is_square_unitriangular():
    st = strat("A1")
    tr = decomp.triple_with_q(3, 2, 2)
    Dplus = decomp.decomposition_matrix([st.delta[w] for w in st.omega], tr.target(), labels=st.omega)
    assert decomp.unitriangularity_check(Dplus)["square"]
    assert decomp.unitriangularity_check(Dplus)["unitriangular"]
    W, H, C, *_ = system("A1")
    DH = decomp.decomposition_matrix([dual_cell_module(H, C, w) for w in st.omega], tr.target(),
                                     labels=st.omega)
    assert decomp.rows_removed(DH, Dplus)


@pytest.mark.parametrize("tag,r,a", [("A1", 3, 2), ("A1", 5, 2), ("A2", 3, 2), ("A2", 7, 3)])
def test_laurent_route_reproduces_direct_matrix(tag, r, a):
    lats = lattices(tag)
    res = decomp.laurent_route(lats, decomp.TripleSpec("Laurent", r, a=a))
    assert res["matches"]
    if res["middle_split_semisimple"]:
        first = res["first"].entries
        assert all(sorted(row) == [0] * (len(row) - 1) + [1] for row in zip(*first))


@pytest.mark.parametrize("tag", ["A1", "A2"])
def test_lattice_independence(tag):
    tr = decomp.TripleSpec("Laurent", 3, a=2)
    assert all(decomp.lattice_independence(L, tr) for L in lattices(tag))


def test_factor_labels_are_stable_for_a_seed():
    W, H, C, *_ = system("A2")
    alg = decomp.specialize_algebra(H, decomp.triple_with_q(3, 2, 2).target())
    runs = [decomp.composition_factors(alg.left_regular(), 7) for _ in range(2)]
    assert [(f.dim, f.multiplicity, f.fingerprint) for f in runs[0]] == \
        [(f.dim, f.multiplicity, f.fingerprint) for f in runs[1]]
    assert sum(f.dim * f.multiplicity for f in runs[0]) == W.size


def test_reducible_lattice_is_refused():
    W, H, C, *_ = system("B2")
    lats = [dual_cell_module(H, C, k) for k in range(len(C.left_cells))]
    if all(decomp.generic_commutant_dim(L) == 1 for L in lats):
        pytest.skip("all B2 cell modules irreducible")
    with pytest.raises(decomp.PreconditionError):
        decomp.decomposition_matrix(lats, SpecializationTarget(Rationals(), 2))


def test_trivial_unitriangularity_verdicts():
    v = decomp.unitriangularity_check([[1, 0], [0, 1]])
    assert v["square"] and v["unitriangular"]
    v = decomp.unitriangularity_check([[1, 1]])
    assert v["unitriangular"] and not v["square"]
    assert not decomp.unitriangularity_check([[1, 0], [1, 1]])["unitriangular"]


def test_endo_A1_is_split_semisimple_at_a_rational_point():
    W, H, C, *_ = system("A1")
    A = endo.endo_algebra(H, C)
    rep = endo.generic_semisimplicity(A)
    assert rep["ok"] and rep["simple_dims"] == [2, 1]
