"""Endomorphism algebras of right q-permutation modules.

Conventions.  Right modules act on row vectors, so a homomorphism
f: M -> N is a matrix F with (v F) for v in M, intertwining means
A^M_s F = F A^N_s, and the composite "first b then a" is F_b F_a.

The right module x_J H is realized as the dual of H x_J on the C-basis
(``hmodules.q_perm_module(..., "right")``).  Its generator is the
functional c_v -> p_{e,v}; it is fixed by c_s (s in J) with eigenvalue
t_s + t_s^-1 and its translates by T~_d (d minimal in W_J d) form a basis.
That makes Hom(x_J H, N) the space of J-fixed vectors of N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg
from .cells import a_function, a_height, preceq
from .decomp import SpecializedAlgebra, composition_factors, radical
from .hmodules import (_fixed_system, dual_cell_module, height_filtration,
                       q_perm_module)
from .linalg import FMat
from .ring import (ONE, ZERO, LaurentPoly, RationalFunction, Rationals,
                   SpecializationTarget, specialize)


class EndoFailure(AssertionError):
    """A structural identity of the endomorphism algebra failed."""


def _laurent(x):
    if isinstance(x, RationalFunction):
        if not x.is_laurent():
            raise EndoFailure(f"non-Laurent coefficient {x}")
        return x.to_laurent()
    return x


def _flat(M):
    return [x for row in M for x in row]


def _reshape(v, m, n):
    return [list(v[i * n:(i + 1) * n]) for i in range(m)]


# ------------------------------------------------------------ generators

def _act_tt(M, v, s):
    """v . T~_s in row convention: v (A_s - t_s^-1)."""
    w = linalg.vec_mat(v, M.cs[s])
    ti = M.H.tsinv[s]
    return [a - ti * b for a, b in zip(w, v)]


def orbit_rows(M, v, elements):
    """Rows v . T~_d for each d, computed along reduced words."""
    W = M.H.W
    memo = {0: list(v)}

    def get(d):
        if d not in memo:
            word = W.words[d]
            memo[d] = _act_tt(M, get(W.word_index[word[:-1]]), word[-1])
        return memo[d]

    return [get(d) for d in elements]


@dataclass
class PermModule:
    """x_J H with its generator and the basis change from T~_d-translates."""
    J: frozenset
    module: object
    gen: list
    reps: list
    Ginv: list

    @property
    def rank(self):
        return self.module.rank


def perm_module(H, cells, J):
    J = frozenset(J)
    W = H.W
    Y = q_perm_module(H, cells, sorted(J), "right")
    g = [H.p(0, v) for v in Y.labels]
    for s in J:
        lhs = linalg.vec_mat(g, Y.cs[s])
        if any(a - H.ts_sum[s] * b for a, b in zip(lhs, g)):
            raise EndoFailure(f"generator of x_J H not fixed by generator {s}")
    reps = W.parabolic_data(J)["right_coset_reps"]
    G = orbit_rows(Y, g, reps)
    if len(G) != Y.rank:
        raise EndoFailure("coset count differs from module rank")
    det = linalg.determinant(G)
    if not det or not det.is_unit():
        raise EndoFailure(f"generator translates are not a Laurent basis (det {det})")
    Ginv = [[_laurent(x) for x in row] for row in linalg.invert(G)]
    return PermModule(J, Y, g, reps, Ginv)


# ------------------------------------------------------------ Hom spaces

@dataclass
class HomSpace:
    """Hom(source, target) with a Laurent basis of intertwiners.

    Coordinates of a homomorphism are read off from the entries of its
    characteristic vector at the columns ``free`` (divided by ``scales``)."""
    source: object
    target: object
    basis: list
    free: list
    scales: list
    integral: bool
    probe: object = None        # vector -> characteristic vector
    triangular: bool = False    # coordinates by back substitution

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, F):
        v = self.probe(F)
        if self.triangular:
            try:
                vecs = getattr(self, "vectors", None) or [_flat(X) for X in self.basis]
                return linalg.echelon_coords(vecs, self.free, v)
            except ArithmeticError:
                raise EndoFailure("homomorphism outside the Laurent lattice")
        out = []
        for f, s in zip(self.free, self.scales):
            x = v[f]
            if s == ONE:
                out.append(x)
            else:
                out.append(_laurent(RationalFunction(x, s)) if x else ZERO)
        return out

    def check(self):
        A = self.source.cs
        B = self.target.cs
        for F in self.basis:
            for a, b in zip(A, B):
                if linalg.mat_mul(a, F) != linalg.mat_mul(F, b):
                    return False
        return True


def hom_from_perm(P, N):
    """Hom(x_J H, N) via J-fixed vectors of N (rational basis)."""
    rows = _fixed_system(N, P.J)
    basis, free, scales, integral = linalg.kernel_with_coords(rows, N.rank)
    mats = []
    for n in basis:
        R = orbit_rows(N, n, P.reps)
        mats.append(linalg.mat_mul(P.Ginv, R))
    g = P.gen
    return HomSpace(P.module, N, mats, free, scales, integral,
                    probe=lambda F: linalg.vec_mat(g, F))


def double_coset_vectors(PI, J):
    """For each double coset W_I d W_J, the image of the generator under
    x_J h -> sum of T_w over the coset, as a vector of x_I H."""
    W = PI.module.H.W
    reps = set(PI.reps)
    out = []
    for d, block in W.double_cosets(PI.J, J):
        ws = [w for w in block if w in reps]
        rows = orbit_rows(PI.module, PI.gen, ws)
        v = [ZERO] * PI.rank
        for w, r in zip(ws, rows):
            c = LaurentPoly({W.L[w]: 1})
            v = [a + c * b for a, b in zip(v, r)]
        out.append(v)
    return out


def hom_between_perms(PJ, PI):
    """Hom(x_J H, x_I H) on the double-coset basis (a free Laurent basis)."""
    vecs = double_coset_vectors(PI, PJ.J)
    N = PI.module
    rows = _fixed_system(N, PJ.J)
    for v in vecs:
        if rows and any(sum((a * b for a, b in zip(r, v)), ZERO) for r in rows):
            raise EndoFailure("double-coset vector is not fixed")
    try:
        basis, piv = linalg.unit_echelon(vecs, N.rank)
    except ArithmeticError as exc:
        raise EndoFailure(f"double-coset span not in echelon form: {exc}")
    mats = [linalg.mat_mul(PJ.Ginv, orbit_rows(N, n, PJ.reps)) for n in basis]
    g = PJ.gen
    hs = HomSpace(PJ.module, N, mats, piv, [ONE] * len(piv), True,
                  probe=lambda F: linalg.vec_mat(g, F), triangular=True)
    hs.vectors = basis
    return hs


def hom_intertwiners(S, T):
    """Hom(S, T) for right modules by solving A^S X = X A^T directly."""
    m, n = S.rank, T.rank
    rows = linalg.intertwiner_rows(S.cs, T.cs, m, n)
    basis, free, scales, integral = linalg.kernel_with_coords(rows, m * n)
    mats = [_reshape(v, m, n) for v in basis]
    return HomSpace(S, T, mats, free, scales, integral, probe=_flat)


def double_coset_count(W, I, J):
    return len(W.double_cosets(I, J))


def hom_basis(H, cells, I, J, perms=None):
    """Hom(x_J H, x_I H), dimension checked against |W_I\\W/W_J|."""
    perms = perms or {}
    PJ = perms.get(frozenset(J)) or perm_module(H, cells, J)
    PI = perms.get(frozenset(I)) or perm_module(H, cells, I)
    hs = hom_between_perms(PJ, PI)
    expect = double_coset_count(H.W, I, J)
    if hs.dim != expect:
        raise EndoFailure(f"dim Hom = {hs.dim}, expected {expect} double cosets")
    return hs


# ------------------------------------------------------------ families

def is_type_a(W):
    """Coxeter graph a path with simple bonds and equal weights."""
    n = W.rank
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if W.matrix[i][j] != 2]
    if any(W.matrix[i][j] != 3 for i, j in edges) or len(set(W.weights)) > 1:
        return False
    if len(edges) != n - 1:
        return False
    deg = [sum(1 for e in edges if k in e) for k in range(n)]
    return max(deg, default=0) <= 2


def all_subsets(W):
    S = range(W.rank)
    return [frozenset(c) for k in range(W.rank + 1) for c in itertools.combinations(S, k)]


def compositions(n, r):
    """Compositions of r into n nonnegative parts, descending lex order."""
    if n == 0:
        return [()] if r == 0 else []
    out = []
    for first in range(r, -1, -1):
        out.extend((first,) + rest for rest in compositions(n - 1, r - first))
    return out


def _node(r, k):
    # position k on the type-B chain (0 = the end with the double bond)
    return r - 1 - k


def schur_family(r, n, kind):
    """Parabolic subsets W_lambda for the type-B q-Schur families.

    ``kind`` "j": lambda in Lambda(n+1, r), remove s_{lambda_0+...+lambda_i}
    for 0 <= i < n.  ``kind`` "i": lambda in Lambda(n, r), remove s_0 and
    s_{lambda_1+...+lambda_i} for 1 <= i < n.  Indices >= r are dropped."""
    if kind == "j":
        lams = compositions(n + 1, r)
        cut = lambda lam: {sum(lam[:i + 1]) for i in range(n)}
    elif kind == "i":
        lams = compositions(n, r)
        cut = lambda lam: {0} | {sum(lam[:i]) for i in range(1, n)}
    else:
        raise ValueError("kind is 'i' or 'j'")
    fam = []
    for lam in lams:
        removed = {_node(r, k) for k in cut(lam) if k < r}
        fam.append((lam, frozenset(set(range(r)) - removed)))
    return fam


# ------------------------------------------------------------ the algebra

class EndoAlgebra:
    """End_H of the direct sum of x_J H over an index family."""

    def __init__(self, H, cells, family, labels=None):
        self.H = H
        self.cells = cells
        self.family = [frozenset(J) for J in family]
        self.labels = labels or [tuple(sorted(J)) for J in self.family]
        cache = {}
        for J in self.family:
            if J not in cache:
                cache[J] = perm_module(H, cells, J)
        self.perms = [cache[J] for J in self.family]
        m = len(self.family)
        homs = {}
        self.blocks = {}
        for i in range(m):
            for j in range(m):
                key = (self.family[i], self.family[j])
                if key not in homs:
                    homs[key] = hom_basis(H, cells, self.family[i], self.family[j], cache)
                self.blocks[(i, j)] = homs[key]
        self.basis = [(i, j, k) for i in range(m) for j in range(m)
                      for k in range(self.blocks[(i, j)].dim)]
        self.index = {b: n for n, b in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._build_structure()

    def matrix(self, p):
        i, j, k = self.basis[p]
        return self.blocks[(i, j)].basis[k]

    def coords_in_block(self, i, j, F):
        """Global coordinate vector of a homomorphism Y_j -> Y_i."""
        v = [ZERO] * self.dim
        for k, c in enumerate(self.blocks[(i, j)].coords(F)):
            v[self.index[(i, j, k)]] = c
        return v

    def _build_structure(self):
        self.structure = {}
        for p, (ip, jp, _) in enumerate(self.basis):
            Fp = self.matrix(p)
            for q, (iq, jq, _) in enumerate(self.basis):
                if iq != jp:
                    continue
                Fc = linalg.mat_mul(self.matrix(q), Fp)
                cs = self.blocks[(ip, jq)].coords(Fc)
                row = {self.index[(ip, jq, k)]: c for k, c in enumerate(cs) if c}
                if row:
                    self.structure[(p, q)] = row

    def unit_vector(self):
        v = [ZERO] * self.dim
        for i, P in enumerate(self.perms):
            I = linalg.identity(P.rank)
            for k, c in enumerate(self.blocks[(i, i)].coords(I)):
                v[self.index[(i, i, k)]] = c
        return v

    def idempotent(self, indices):
        v = [ZERO] * self.dim
        for i in indices:
            I = linalg.identity(self.perms[i].rank)
            for k, c in enumerate(self.blocks[(i, i)].coords(I)):
                v[self.index[(i, i, k)]] = c
        return v

    def mul(self, u, v):
        out = [ZERO] * self.dim
        for (p, q), row in self.structure.items():
            a, b = u[p], v[q]
            if a and b:
                ab = a * b
                for z, c in row.items():
                    out[z] = out[z] + ab * c
        return out

    def basis_vec(self, p):
        v = [ZERO] * self.dim
        v[p] = ONE
        return v

    def block_dims(self):
        m = len(self.family)
        return [[self.blocks[(i, j)].dim for j in range(m)] for i in range(m)]

    def check_associativity(self):
        n = self.dim
        bad = []
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.basis[a][1] != self.basis[b][0] or self.basis[b][1] != self.basis[c][0]:
                continue
            x = self.mul(self.mul(self.basis_vec(a), self.basis_vec(b)), self.basis_vec(c))
            y = self.mul(self.basis_vec(a), self.mul(self.basis_vec(b), self.basis_vec(c)))
            if x != y:
                bad.append((a, b, c))
        return {"associative": not bad, "failures": bad[:5]}

    def check_unit(self):
        u = self.unit_vector()
        return all(self.mul(u, self.basis_vec(p)) == self.basis_vec(p) ==
                   self.mul(self.basis_vec(p), u) for p in range(self.dim))

    def specialize(self, target):
        F = target.field
        table = {k: {z: specialize(c, target) for z, c in row.items()}
                 for k, row in self.structure.items()}
        return SpecializedAlgebra(F, self.dim, table,
                                  [specialize(c, target) for c in self.unit_vector()])


def endo_algebra(H, cells, family="all", r=None, n=None):
    """Build the algebra for "all" subsets or a type-B q-Schur family."""
    if family == "all":
        return EndoAlgebra(H, cells, all_subsets(H.W))
    if family in ("i", "j"):
        if r is None or n is None:
            raise ValueError("q-Schur families need r and n")
        fam = schur_family(r, n, family)
        return EndoAlgebra(H, cells, [J for _, J in fam], labels=[lam for lam, _ in fam])
    return EndoAlgebra(H, cells, family)


# ------------------------------------------------------------ modules over A

class AModule:
    """Left A-module, one row-convention matrix per basis element of A.

    Row r of ``gens[p]`` holds the coordinates of b_p . v_r."""

    def __init__(self, gens, dim, tag=""):
        self.gens = gens
        self.dim = dim
        self.tag = tag

    def column_matrices(self):
        return [linalg.transpose(G) for G in self.gens]

    def specialize(self, target):
        from .decomp import FModule
        return FModule(target.field, [[[specialize(x, target) for x in row] for row in G]
                                      for G in self.gens])


@dataclass
class StratData:
    algebra: EndoAlgebra
    omega: list                      # cells carrying a Delta
    J_of: dict                       # cell -> family index
    order: object                    # Preorder on cell ids
    height: object
    filt_height: object
    delta_homs: dict                 # cell -> [HomSpace into each Y_k]
    delta: dict                      # cell -> AModule
    proj: dict                       # cell -> list of A-basis indices spanning A e_J
    surj: dict                       # cell -> matrix P -> Delta (rows = P basis)
    extra_delta: dict = field(default_factory=dict)

    def dims(self):
        return {w: self.delta[w].dim for w in self.omega}

    def classes(self):
        cls = []
        for w in self.omega:
            for c in cls:
                if self.order.equiv(c[0], w):
                    c.append(w)
                    break
            else:
                cls.append([w])
        return cls


def _delta_homs(A, cell):
    """Hom(S_cell, Y_k) for each k, solved directly (generic dimensions)."""
    S = dual_cell_module(A.H, A.cells, cell)
    return S, [hom_intertwiners(S, P.module) for P in A.perms]


def _embedding(S, Y):
    """Inclusion of S as the span of its own labels inside Y (or None)."""
    pos = {v: n for n, v in enumerate(Y.labels)}
    if not all(x in pos for x in S.labels):
        return None
    E = [[ONE if pos[x] == c else ZERO for c in range(Y.rank)] for x in S.labels]
    for a, b in zip(S.cs, Y.cs):
        if linalg.mat_mul(a, E) != linalg.mat_mul(E, b):
            return None
    return E


def _delta_lattice(A, S, k, E):
    """Delta = Hom(S, T) as the image of P = Hom(Y_k, T) under restriction
    along E: S -> Y_k, with a free Laurent basis per block."""
    m = len(A.perms)
    homs = []
    for i in range(m):
        gens = [_flat(linalg.mat_mul(E, A.blocks[(i, k)].basis[kk]))
                for kk in range(A.blocks[(i, k)].dim)]
        try:
            basis, piv = linalg.unit_echelon(gens, S.rank * A.perms[i].rank)
        except ArithmeticError as exc:
            raise EndoFailure(f"no free Laurent basis for Hom(S, Y_{i}): {exc}")
        mats = [_reshape(v, S.rank, A.perms[i].rank) for v in basis]
        homs.append(HomSpace(S, A.perms[i].module, mats, piv, [ONE] * len(piv), True,
                             probe=_flat, triangular=True))
    return homs


def _delta_module(A, homs, tag):
    offs, o = [], 0
    for hs in homs:
        offs.append(o)
        o += hs.dim
    dim = o
    gens = []
    for p, (i, j, _) in enumerate(A.basis):
        Fp = A.matrix(p)
        G = [[ZERO] * dim for _ in range(dim)]
        for k, X in enumerate(homs[j].basis):
            img = homs[i].coords(linalg.mat_mul(X, Fp))
            for kk, c in enumerate(img):
                G[offs[j] + k][offs[i] + kk] = c
        gens.append(G)
    return AModule(gens, dim, tag), offs


def strat_modules(A, h=None, afun=None):
    H, cells = A.H, A.cells
    W = H.W
    afun = afun or a_function(H)
    h = h or a_height(cells, afun, "right")
    hl = a_height(cells, afun, "left")
    order = preceq(cells, h)
    J_of = {}
    for k, J in enumerate(A.family):
        w = cells.left_cell_of[W.longest_in(J)]
        J_of.setdefault(w, k)
    omega = sorted(J_of)
    delta_homs, delta, proj, surj, offsets = {}, {}, {}, {}, {}
    generic = {}
    for w in omega:
        k = J_of[w]
        S, direct = _delta_homs(A, w)
        E = _embedding(S, A.perms[k].module)
        if E is None:
            raise EndoFailure(f"cell {w} is not a submodule of x_J H")
        homs = _delta_lattice(A, S, k, E)
        generic[w] = [hs.dim for hs in direct]
        if [hs.dim for hs in homs] != generic[w]:
            raise EndoFailure(f"restriction to cell {w} is not onto Hom(S, T) generically")
        delta_homs[w] = homs
        delta[w], offsets[w] = _delta_module(A, homs, f"Delta({w})")
        proj[w] = [p for p, b in enumerate(A.basis) if b[1] == k]
        rows = []
        for p in proj[w]:
            i = A.basis[p][0]
            img = homs[i].coords(linalg.mat_mul(E, A.matrix(p)))
            row = [ZERO] * delta[w].dim
            for kk, c in enumerate(img):
                row[offsets[w][i] + kk] = c
            rows.append(row)
        surj[w] = rows
    st = StratData(A, omega, J_of, order, h, hl, delta_homs, delta, proj, surj)
    st.generic_hom_dims = generic
    return st


# ------------------------------------------------------------ field helpers

def _spec_rows(rows, target):
    return [[specialize(x, target) for x in r] for r in rows]


def _rank(rows, target=None):
    if not rows:
        return 0
    if target is None:
        return linalg.rank(rows)
    return FMat(target.field).rank(_spec_rows(rows, target))


def generic_rational():
    """Q with t = 2: a point where nothing special happens for small ranks."""
    return SpecializationTarget(Rationals(), 2)


def default_targets():
    from .ring import FiniteField
    return [SpecializationTarget(FiniteField(5, 1), 2),      # q = -1
            SpecializationTarget(FiniteField(7, 1), 3)]      # q = 2


def describe_target(target):
    if target is None:
        return "Q(t)"
    F = target.field
    name = getattr(F, "name", str(F))
    return f"{name}, t={target.t}"


# ------------------------------------------------------------ SS1-SS3

def _commutant_dim(mod):
    return linalg_commutant(mod.gens, mod.dim)


def linalg_commutant(gens, n):
    """dim over Q(t) of {X : G X = X G for all G}."""
    rows = linalg.intertwiner_rows(gens, gens, n, n)
    return n * n - linalg.rank(rows) if rows else n * n


def _hom_dim_generic(M1, M2):
    rows = linalg.intertwiner_rows(M1.gens, M2.gens, M1.dim, M2.dim)
    return M1.dim * M2.dim - linalg.rank(rows) if rows else M1.dim * M2.dim


def check_ss1(st, target=None):
    """dim Hom(P(lam), Delta(mu)) = rank of e_{J(lam)} on Delta(mu)."""
    A = st.algebra
    table, bad = {}, []
    for lam in st.omega:
        e = A.idempotent([st.J_of[lam]])
        for mu in st.omega:
            D = st.delta[mu]
            E = [[ZERO] * D.dim for _ in range(D.dim)]
            for p, c in enumerate(e):
                if c:
                    E = linalg.mat_add(E, linalg.mat_scale(D.gens[p], c))
            d = _rank(E, target)
            table[(lam, mu)] = d
            if d and not st.order.leq(lam, mu):
                bad.append((lam, mu, d))
    return {"ok": not bad, "table": {f"{a},{b}": v for (a, b), v in table.items()},
            "violations": bad}


def check_ss2_generic(st):
    """Delta's absolutely irreducible, non-isomorphic across classes, and
    sum over classes of dim^2 = dim A."""
    A = st.algebra
    irreducible = {w: _commutant_dim(st.delta[w]) == 1 for w in st.omega}
    classes = st.classes()
    reps = [c[0] for c in classes]
    cross = []
    for a in reps:
        for b in reps:
            if a != b and _hom_dim_generic(st.delta[a], st.delta[b]):
                cross.append((a, b))
    iso_within = all(_hom_dim_generic(st.delta[c[0]], st.delta[w]) == 1
                     for c in classes for w in c[1:])
    total = sum(st.delta[c[0]].dim ** 2 for c in classes)
    ok = all(irreducible.values()) and not cross and iso_within and total == A.dim
    return {"ok": ok, "irreducible": irreducible, "cross_homs": cross,
            "within_class_isomorphic": iso_within, "sum_dim_sq": total, "dim_A": A.dim}


def check_ss2_special(st, target, seed=0):
    """Every simple A_F-module is a quotient of some Delta(lam)_F."""
    from .decomp import collect_factors
    A = st.algebra
    alg = A.specialize(target)
    rad, facs = radical(alg, seed)
    F = target.field
    M = FMat(F)
    tops = []
    for w in st.omega:
        D = st.delta[w].specialize(target)
        vecs = []
        for r in rad:
            G = M.zeros(D.dim, D.dim)
            for p, c in enumerate(r):
                if c != F.zero():
                    G = M.add(G, M.scale(D.gens[p], c))
            vecs.extend(G)
        sub = D.spin([v for v in vecs if any(x != F.zero() for x in v)])
        if len(sub) == D.dim:
            continue
        quo = D.split(sub)[1] if sub else D
        tops.extend(f.module for f in composition_factors(quo, seed))
    top_classes = collect_factors(tops, seed)
    missing = []
    for f in facs:
        if not any(c.fingerprint == f.fingerprint and c.module.is_isomorphic(f.module)
                   for c in top_classes):
            missing.append(f.dim)
    return {"ok": not missing, "simples": len(facs), "top_classes": len(top_classes),
            "missing_dims": missing, "field": describe_target(target)}


def _all_delta_dims(st):
    """dim Hom(S_w, T) for every left cell (computed lazily)."""
    A = st.algebra
    out = {}
    for w in range(len(A.cells.left_cells)):
        if w in st.delta:
            out[w] = st.delta[w].dim
        else:
            if w not in st.extra_delta:
                st.extra_delta[w] = _delta_homs(A, w)[1]
            out[w] = sum(hs.dim for hs in st.extra_delta[w])
    return out


def check_ss3(st, target=None):
    """Filter P(lam) by restriction along the increasing filtration of
    x_{J(lam)} H.  Rank jumps must equal the Delta dims of the sections,
    the top section is Delta(lam), the others are strictly above lam."""
    A = st.algebra
    cells = A.cells
    ddim = _all_delta_dims(st)
    reports, ok = {}, True
    for lam in st.omega:
        k = st.J_of[lam]
        Y = A.perms[k].module
        filt = height_filtration(Y, cells, st.filt_height)
        pos = {v: n for n, v in enumerate(Y.labels)}
        prev = 0
        steps = []
        good = True
        for step, (hval, layer) in enumerate(filt.sections):
            labels = filt.chain[step + 1]
            idx = [pos[v] for v in labels]
            rows = []
            for p in st.proj[lam]:
                Fp = A.matrix(p)
                i = A.basis[p][0]
                row = []
                for kk in range(len(A.perms)):
                    if kk == i:
                        row.extend(x for r in idx for x in Fp[r])
                    else:
                        row.extend([ZERO] * (len(idx) * A.perms[kk].rank))
                rows.append(row)
            rk = _rank(rows, target)
            expect = sum(ddim[w] for w in layer)
            above = all(st.order.lt(lam, w) for w in layer) if step else layer == [lam]
            in_omega = all(w in st.delta for w in layer)
            steps.append({"section": layer, "jump": rk - prev, "expected": expect,
                          "order_ok": above, "in_omega": in_omega})
            good = good and rk - prev == expect and above
            prev = rk
        good = good and prev == len(st.proj[lam])
        reports[lam] = {"ok": good, "steps": steps, "dim_P": len(st.proj[lam])}
        ok = ok and good
    return {"ok": ok, "field": describe_target(target), "per_lambda": reports}


def check_surjections(st, target=None):
    """P(w) -> Delta(w) has full rank dim Delta(w)."""
    res = {w: _rank(st.surj[w], target) == st.delta[w].dim for w in st.omega}
    return {"ok": all(res.values()), "per_cell": res}


def check_stratifying_system(st, targets=None, seed=0):
    targets = default_targets() if targets is None else targets
    rep = {"generic": {"SS1": check_ss1(st), "SS2": check_ss2_generic(st),
                       "SS3": check_ss3(st), "surjections": check_surjections(st)},
           "special": []}
    for T in targets:
        rep["special"].append({"field": describe_target(T),
                               "SS1": check_ss1(st, T),
                               "SS2": check_ss2_special(st, T, seed),
                               "SS3": check_ss3(st, T),
                               "surjections": check_surjections(st, T)})
    g = rep["generic"]
    rep["ok"] = all(g[k]["ok"] for k in g) and all(
        s[k]["ok"] for s in rep["special"] for k in ("SS1", "SS2", "SS3", "surjections"))
    return rep


# ------------------------------------------------------------ trace ideals

class _Quot:
    """Arithmetic in A_F / N for a subspace N (rows over F)."""

    def __init__(self, F, N, n):
        self.F = F
        self.M = FMat(F)
        self.n = n
        self.N, self.piv = (self.M.rref(N) if N else ([], []))
        self.free = [c for c in range(n) if c not in set(self.piv)]

    def reduce(self, v):
        F = self.F
        v = list(v)
        for row, c in zip(self.N, self.piv):
            a = v[c]
            if a != F.zero():
                v = [F.sub(x, F.mul(a, y)) for x, y in zip(v, row)]
        return [v[c] for c in self.free]

    def span(self, vecs):
        vs = [self.reduce(v) for v in vecs]
        vs = [v for v in vs if any(x != self.F.zero() for x in v)]
        return self.M.row_space(vs) if vs else []


def _coords_in(F, basis, piv, v):
    """Coordinates of v in an rref basis (pivot entries); None if outside."""
    c = [v[p] for p in piv]
    M = FMat(F)
    recon = M.vecmul(c, basis) if basis else [F.zero()] * len(v)
    return c if recon == list(v) else None


def trace_layers(st):
    """Cells of Omega grouped by right-height, descending; ties by cell id."""
    hs = sorted({st.height[w] for w in st.omega}, reverse=True)
    return [sorted(w for w in st.omega if st.height[w] == hv) for hv in hs]


def _ideal_vectors(A, e_idx, alg):
    """Spanning vectors of A e A: products b_p b_q with j_p = i_q in e_idx."""
    out = []
    for (p, q), row in A.structure.items():
        if A.basis[p][1] in e_idx:
            v = [alg.F.zero()] * A.dim
            for z, c in alg.table[(p, q)].items():
                v[z] = c
            out.append(v)
    return out


def _generic_ideal_rank(A, e_idx_cum):
    vecs = []
    for (p, q), row in A.structure.items():
        if A.basis[p][1] in e_idx_cum:
            v = [ZERO] * A.dim
            for z, c in row.items():
                v[z] = c
            vecs.append(v)
    return linalg.rank(vecs) if vecs else 0


def trace_ideal_filtration(st, target, seed=0, generic_ranks=None):
    """Layers J_1 c ... c J_m with J_i = A e_i A, e_i the identities of the
    first i layers; HI1-HI4 verdicts over the given field."""
    A = st.algebra
    alg = A.specialize(target)
    F = alg.F
    M = FMat(F)
    layers = trace_layers(st)
    out = []
    prev_vecs = []
    cum = set()
    for li, layer in enumerate(layers):
        idx = {st.J_of[w] for w in layer}
        cum |= idx
        # ideal of this step
        vecs = prev_vecs + _ideal_vectors(A, cum, alg)
        Jb = M.row_space(vecs) if vecs else []
        dimJ = len(Jb)
        grank = generic_ranks[li] if generic_ranks else _generic_ideal_rank(A, cum)
        hi1 = dimJ == grank
        # work in B = A / J_{i-1}
        Q = _Quot(F, prev_vecs, A.dim)
        Be = Q.span([alg.basis_vec(p) for p, b in enumerate(A.basis) if b[1] in idx])
        eB = Q.span([alg.basis_vec(p) for p, b in enumerate(A.basis) if b[0] in idx])
        eBe_full = [p for p, b in enumerate(A.basis) if b[0] in idx and b[1] in idx]
        eBe = Q.span([alg.basis_vec(p) for p in eBe_full])
        BeB = Q.span(_ideal_vectors(A, idx, alg) + prev_vecs)
        dim_BeB = len(BeB)
        # lift quotient vectors back to A (zeros on the pivot columns of N)
        def lift(u):
            v = [F.zero()] * A.dim
            for c, x in zip(Q.free, u):
                v[c] = x
            return v
        Be_l, eB_l, eBe_l = [lift(u) for u in Be], [lift(u) for u in eB], [lift(u) for u in eBe]
        _, piv_Be = M.rref(Be) if Be else ([], [])
        _, piv_eB = M.rref(eB) if eB else ([], [])
        m, n = len(Be), len(eB)
        rels = []
        for x in Be_l:
            for c in eBe_l:
                xc = _coords_in(F, Be, piv_Be, Q.reduce(alg.mul_vec(x, c)))
                for yk, y in enumerate(eB_l):
                    cy = _coords_in(F, eB, piv_eB, Q.reduce(alg.mul_vec(c, y)))
                    row = [F.zero()] * (m * n)
                    xk = Be_l.index(x)
                    for a, val in enumerate(xc):
                        if val != F.zero():
                            row[a * n + yk] = F.add(row[a * n + yk], val)
                    for b, val in enumerate(cy):
                        if val != F.zero():
                            row[xk * n + b] = F.sub(row[xk * n + b], val)
                    if any(v != F.zero() for v in row):
                        rels.append(row)
        tensor_dim = m * n - (M.rank(rels) if rels else 0)
        hi2 = tensor_dim == dim_BeB
        # idempotence of the layer ideal in B
        BeB_l = [lift(u) for u in BeB]
        sq = Q.span([alg.mul_vec(a, b) for a in BeB_l for b in BeB_l])
        hi3 = len(sq) == dim_BeB
        # eBe semisimple and split
        sub = _subquotient_algebra(alg, Q, eBe, eBe_l)
        rad, facs = radical(sub, seed) if sub.dim else ([], [])
        hi4 = not rad and all(f.split for f in facs) and sum(f.dim ** 2 for f in facs) == sub.dim
        out.append({"layer": layer, "families": sorted(idx), "dim_J": dimJ, "generic_dim_J": grank,
                    "dim_layer": dim_BeB, "tensor_dim": tensor_dim, "dim_eBe": sub.dim,
                    "HI1": hi1, "HI2": hi2, "HI3": hi3, "HI4": hi4})
        prev_vecs = Jb
    total = len(prev_vecs) == A.dim
    ok = total and all(r["HI1"] and r["HI2"] and r["HI3"] and r["HI4"] for r in out)
    return {"ok": ok, "field": describe_target(target), "layers": out, "exhausts_A": total}


def _subquotient_algebra(alg, Q, basis_q, basis_l):
    """Structure constants of the algebra spanned by basis_l modulo Q.N."""
    F = alg.F
    M = FMat(F)
    _, piv = M.rref(basis_q) if basis_q else ([], [])
    d = len(basis_l)
    table = {}
    for i, x in enumerate(basis_l):
        for j, y in enumerate(basis_l):
            c = _coords_in(F, basis_q, piv, Q.reduce(alg.mul_vec(x, y)))
            if c is None:
                raise EndoFailure("e B e is not closed under multiplication")
            row = {k: v for k, v in enumerate(c) if v != F.zero()}
            if row:
                table[(i, j)] = row
    # unit: the element acting as identity; solve u x = x for all basis x
    unit = _find_unit(F, d, table)
    return SpecializedAlgebra(F, d, table, unit)


def _find_unit(F, d, table):
    M = FMat(F)
    rows, rhs = [], []
    for j in range(d):
        for k in range(d):
            rows.append([table.get((i, j), {}).get(k, F.zero()) for i in range(d)])
            rhs.append(F.one() if j == k else F.zero())
    try:
        return M.solve(rows, rhs) if d else []
    except linalg.NoSolution:
        raise EndoFailure("layer algebra has no unit")


# ------------------------------------------------------------ standard basis

@dataclass
class StandardBasisData:
    poset: list                   # class representatives, in layer order
    classes: list
    phi: dict                     # rep -> [(block k, matrix)]   Delta(lam)
    psi: dict                     # rep -> [(block l, matrix)]   Delta°(lam)
    elements: dict                # rep -> {(i, j): coordinate vector in A}
    gram: dict                    # rep -> matrix f(j, i)
    lambda1: list
    checks: dict


def _hom_list(homs):
    out = []
    for k, hs in enumerate(homs):
        out.extend((k, X) for X in hs.basis)
    return out


def standard_basis(st):
    """a^lam_{ij} = phi_i o psi_j with phi in Hom(S_lam, T), psi in Hom(T, S_lam)."""
    A = st.algebra
    classes = st.classes()
    layers = trace_layers(st)
    order = [w for layer in layers for w in layer]
    classes.sort(key=lambda c: min(order.index(w) for w in c))
    reps = [c[0] for c in classes]
    phi, psi, elements, gram = {}, {}, {}, {}
    scalar_ok = True
    for lam in reps:
        S = dual_cell_module(A.H, A.cells, lam)
        phi[lam] = _hom_list(st.delta_homs[lam])
        psi[lam] = _hom_list([hom_intertwiners(P.module, S) for P in A.perms])
        n = S.rank
        G = []
        for (l, Y) in psi[lam]:
            row = []
            for (k, X) in phi[lam]:
                if k != l:
                    row.append(ZERO)
                    continue
                Z = linalg.mat_mul(X, Y)
                c = Z[0][0]
                if any(Z[a][b] != (c if a == b else ZERO) for a in range(n) for b in range(n)):
                    scalar_ok = False
                row.append(c)
            G.append(row)
        gram[lam] = G
        els = {}
        for i, (k, X) in enumerate(phi[lam]):
            for j, (l, Y) in enumerate(psi[lam]):
                els[(i, j)] = A.coords_in_block(k, l, linalg.mat_mul(Y, X))
        elements[lam] = els
    lambda1 = [lam for lam in reps if any(x for r in gram[lam] for x in r)]
    vecs = [v for lam in reps for v in elements[lam].values()]
    count = len(vecs)
    independent = count == A.dim and linalg.rank(vecs) == A.dim
    nonsingular = {lam: bool(gram[lam]) and linalg.determinant(gram[lam]) != ZERO for lam in reps}
    checks = {"scalar_forms": scalar_ok, "independent": independent, "count": count,
              "dim_A": A.dim, "nonsingular": nonsingular,
              "lambda1_equals_lambda": lambda1 == reps}
    return StandardBasisData(reps, classes, phi, psi, elements, gram, lambda1, checks)


def check_sba_products(sb, A):
    """a^lam_{ij} a^mu_{kl} = delta_{lam,mu} f_lam(j,k) a^lam_{il} on every pair.

    Both sides are computed independently: the left through the structure
    constants of A, the right from the Gram matrix."""
    bad = []
    pairs = 0
    for lam in sb.poset:
        for mu in sb.poset:
            for (i, j), u in sb.elements[lam].items():
                for (k, l), v in sb.elements[mu].items():
                    pairs += 1
                    prod = A.mul(u, v)
                    if lam != mu:
                        expect = [ZERO] * A.dim
                    else:
                        c = sb.gram[lam][j][k]
                        expect = [c * x for x in sb.elements[lam][(i, l)]]
                    if prod != expect:
                        bad.append((lam, (i, j), mu, (k, l)))
    return {"ok": not bad, "pairs": pairs, "failures": bad[:5]}


def classify_irreducibles(sb, target=None):
    """Lambda_1 = classes whose form is nonzero (over the given field)."""
    out = []
    ranks = {}
    for lam in sb.poset:
        G = sb.gram[lam]
        r = _rank(G, target)
        ranks[lam] = r
        if r:
            out.append(lam)
    return {"lambda1": out, "gram_ranks": ranks, "field": describe_target(target)}


def standard_basis_report(st):
    sb = standard_basis(st)
    prods = check_sba_products(sb, st.algebra)
    ok = (sb.checks["scalar_forms"] and sb.checks["independent"] and
          all(sb.checks["nonsingular"].values()) and sb.checks["lambda1_equals_lambda"] and prods["ok"])
    return {"ok": ok, "checks": {**sb.checks, "nonsingular": {str(k): v for k, v in sb.checks["nonsingular"].items()}},
            "products": prods, "poset": sb.poset}, sb


# ------------------------------------------------------------ semisimplicity

def trace_form_det(A, target):
    """det of (x, y) -> Tr(left mult by xy) at a characteristic-0 point."""
    alg = A.specialize(target)
    F = alg.F
    n = A.dim
    tr = [F.zero()] * n
    for (p, q), row in alg.table.items():
        if q in row:
            tr[p] = F.add(tr[p], row[q])
    G = [[F.zero()] * n for _ in range(n)]
    for (p, q), row in alg.table.items():
        s = F.zero()
        for z, c in row.items():
            s = F.add(s, F.mul(c, tr[z]))
        G[p][q] = s
    M = FMat(F)
    return M.rank(G) == n


def generic_semisimplicity(A, seed=0):
    """Trace form nondegenerate at Q, t = 2 (hence over Q(t)); simple
    dimensions at that point give the sum of squares."""
    T = generic_rational()
    nondeg = trace_form_det(A, T)
    alg = A.specialize(T)
    rad, facs = radical(alg, seed)
    dims = sorted((f.dim for f in facs), reverse=True)
    split = all(f.split for f in facs)
    total = sum(f.dim ** 2 for f in facs)
    return {"ok": nondeg and not rad and split and total == A.dim,
            "trace_form_nondegenerate": nondeg, "simple_dims": dims, "split": split,
            "sum_dim_sq": total, "dim_A": A.dim}
