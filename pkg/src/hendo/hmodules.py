"""Based modules over the generic Hecke algebra.

Matrix conventions: a left module stores, for each generator s, the
matrix of c_s acting on column vectors (column j is the image of basis
vector j).  A right module stores the matrix of c_s acting on row
vectors, v -> v M.  With these conventions the dual of a left module is
the right module with the same matrices; in column convention the right
action is by the transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cells import a_height
from .ring import ONE, ZERO, Rationals, SpecializationTarget, specialize


class StructureError(AssertionError):
    """A filtration section or set identity failed to match."""


@dataclass
class BasedModule:
    H: object
    side: str                 # "left" or "right"
    labels: list              # Coxeter element indices of the C-basis
    cs: list                  # per generator: matrix of c_s (see module docstring)
    tag: str = ""

    @property
    def rank(self):
        return len(self.labels)

    def Ts(self, s):
        """T_s = t_s c_s - 1."""
        ts = self.H.ts[s]
        n = self.rank
        return [[self.cs[s][i][j] * ts - (ONE if i == j else ZERO) for j in range(n)]
                for i in range(n)]

    def column_matrices(self):
        """Matrices of c_s acting on column vectors (transposed for right modules)."""
        if self.side == "left":
            return self.cs
        return [linalg.transpose(M) for M in self.cs]

    def dual(self):
        side = "right" if self.side == "left" else "left"
        tag = self.tag[:-1] if self.tag.endswith("*") else self.tag + "*"
        return BasedModule(self.H, side, list(self.labels), self.cs, tag)

    def check_relations(self):
        """Quadratic relation (T_s - t_s^2)(T_s + 1) = 0 and the braid relations."""
        H = self.H
        W = H.W
        n = self.rank
        I = linalg.identity(n)
        T = [self.Ts(s) for s in range(W.rank)]
        quad = True
        for s in range(W.rank):
            q = H.ts[s] * H.ts[s]
            A = linalg.mat_sub(T[s], linalg.mat_scale(I, q))
            B = linalg.mat_add(T[s], I)
            if any(x for row in linalg.mat_mul(A, B) for x in row):
                quad = False
        braid = True
        for s in range(W.rank):
            for t in range(s + 1, W.rank):
                m = W.matrix[s][t]
                if not m:
                    continue
                P, Q = I, I
                for k in range(m):
                    P = linalg.mat_mul(P, T[s] if k % 2 == 0 else T[t])
                    Q = linalg.mat_mul(Q, T[t] if k % 2 == 0 else T[s])
                if P != Q:
                    braid = False
        return {"quadratic": quad, "braid": braid}

    def restrict(self, labels):
        """Sub- or subquotient on a subset of basis labels (no closure check)."""
        pos = {v: k for k, v in enumerate(self.labels)}
        idx = [pos[v] for v in labels]
        cs = [[[M[i][j] for j in idx] for i in idx] for M in self.cs]
        return BasedModule(self.H, self.side, list(labels), cs, self.tag)

    def is_submodule(self, labels):
        """Is span of the given basis vectors stable under every c_s?"""
        pos = {v: k for k, v in enumerate(self.labels)}
        inside = {pos[v] for v in labels}
        for M in self.cs:
            for j in inside:
                for i in range(self.rank):
                    if i in inside:
                        continue
                    x = M[i][j] if self.side == "left" else M[j][i]
                    if x:
                        return False
        return True


def _action_on(H, labels):
    """c_s matrices on span{c_v : v in labels}, truncated to those labels."""
    pos = {v: k for k, v in enumerate(labels)}
    n = len(labels)
    mats = []
    for s in range(H.W.rank):
        M = [[ZERO] * n for _ in range(n)]
        for v in labels:
            for z, h in H.cs_c(s, v).items():
                if z in pos:
                    M[pos[z]][pos[v]] = h
        mats.append(M)
    return mats


def cell_module(H, cells, cell):
    """S(omega) = H_{<=_L omega} / H_{<_L omega} on the basis {c_x : x in omega}."""
    labels = list(cells.left_cells[cell])
    return BasedModule(H, "left", labels, _action_on(H, labels), f"S(cell {cell})")


def dual_cell_module(H, cells, cell):
    return cell_module(H, cells, cell).dual()


def c_set(H, cells, J):
    w0J = H.W.longest_in(J)
    return [v for v in range(H.W.size) if cells.leq_L(v, w0J)]


def q_perm_module(H, cells, J, side="left"):
    """H x_J (left, C-basis over C_J) or x_J H (its dual, right)."""
    J = sorted(set(J))
    labels = c_set(H, cells, J)
    pos = set(labels)
    for v in labels:
        for s in range(H.W.rank):
            if any(z not in pos for z in H.cs_c(s, v)):
                raise StructureError("C_J is not a left ideal")
    M = BasedModule(H, "left", labels, _action_on(H, labels), f"Hx_{J}")
    return M if side == "left" else M.dual()


def set_equality_w0J(H, cells, J):
    W = H.W
    J = frozenset(J)
    w0J = W.longest_in(J)
    A = {w for w in range(W.size) if J <= set(W.right_descents(w))}
    B = set()
    for u in range(W.size):
        w = W.mul(u, w0J)
        if W.length[w] == W.length[u] + W.length[w0J]:
            B.add(w)
    C = set(c_set(H, cells, J))
    report = {"J": sorted(J), "A": sorted(A), "B": sorted(B), "C": sorted(C),
              "equal": A == B == C}
    if not report["equal"]:
        raise StructureError(f"A_J, B_J, C_J differ for J = {sorted(J)}")
    return report


# ------------------------------------------------------------ filtrations

@dataclass
class Filtration:
    module: BasedModule
    direction: str             # "decreasing" (left) or "increasing" (right)
    chain: list                # label sets, first to last
    sections: list             # list of (height, [cell ids])
    matched: list = field(default_factory=list)   # per section: bool

    @property
    def ranks(self):
        return [len(c) for c in self.chain]


def height_filtration(M, cells, h):
    """Filtration of a cell-aligned module by the height of left cells.

    Left modules get M = M_0 > M_1 > ... with M_i spanned by cells of height
    at most H_i (H_0 > H_1 > ...).  Right modules get the increasing chain
    spanned by cells of height at least H_0, H_1, ...; its bottom section
    is the top-height layer."""
    cell_of = cells.left_cell_of
    present = sorted({cell_of[v] for v in M.labels})
    for c in present:
        if not set(cells.left_cells[c]) <= set(M.labels):
            raise StructureError("module basis is not a union of left cells")
    heights = sorted({h[c] for c in present}, reverse=True)
    chain, sections, matched = [], [], []
    for k, hk in enumerate(heights):
        if M.side == "left":
            labels = [v for v in M.labels if h[cell_of[v]] <= hk]
        else:
            labels = [v for v in M.labels if h[cell_of[v]] >= hk]
        if not M.is_submodule(labels):
            raise StructureError(f"height layer {hk} does not span a submodule")
        chain.append(labels)
        layer = [c for c in present if h[c] == hk]
        sections.append((hk, layer))
        matched.append(_section_matches(M, cells, layer))
    if M.side == "left":
        chain.append([])
    else:
        chain.insert(0, [])
    if not all(matched):
        raise StructureError("a filtration section is not a direct sum of cell modules")
    return Filtration(M, "decreasing" if M.side == "left" else "increasing",
                      chain, sections, matched)


def _section_matches(M, cells, layer):
    """Section on the cells of ``layer``: block-diagonal, each block a cell module."""
    labels = [v for c in layer for v in cells.left_cells[c]]
    sec = M.restrict(labels)
    pos = {v: k for k, v in enumerate(labels)}
    cell_of = cells.left_cell_of
    for s, A in enumerate(sec.cs):
        for v in labels:
            for z in labels:
                if cell_of[v] != cell_of[z] and A[pos[z]][pos[v]]:
                    return False
    for c in layer:
        S = cell_module(M.H, cells, c)
        blk = sec.restrict(S.labels)
        if blk.cs != S.cs:
            return False
    return True


def bottom_section_check(H, cells, J, h=None, afun=None):
    """x_J H: the bottom section is S_omega with w_{0,J} in omega and every
    other summand S_omega' has omega' <_L omega."""
    if h is None:
        from .cells import a_function
        h = a_height(cells, afun or a_function(H), "left")
    M = q_perm_module(H, cells, J, "right")
    F = height_filtration(M, cells, h)
    w0J = H.W.longest_in(J)
    omega = cells.left_cell_of[w0J]
    bottom = F.sections[0][1]
    others = [c for _, layer in F.sections[1:] for c in layer]
    rep = cells.left_cells
    ok_bottom = bottom == [omega]
    ok_others = all(cells.leq_L(rep[c][0], rep[omega][0]) and not cells.leq_L(rep[omega][0], rep[c][0])
                    for c in others)
    return {"J": sorted(J), "omega": omega, "bottom": bottom, "others": others,
            "bottom_ok": ok_bottom, "others_ok": ok_others, "ranks": F.ranks}


# ----------------------------------------------------------- fixed points

def _fixed_system(M, J):
    H = M.H
    A = M.column_matrices()
    n = M.rank
    rows = []
    for s in sorted(set(J)):
        for i in range(n):
            rows.append([A[s][i][j] - (H.ts_sum[s] if i == j else ZERO) for j in range(n)])
    return rows


def fixed_points(M, J):
    """Integral basis of M^{H_J} plus a flag certifying lattice saturation."""
    n = M.rank
    rows = _fixed_system(M, J)
    if not rows:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)], True
    basis, integral = linalg.nullspace_rref(rows, n)
    if not integral:
        basis = linalg.nullspace(rows, n)
    return basis, integral


def _spec_int_matrix(rows, n_val):
    """Specialize at t = n_val and clear denominators row by row."""
    Q = Rationals()
    tgt = SpecializationTarget(Q, n_val)
    out = []
    for r in rows:
        vals = [specialize(x, tgt) if x else Fraction(0) for x in r]
        den = 1
        for v in vals:
            den = den * v.denominator // _gcd(den, v.denominator)
        out.append([int(v * den) for v in vals])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _smooth(d, n_val):
    """Is d a unit in Z[1/n_val]?"""
    d = abs(d)
    g = _gcd(d, n_val)
    while g > 1:
        while d % g == 0:
            d //= g
        g = _gcd(d, n_val)
    return d == 1


def onto_check(M, K, I, J, specializations=(2, 3, 5)):
    """Surjectivity of K^{H_J} -> (K/I)^{H_J} for C-basis spanned K >= I."""
    K, I = list(K), list(I)
    if not set(I) <= set(K):
        raise ValueError("I must be contained in K")
    if not M.is_submodule(K) or not M.is_submodule(I):
        raise StructureError("K and I must span submodules")
    quot = [v for v in K if v not in set(I)]
    report = {"J": sorted(J), "rank_K": len(K), "rank_I": len(I), "generic": None,
              "specialized": {}, "witness": None}
    if not quot:
        report["generic"] = True
        report["specialized"] = {n: True for n in specializations}
        report["ok"] = True
        return report
    MK = M.restrict(K)
    MQ = M.restrict(quot)
    qpos = [K.index(v) for v in quot]
    FK, _ = fixed_points(MK, J)
    FQ, _ = fixed_points(MQ, J)
    img = [[v[i] for i in qpos] for v in FK]
    r_img = linalg.rank(img) if img else 0
    report["generic"] = r_img == len(FQ)
    if not report["generic"]:
        report["witness"] = {"kind": "generic", "vector": [str(x) for x in FQ[0]] if FQ else None}
    for n_val in specializations:
        rowsK = _spec_int_matrix(_fixed_system(MK, J), n_val) if J else []
        rowsQ = _spec_int_matrix(_fixed_system(MQ, J), n_val) if J else []
        kerK = linalg.int_kernel(rowsK, len(K)) if rowsK else _eye(len(K))
        kerQ = linalg.int_kernel(rowsQ, len(quot)) if rowsQ else _eye(len(quot))
        P = [[v[i] for i in qpos] for v in kerK]
        ok, witness = _lattice_equal(P, kerQ, n_val)
        report["specialized"][n_val] = ok
        if not ok and report["witness"] is None:
            report["witness"] = {"kind": f"t={n_val}", "vector": witness}
    report["ok"] = report["generic"] and all(report["specialized"].values())
    return report


def _eye(n):
    return [[1 if i == j else 0 for i in range(n)] for j in range(n)]


def _lattice_equal(P, Qb, n_val):
    """Does span_Z P equal span_Z Qb after inverting n_val?  (P lies in span Qb.)"""
    if not Qb:
        return True, None
    F = linalg.FMat(Rationals())
    # coordinates of each P-vector in the Q-basis
    QT = F.transpose([[Fraction(x) for x in q] for q in Qb])
    coords = []
    for p in P:
        c = F.solve(QT, [Fraction(x) for x in p])
        if any(x.denominator != 1 for x in c):
            raise StructureError("projected fixed vector outside the quotient fixed lattice")
        coords.append([int(x) for x in c])
    if not coords or F.rank([[Fraction(x) for x in r] for r in coords]) < len(Qb):
        return False, Qb[0]
    inv = linalg.smith_invariants(coords)
    bad = [d for d in inv if not _smooth(d, n_val)]
    if bad:
        return False, Qb[0]
    return True, None


def filtration_onto_checks(H, cells, J, h=None, afun=None, specializations=(2, 3, 5)):
    """onto_check on every pair of steps of the height filtration of H x_J,
    for every parabolic subset J' of S as the fixed-point index."""
    from itertools import combinations
    if h is None:
        from .cells import a_function
        h = a_height(cells, afun or a_function(H), "left")
    M = q_perm_module(H, cells, J, "left")
    F = height_filtration(M, cells, h)
    S = range(H.W.rank)
    subsets = [c for k in range(H.W.rank + 1) for c in combinations(S, k)]
    reports = []
    for i in range(len(F.chain)):
        for j in range(i + 1, len(F.chain)):
            for Jp in subsets:
                r = onto_check(M, F.chain[i], F.chain[j], Jp, specializations)
                r["steps"] = (i, j)
                reports.append(r)
    return reports
