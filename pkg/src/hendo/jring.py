"""Lusztig's asymptotic ring J.

Basis {j_x}; j_x j_y = sum_z gamma_{x,y,z} j_z where gamma_{x,y,z} is the
coefficient of t^{a(z)} in h_{x,y,z}.  The map varpi: H -> Z[t,t^-1] (x) J
and the action j (.) c_w on a-graded pieces of H live here too, together
with J-module lifts of left cell modules.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .cells import PFailure, a_function, cell_decomposition, gamma_table
from .hecke import HeckeElement
from .ring import ZERO


def _is_zero(v):
    return not v


class JElement:
    """Sparse element of J (integer coefficients) or of Z[t,t^-1] (x) J."""

    __slots__ = ("R", "coeffs")

    def __init__(self, R, coeffs):
        self.R = R
        self.coeffs = {k: v for k, v in coeffs.items() if v}

    def __add__(self, o):
        d = dict(self.coeffs)
        for k, v in o.coeffs.items():
            d[k] = d.get(k, 0) + v
        return JElement(self.R, d)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c):
        return JElement(self.R, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, o):
        if isinstance(o, JElement):
            return self.R.mul(self, o)
        return self.scale(o)

    def __eq__(self, o):
        if not isinstance(o, JElement):
            return NotImplemented
        keys = set(self.coeffs) | set(o.coeffs)
        return all(self.coeffs.get(k, 0) == o.coeffs.get(k, 0) for k in keys)

    def __hash__(self):
        return hash(frozenset(self.coeffs))

    def __repr__(self):
        ws = self.R.W.word_str
        if not self.coeffs:
            return "0"
        return " + ".join(f"({v!r})j_{ws(k)}" for k, v in sorted(self.coeffs.items()))


@dataclass
class LiftCertificate:
    cell: int
    basis: list                 # the elements w of the cell, in order
    j_matrices: dict            # x -> integer matrix of j_x (columns = images)
    basis_change: list          # P with P rho_S(c_s) = rho_M(varpi(c_s)) P
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())


class JRing:
    def __init__(self, H, cells=None, afun=None, gi=None):
        self.H = H
        self.W = H.W
        self.cells = cells or cell_decomposition(H)
        self.afun = afun or a_function(H)
        self.gi = gi or gamma_table(H, self.cells, self.afun)
        self.a = self.afun.a
        tab = {}
        for (x, y, z), g in self.gi.gamma.items():
            tab.setdefault((x, y), {})[z] = g
        self._tab = tab
        self._cols = {}

    # ------------------------------------------------------------ algebra
    def j(self, x):
        return JElement(self, {x: 1})

    def element(self, coeffs):
        return JElement(self, coeffs)

    def gamma(self, x, y, z):
        return self.gi.g(x, y, z)

    def basis_product(self, x, y):
        return self._tab.get((x, y), {})

    def mul(self, a, b):
        out = {}
        for x, u in a.coeffs.items():
            for y, v in b.coeffs.items():
                row = self._tab.get((x, y))
                if not row:
                    continue
                uv = u * v
                for z, g in row.items():
                    out[z] = out.get(z, 0) + uv * g
        return JElement(self, out)

    def unit(self):
        """Solve for the two-sided unit; must equal sum_d n_d j_d."""
        from .ring import Rationals
        Q = Rationals()
        n = self.W.size
        rows, rhs = [], []
        for y in range(n):
            for z in range(n):
                rows.append([Q.from_int(self.gamma(x, y, z)) for x in range(n)])
                rhs.append(Q.from_int(1 if y == z else 0))
                rows.append([Q.from_int(self.gamma(y, x, z)) for x in range(n)])
                rhs.append(Q.from_int(1 if y == z else 0))
        try:
            u = linalg.FMat(Q).solve(rows, rhs)
        except linalg.NoSolution:
            raise PFailure("J has no two-sided unit") from None
        if any(x.denominator != 1 for x in u):
            raise PFailure("unit of J has non-integral coefficients")
        unit = JElement(self, {x: int(v) for x, v in enumerate(u)})
        expected = JElement(self, {d: self.gi.n[d] for d in self.gi.D})
        if unit != expected:
            raise PFailure("unit of J differs from sum of n_d j_d")
        return unit

    def check_associativity(self, samples=10_000, seed=0):
        """Compare (j_x j_y) j_z with j_x (j_y j_z); exhaustive when small."""
        n = self.W.size
        if n ** 3 <= samples:
            triples = ((x, y, z) for x in range(n) for y in range(n) for z in range(n))
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        bad = []
        for x, y, z in triples:
            a, b, c = self.j(x), self.j(y), self.j(z)
            if (a * b) * c != a * (b * c):
                bad.append((x, y, z))
        return bad

    # ------------------------------------------------------- phi / varpi
    def column(self, w):
        """varpi(c_w) = phi(c_w^dagger) in the j-basis."""
        col = self._cols.get(w)
        if col is not None:
            return col
        a, nh = self.a, self.gi.n_hat
        out = {}
        for d in self.gi.D:
            for z, h in self.H.product(w, d).items():
                if a[z] == a[d]:
                    v = out.get(z, ZERO) + h * nh[z]
                    if v:
                        out[z] = v
                    else:
                        out.pop(z, None)
        col = JElement(self, out)
        self._cols[w] = col
        return col

    def phi_matrix(self):
        n = self.W.size
        M = [[ZERO] * n for _ in range(n)]
        for w in range(n):
            for z, v in self.column(w).coeffs.items():
                M[z][w] = v
        return M

    def phi_determinant(self):
        return linalg.determinant(self.phi_matrix())

    def varpi(self, h):
        h = h.to("C")
        out = JElement(self, {})
        for w, v in h.coeffs.items():
            out = out + self.column(w).scale(v)
        return out

    def phi(self, h):
        """phi(h): expand h in the basis {c_w^dagger} by an exact solve."""
        H = self.H
        n = self.W.size
        B = [[ZERO] * n for _ in range(n)]
        for w in range(n):
            for z, v in H.dagger(H.C(w)).to("C").coeffs.items():
                B[z][w] = v
        target = h.to("C").coeffs
        sol = linalg.solve(B, [target.get(z, ZERO) for z in range(n)])
        out = JElement(self, {})
        for w, v in enumerate(sol):
            if v.num:
                if not v.is_laurent():
                    raise PFailure("h is not a Laurent combination of the c_w^dagger")
                out = out + self.column(w).scale(v.to_laurent())
        return out

    def check_varpi_hom(self):
        """varpi(c_s) varpi(c_w) == varpi(c_s c_w) for all s, w; unital."""
        H = self.H
        bad = []
        for s in range(self.W.rank):
            vs = self.column(self.W.lmul[0][s])
            for w in range(self.W.size):
                lhs = vs * self.column(w)
                rhs = self.varpi(HeckeElement(H, "C", H.cs_c(s, w)))
                if lhs != rhs:
                    bad.append((s, w))
        unital = self.varpi(H.one()) == self.unit()
        return {"multiplicative": not bad, "unital": unital, "failures": bad}

    # -------------------------------------------------------- boxdot
    def boxdot(self, x, w):
        """j_x (.) c_w as {z: gamma_{x,w,z}}."""
        return self._tab.get((x, w), {})

    def boxdot_element(self, j, w):
        out = {}
        for x, u in j.coeffs.items():
            for z, g in self.boxdot(x, w).items():
                out[z] = out.get(z, 0) + u * g
        return {z: v for z, v in out.items() if v}

    def graded_piece(self, a_value):
        return [w for w in range(self.W.size) if self.a[w] == a_value]

    def boxdot_matrix(self, a_value, j):
        """Matrix of j (.) - on span{c_w : a(w) = a_value} (columns = images)."""
        basis = self.graded_piece(a_value)
        pos = {w: k for k, w in enumerate(basis)}
        M = [[0] * len(basis) for _ in basis]
        for w in basis:
            for z, v in self.boxdot_element(j, w).items():
                if z not in pos:
                    raise PFailure("boxdot leaves the a-graded piece")
                M[pos[z]][pos[w]] = v
        return basis, M

    def check_boxdot(self):
        """Stability of the a-filtration and the congruence
        c_s c_w == varpi(c_s) (.) c_w modulo terms with larger a."""
        a = self.a
        unstable, bad = [], []
        n = self.W.size
        for x in range(n):
            for w in range(n):
                if any(a[z] != a[w] for z in self.boxdot(x, w)):
                    unstable.append((x, w))
        for s in range(self.W.rank):
            vs = self.column(self.W.lmul[0][s])
            for w in range(n):
                lhs = {z: v for z, v in self.H.cs_c(s, w).items() if a[z] == a[w]}
                if any(a[z] < a[w] for z in self.H.cs_c(s, w)):
                    bad.append((s, w))
                    continue
                rhs = self.boxdot_element(vs, w)
                keys = set(lhs) | set(rhs)
                if any(lhs.get(z, ZERO) != rhs.get(z, ZERO) for z in keys):
                    bad.append((s, w))
        return {"stable": not unstable, "congruence": not bad,
                "unstable": unstable, "failures": bad}

    # ------------------------------------------------------- cell lifts
    def j_action_on_cell(self, cell):
        ws = self.cells.left_cells[cell]
        pos = {w: k for k, w in enumerate(ws)}
        mats = {}
        closed = True
        for x in range(self.W.size):
            M = [[0] * len(ws) for _ in ws]
            for w in ws:
                for z, g in self.boxdot(x, w).items():
                    if z not in pos:
                        closed = False
                        continue
                    M[pos[z]][pos[w]] = g
            mats[x] = M
        return ws, mats, closed

    def lift_cell_module(self, cell):
        """J-module on span{c_w : w in cell} and a certificate that its
        restriction through varpi is the left cell module."""
        from .hmodules import cell_module
        ws, mats, closed = self.j_action_on_cell(cell)
        k = len(ws)
        S = cell_module(self.H, self.cells, cell)
        checks = {"closed": closed}

        def rho(j):
            M = [[ZERO] * k for _ in range(k)]
            for x, u in j.coeffs.items():
                A = mats[x]
                for r in range(k):
                    for c in range(k):
                        if A[r][c]:
                            M[r][c] = M[r][c] + u * A[r][c]
            return M

        # J-module axioms: unit acts as identity, rho(j_x) rho(j_y) = rho(j_x j_y)
        ident = linalg.identity(k)
        checks["unit"] = rho(self.unit()) == ident
        mult = True
        for x in range(self.W.size):
            for y in range(self.W.size):
                lhs = linalg.mat_mul(rho(self.j(x)), rho(self.j(y)))
                if lhs != rho(self.j(x) * self.j(y)):
                    mult = False
                    break
            if not mult:
                break
        checks["module"] = mult
        targets = [rho(self.column(self.W.lmul[0][s])) for s in range(self.W.rank)]
        P = _intertwiner(S.cs, targets)
        checks["isomorphism"] = P is not None
        return LiftCertificate(cell, ws, mats, P, checks)


def _intertwiner(src, dst):
    """An invertible P with P src[s] = dst[s] P; identity tried first."""
    k = len(src[0]) if src else 0
    I = linalg.identity(k)
    if all(linalg.mat_mul(I, a) == linalg.mat_mul(b, I) for a, b in zip(src, dst)):
        return I
    # general solve: unknowns P[i][j], equations (P A - B P) = 0
    rows = []
    for A, B in zip(src, dst):
        for i in range(k):
            for j in range(k):
                row = [ZERO] * (k * k)
                for m in range(k):
                    if A[m][j]:
                        row[i * k + m] = row[i * k + m] + A[m][j]
                    if B[i][m]:
                        row[m * k + j] = row[m * k + j] - B[i][m]
                rows.append(row)
    basis = linalg.nullspace(rows, k * k)
    rng = random.Random(1)
    for trial in range(len(basis) + 8):
        if trial < len(basis):
            v = basis[trial]
        else:
            v = [ZERO] * (k * k)
            for b in basis:
                c = rng.randint(-3, 3)
                v = [x + y * c for x, y in zip(v, b)]
        P = [v[i * k:(i + 1) * k] for i in range(k)]
        d = linalg.determinant(P)
        if d and d.is_unit():
            return P
    return None


def j_ring(H):
    return JRing(H)
