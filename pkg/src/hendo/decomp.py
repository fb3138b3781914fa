"""Specialization of algebras and modules, composition factors and
decomposition matrices.

Modules over a field are given by generator matrices acting on row
vectors (v -> v G).  A left module with column matrices is converted by
transposing; invariant subspaces and traces are unchanged, so factors of
modules converted the same way are directly comparable.

Composition factors use a MeatAxe: a random algebra element a, a factor
f of its characteristic polynomial, the kernel of f(a), spinning, and
Norton's irreducibility test.  The answer is never wrong; if the retry
budget runs out an ``Inconclusive`` is raised.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import FMat
from .ring import (FiniteField, Rationals, SpecializationTarget, UnsupportedTarget,
                   specialize)


class Inconclusive(RuntimeError):
    """Retry budget exhausted without a certified answer."""


class PreconditionError(ValueError):
    pass


DEFAULT_DIM_CAP = 200
FINGERPRINT_WORDS = 16


# --------------------------------------------------------------- triples

@dataclass
class TripleSpec:
    """Where t is sent.

    ``kind`` is "DVR" (t goes straight to an element of the residue field)
    or "Laurent" (O[t,t^-1] localized at (r, t - a); the middle fiber is Q
    with t = a, the residue field is F_r with t = a mod r)."""
    kind: str
    r: int
    m: int = 1
    t_image: object = None
    a: int | None = None
    sqrt2: bool = False

    def __post_init__(self):
        if self.r == 0:
            raise ValueError("residue characteristic must be nonzero")
        if self.kind not in ("DVR", "Laurent"):
            raise ValueError("kind is 'DVR' or 'Laurent'")
        if self.kind == "Laurent":
            if self.a is None:
                raise ValueError("Laurent triples need an integer a")
            if self.m != 1:
                raise ValueError("Laurent triples use the prime field")
            if self.a % self.r == 0:
                raise ValueError("t - a with r | a: image of t not invertible")
            self.t_image = self.a % self.r
        F = self.field()
        if self.sqrt2:
            F.sqrt2()
        if self.t_image is None:
            raise ValueError("t_image required")

    def field(self):
        return FiniteField(self.r, self.m)

    def target(self):
        return SpecializationTarget(self.field(), self.t_image)

    def middle_target(self):
        """t = a over Q (Laurent kind only)."""
        if self.kind != "Laurent":
            raise ValueError("only Laurent triples have a middle fiber")
        return SpecializationTarget(Rationals(), self.a)

    def describe(self):
        d = {"kind": self.kind, "r": self.r, "m": self.m, "t": self.t_image}
        if self.kind == "Laurent":
            d["maximal_ideal"] = [str(self.r), f"t - {self.a}"]
        return d


def triple_with_q(r, m, q):
    """DVR triple over GF(r^m) with t a chosen square root of q."""
    F = FiniteField(r, m)
    t = F.sqrt(F.from_int(q))
    if t is None:
        raise UnsupportedTarget(f"{q} is not a square in {F.name}")
    return TripleSpec("DVR", r, m, t)


# ------------------------------------------------------------ specialize

def specialize_matrix(M, target):
    return [[specialize(x, target) for x in row] for row in M]


def specialize_module(M, target):
    """Row-convention generator matrices over the target field."""
    mats = M.column_matrices() if hasattr(M, "column_matrices") else M
    out = []
    for A in mats:
        S = specialize_matrix(A, target)
        out.append([list(r) for r in zip(*S)] if S else [])
    return FModule(target.field, out)


def hecke_structure_constants(H):
    """T_x T_y = sum_z c T_z for all x, y (T-basis)."""
    n = H.W.size
    table = {}
    for x in range(n):
        for y in range(n):
            table[(x, y)] = dict(H.mul(H.T(x), H.T(y), "T").coeffs)
    return table


def specialize_algebra(obj, target):
    """Specialize a Hecke algebra (T-basis table), an endomorphism algebra
    (structure constants) or a based module (action matrices)."""
    if hasattr(obj, "structure"):                       # EndoAlgebra
        table = {k: {z: specialize(v, target) for z, v in row.items()}
                 for k, row in obj.structure.items()}
        return SpecializedAlgebra(target.field, obj.dim, table, [specialize(u, target) for u in obj.unit_vector()])
    if hasattr(obj, "W"):                               # HeckeAlgebra
        tab = hecke_structure_constants(obj)
        table = {k: {z: specialize(v, target) for z, v in row.items()} for k, row in tab.items()}
        unit = [target.field.zero()] * obj.W.size
        unit[0] = target.field.one()
        return SpecializedAlgebra(target.field, obj.W.size, table, unit)
    return specialize_module(obj, target)


@dataclass
class SpecializedAlgebra:
    F: object
    dim: int
    table: dict              # (i, j) -> {k: coeff}
    unit: list

    def mul_vec(self, u, v):
        F = self.F
        out = [F.zero()] * self.dim
        for i, a in enumerate(u):
            if a == F.zero():
                continue
            for j, b in enumerate(v):
                if b == F.zero():
                    continue
                ab = F.mul(a, b)
                for k, c in self.table.get((i, j), {}).items():
                    out[k] = F.add(out[k], F.mul(ab, c))
        return out

    def basis_vec(self, i):
        F = self.F
        v = [F.zero()] * self.dim
        v[i] = F.one()
        return v

    def check_unit(self):
        return all(self.mul_vec(self.unit, self.basis_vec(i)) == self.basis_vec(i)
                   and self.mul_vec(self.basis_vec(i), self.unit) == self.basis_vec(i)
                   for i in range(self.dim))

    def left_regular(self):
        """Left regular module as an FModule (row convention)."""
        F = self.F
        gens = []
        for b in range(self.dim):
            # row j of the row-convention matrix = image of basis j
            G = [[F.zero()] * self.dim for _ in range(self.dim)]
            for j in range(self.dim):
                for k, c in self.table.get((b, j), {}).items():
                    G[j][k] = c
            gens.append(G)
        return FModule(F, gens)


# --------------------------------------------------------- polynomials

def _pstrip(f, F):
    while f and f[-1] == F.zero():
        f.pop()
    return f


def _pmod(a, b, F):
    a = list(a)
    inv = F.inv(b[-1])
    while len(a) >= len(b) and a:
        c = F.mul(a[-1], inv)
        s = len(a) - len(b)
        for i, x in enumerate(b):
            a[s + i] = F.sub(a[s + i], F.mul(c, x))
        _pstrip(a, F)
    return a


def charpoly(A, F):
    """Characteristic polynomial (low to high) via Hessenberg reduction."""
    n = len(A)
    H = [list(r) for r in A]
    z = F.zero()
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1] != z), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for r in H:
                r[piv], r[m] = r[m], r[piv]
        inv = F.inv(H[m][m - 1])
        for i in range(m + 1, n):
            u = F.mul(H[i][m - 1], inv)
            if u == z:
                continue
            for j in range(n):
                H[i][j] = F.sub(H[i][j], F.mul(u, H[m][j]))
            for r in H:
                r[m] = F.add(r[m], F.mul(u, r[i]))
    # recurrence on leading principal submatrices
    polys = [[F.one()]]
    for k in range(1, n + 1):
        # p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{i,k} prod h_{j,j-1} p_{i-1}
        prev = polys[k - 1]
        p = [z] + list(prev)
        for i, c in enumerate(prev):
            p[i] = F.sub(p[i], F.mul(H[k - 1][k - 1], c))
        prod = F.one()
        for i in range(k - 1, 0, -1):
            prod = F.mul(prod, H[i][i - 1])
            c = F.mul(prod, H[i - 1][k - 1])
            if c != z:
                for j, x in enumerate(polys[i - 1]):
                    p[j] = F.sub(p[j], F.mul(c, x))
        polys.append(p)
    return polys[n]


def _irreducible_quadratics(F):
    key = F.size
    cache = _irreducible_quadratics.__dict__.setdefault("cache", {})
    if key not in cache:
        out = []
        els = list(F.elements())
        for b in els:
            for c in els:
                if all(F.add(F.add(F.mul(x, x), F.mul(b, x)), c) != F.zero() for x in els):
                    out.append([c, b, F.one()])
        cache[key] = out
    return cache[key]


def candidate_factors(f, F):
    """Irreducible factors of f that the splitter can use."""
    if isinstance(F, Rationals):
        import sympy
        x = sympy.Symbol("x")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(f))
        out = []
        for g, _ in sympy.factor_list(expr)[1]:
            cs = sympy.Poly(g, x).all_coeffs()[::-1]
            lead = Fraction(int(sympy.numer(cs[-1])), int(sympy.denom(cs[-1])))
            out.append([Fraction(int(sympy.numer(c)), int(sympy.denom(c))) / lead for c in cs])
        return sorted(out, key=len)
    if getattr(F, "m", 0) == 1:
        import sympy
        x = sympy.Symbol("x")
        P = sympy.Poly([int(c) for c in reversed(f)], x, modulus=F.p)
        out = []
        for g, _ in P.factor_list()[1]:
            cs = [int(c) % F.p for c in g.all_coeffs()[::-1]]
            inv = pow(cs[-1], F.p - 2, F.p)
            out.append([c * inv % F.p for c in cs])
        return sorted(out, key=len)
    out = []
    for r in F.elements():
        v = F.zero()
        for c in reversed(f):
            v = F.add(F.mul(v, r), c)
        if v == F.zero():
            out.append([F.neg(r), F.one()])
    if F.size <= 64:
        for q in _irreducible_quadratics(F):
            if not _pmod(f, q, F):
                out.append(q)
    return out


# --------------------------------------------------------------- modules

class FModule:
    """Module over a field: generator matrices acting on row vectors."""

    def __init__(self, F, gens):
        self.F = F
        self.gens = gens
        self.dim = len(gens[0]) if gens else 0
        self.M = FMat(F)

    def spin(self, vecs, transpose=False):
        """Echelon basis of the smallest invariant subspace containing vecs."""
        gens = [self.M.transpose(G) for G in self.gens] if transpose else self.gens
        F = self.F
        basis, pivots = [], []

        def reduce(v):
            v = list(v)
            for b, p in zip(basis, pivots):
                c = v[p]
                if c != F.zero():
                    v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, b)]
            return v

        def add(v):
            v = reduce(v)
            p = next((i for i, x in enumerate(v) if x != F.zero()), None)
            if p is None:
                return False
            inv = F.inv(v[p])
            v = [F.mul(x, inv) for x in v]
            for k, b in enumerate(basis):
                c = b[p]
                if c != F.zero():
                    basis[k] = [F.sub(x, F.mul(c, y)) for x, y in zip(b, v)]
            basis.append(v)
            pivots.append(p)
            return True

        queue = []
        for v in vecs:
            if add(v):
                queue.append(basis[-1])
        while queue and len(basis) < self.dim:
            v = queue.pop()
            for G in gens:
                w = self.M.vecmul(v, G)
                if add(w):
                    queue.append(basis[-1])
        return basis

    def split(self, sub):
        """(submodule, quotient) for an invariant subspace with echelon basis ``sub``."""
        F = self.F
        k, n = len(sub), self.dim
        piv = [next(i for i, x in enumerate(v) if x != F.zero()) for v in sub]
        rest = [i for i in range(n) if i not in set(piv)]
        P = [list(v) for v in sub] + [[F.one() if j == i else F.zero() for j in range(n)] for i in rest]
        Pinv = self.M.inverse(P)
        subg, quog = [], []
        for G in self.gens:
            N = self.M.mul(self.M.mul(P, G), Pinv)
            subg.append([r[:k] for r in N[:k]])
            quog.append([r[k:] for r in N[k:]])
        return FModule(F, subg), FModule(F, quog)

    def element(self, coeffs_words):
        """Matrix of sum c * (product of generators along word)."""
        n = self.dim
        out = self.M.zeros(n, n)
        for c, word in coeffs_words:
            A = self.M.eye(n)
            for g in word:
                A = self.M.mul(A, self.gens[g])
            out = self.M.add(out, self.M.scale(A, c))
        return out

    def fingerprint(self, seed=0):
        rng = random.Random(seed)
        ng = len(self.gens)
        traces = []
        for _ in range(FINGERPRINT_WORDS):
            word = [rng.randrange(ng) for _ in range(rng.randint(1, 6))] if ng else []
            A = self.element([(self.F.one(), word)])
            traces.append(self.M.trace(A))
        return (self.dim, tuple(traces))

    def hom_dim(self, other):
        """dim Hom(self, other): X with G_self X = X G_other."""
        F, n, m = self.F, self.dim, other.dim
        rows = []
        for A, B in zip(self.gens, other.gens):
            for i in range(n):
                for j in range(m):
                    row = [F.zero()] * (n * m)
                    for k in range(n):
                        if A[i][k] != F.zero():
                            row[k * m + j] = F.add(row[k * m + j], A[i][k])
                    for k in range(m):
                        if B[k][j] != F.zero():
                            row[i * m + k] = F.sub(row[i * m + k], B[k][j])
                    rows.append(row)
        if not rows:
            return n * m
        return n * m - self.M.rank(rows)

    def is_isomorphic(self, other):
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        # for irreducible modules a nonzero homomorphism is an isomorphism
        return self.hom_dim(other) > 0

    def end_dim(self):
        return self.hom_dim(self)


def _poly_at(f, A, M):
    n = len(A)
    R = M.zeros(n, n)
    for c in reversed(f):
        R = M.mul(R, A)
        for i in range(n):
            R[i][i] = M.F.add(R[i][i], c)
    return R


def _random_element(mod, rng):
    """Random combination of all generators plus a few short products."""
    F = mod.F
    ng = len(mod.gens)

    def coeff():
        return F.random(rng) if hasattr(F, "random") and getattr(F, "size", 0) else F.from_int(rng.randint(-3, 3))

    terms = [(coeff(), [g]) for g in range(ng)]
    for _ in range(3):
        terms.append((coeff(), [rng.randrange(ng) for _ in range(rng.randint(2, 3))]))
    return mod.element(terms)


def find_submodule(mod, rng, budget=60):
    """A proper invariant subspace, or None if the module is irreducible."""
    F, n = mod.F, mod.dim
    if n <= 1:
        return None
    M = mod.M
    for _ in range(budget):
        A = _random_element(mod, rng)
        cp = charpoly(A, F)
        for f in candidate_factors(cp, F):
            theta = _poly_at(f, A, M)
            ker = M.nullspace(M.transpose(theta))      # row vectors v with v theta = 0
            if not ker:
                continue
            S = mod.spin([ker[0]])
            if len(S) < n:
                return S
            if len(ker) == len(f) - 1:
                # Norton: also spin a kernel vector of theta^T in the dual
                kerT = M.nullspace(theta)
                U = mod.spin([kerT[0]], transpose=True)
                if len(U) < n:
                    # annihilator of U is a proper submodule
                    ann = M.nullspace(U)
                    return mod.spin(ann)
                return None
    raise Inconclusive("MeatAxe retry budget exhausted")


@dataclass
class Factor:
    module: FModule
    multiplicity: int
    fingerprint: tuple
    split: bool = True

    @property
    def dim(self):
        return self.module.dim


def composition_factors(mod, seed=0, cap=DEFAULT_DIM_CAP):
    if mod.dim > cap:
        raise PreconditionError(f"module dimension {mod.dim} exceeds cap {cap}")
    rng = random.Random(seed)
    stack = [mod]
    irr = []
    while stack:
        m = stack.pop()
        if m.dim == 0:
            continue
        S = find_submodule(m, rng)
        if S is None:
            irr.append(m)
        else:
            a, b = m.split(S)
            stack.extend([b, a])
    return collect_factors(irr, seed)


def collect_factors(modules, seed=0, known=None):
    """Group irreducibles into isomorphism classes (fingerprint, then explicit test)."""
    classes = list(known or [])
    for m in modules:
        fp = m.fingerprint(seed)
        for c in classes:
            if c.fingerprint == fp and c.module.is_isomorphic(m):
                c.multiplicity += 1
                break
        else:
            classes.append(Factor(m, 1, fp, m.end_dim() == 1))
    return classes


# ------------------------------------------------------------ matrices

@dataclass
class DecompositionMatrix:
    rows: list               # Factor objects (modular irreducibles)
    cols: list               # labels of generic irreducibles
    entries: list            # rows x cols nonnegative integers
    notes: dict = field(default_factory=dict)

    def row_labels(self):
        return [{"dim": f.dim, "fingerprint": list(map(str, f.fingerprint[1])), "split": f.split}
                for f in self.rows]

    def to_json(self):
        return {"cols": list(map(str, self.cols)), "rows": self.row_labels(),
                "entries": self.entries, "notes": self.notes}

    def to_csv(self):
        lines = ["row," + ",".join(map(str, self.cols))]
        for k, r in enumerate(self.entries):
            lines.append(f"L{k}(dim {self.rows[k].dim})," + ",".join(map(str, r)))
        return "\n".join(lines) + "\n"


def _matrix_from_factor_lists(lists, col_labels, seed):
    rows = []
    counts = []
    for facs in lists:
        cnt = {}
        for f in facs:
            for k, r in enumerate(rows):
                if r.fingerprint == f.fingerprint and r.module.is_isomorphic(f.module):
                    cnt[k] = cnt.get(k, 0) + f.multiplicity
                    break
            else:
                rows.append(Factor(f.module, 0, f.fingerprint, f.split))
                cnt[len(rows) - 1] = f.multiplicity
        counts.append(cnt)
    # order rows by the first column in which they occur
    first = [min(j for j, c in enumerate(counts) if k in c) for k in range(len(rows))]
    order = sorted(range(len(rows)), key=lambda k: (first[k], k))
    entries = [[counts[j].get(k, 0) for j in range(len(lists))] for k in order]
    return DecompositionMatrix([rows[k] for k in order], col_labels, entries)


def decomposition_matrix(lattices, target, labels=None, seed=0, generic_check=True):
    """Decomposition matrix from integral lattices of generic irreducibles.

    ``lattices`` are objects with Laurent action matrices (BasedModule,
    or anything with column_matrices()/ a list of matrices)."""
    labels = labels if labels is not None else list(range(len(lattices)))
    if generic_check:
        for k, L in enumerate(lattices):
            if generic_commutant_dim(L) != 1:
                raise PreconditionError(f"lattice {labels[k]} has a reducible generic fiber")
    lists = []
    for L in lattices:
        mod = specialize_module(L, target)
        lists.append(composition_factors(mod, seed))
    D = _matrix_from_factor_lists(lists, labels, seed)
    D.notes["field"] = target.field.describe() if hasattr(target.field, "describe") else str(target.field)
    D.notes["non_split_rows"] = [k for k, f in enumerate(D.rows) if not f.split]
    return D


def laurent_route(lattices, triple, labels=None, seed=0):
    """Decomposition through the middle fiber t = a over Q, then to F_r.

    Returns (D_direct, D_first, D_second, product_matches)."""
    labels = labels if labels is not None else list(range(len(lattices)))
    direct = decomposition_matrix(lattices, triple.target(), labels, seed, generic_check=False)
    mid = triple.middle_target()
    mid_lists = [composition_factors(specialize_module(L, mid), seed) for L in lattices]
    first = _matrix_from_factor_lists(mid_lists, labels, seed)
    # reduce each middle-fiber irreducible via an r-local integral form
    Fr = triple.field()
    second_lists = []
    for f in first.rows:
        integral = _local_lattice(f.module, triple.r)
        red = FModule(Fr, [[[Fr.from_int(x) for x in row] for row in G] for G in integral])
        second_lists.append(composition_factors(red, seed))
    # rows of the second factor must be matched against the direct rows
    second = _matrix_from_factor_lists(second_lists, list(range(len(first.rows))), seed)
    # align second's rows to direct's rows
    align = []
    for f in second.rows:
        k = next((k for k, g in enumerate(direct.rows)
                  if g.fingerprint == f.fingerprint and g.module.is_isomorphic(f.module)), None)
        align.append(k)
    ok = None not in align
    prod = [[0] * len(labels) for _ in direct.rows]
    if ok:
        for i2, k in enumerate(align):
            for j in range(len(labels)):
                prod[k][j] += sum(second.entries[i2][m] * first.entries[m][j] for m in range(len(first.rows)))
    matches = ok and prod == direct.entries
    split_semisimple = all(sum(c) == 1 for c in zip(*first.entries)) and all(
        f.split for f in first.rows)
    return {"direct": direct, "first": first, "second": second,
            "matches": matches, "middle_split_semisimple": split_semisimple}


def _local_lattice(mod, r, start=None):
    """Integer matrices (mod r) of an r-integral form of a module over Q.

    Start from the standard lattice and add images under the generators
    until the lattice is stable; the Z_(r)-order generated by the action
    is finitely generated, so this terminates."""
    from sympy import Matrix, Rational
    n = mod.dim
    gens = [Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in G]) for G in mod.gens]
    if start is None:
        basis = Matrix.eye(n)
    else:
        basis = _local_hnf(Matrix([[Rational(x.numerator, x.denominator) for x in v] for v in start]), r)
    for _ in range(64):
        if basis.rows < n:
            basis = _local_hnf(Matrix.vstack(basis, *[basis * G for G in gens]), r)
            if basis.rows < n:
                return None
            continue
        Binv = basis.inv()
        conj = [basis * G * Binv for G in gens]
        if all(_val(x, r) >= 0 for N in conj for x in N if x != 0):
            return [[[_to_local_int(x, r) for x in N.row(i)] for i in range(n)] for N in conj]
        rows = [basis.row(i) for i in range(n)] + [basis.row(i) * G for G in gens for i in range(n)]
        basis = _local_hnf(Matrix.vstack(*rows), r)
    raise Inconclusive("no stable r-local lattice found")


def _to_local_int(x, r):
    from sympy import Rational
    x = Rational(x)
    if x.q % r == 0:
        raise PreconditionError("lattice is not r-integral")
    return int(x.p * pow(int(x.q), -1, r)) % r


def _local_hnf(M, r):
    """Row basis of the Z_(r)-span of the rows of M (rational entries),
    as an n x n rational matrix in echelon form over Z_(r)."""
    from sympy import Matrix, Rational
    rows = [list(map(Rational, M.row(i))) for i in range(M.rows)]
    n = M.cols
    out = []
    for c in range(n):
        # pick the row with minimal r-valuation in column c
        best, bv = None, None
        for k, row in enumerate(rows):
            x = row[c]
            if x != 0:
                v = _val(x, r)
                if bv is None or v < bv:
                    best, bv = k, v
        if best is None:
            continue
        piv = rows.pop(best)
        scale = Rational(r) ** bv / piv[c]
        piv = [x * scale for x in piv]       # pivot becomes r^bv (unit multiple removed)
        new_rows = []
        for row in rows:
            if row[c] != 0:
                f = row[c] / piv[c]           # r-integral since valuation >= bv
                row = [x - f * y for x, y in zip(row, piv)]
            new_rows.append(row)
        rows = new_rows
        out.append(piv)
    return Matrix(out)


def _val(x, r):
    from sympy import Rational
    x = Rational(x)
    v = 0
    p, q = int(x.p), int(x.q)
    while p % r == 0:
        p //= r
        v += 1
    while q % r == 0:
        q //= r
        v -= 1
    return v


def lattice_independence(L, triple, seed=0):
    """Compare the reduction of L with the reduction of a second lattice:
    the Z_(r)-span of the orbit of a single basis vector of the middle fiber."""
    if triple.kind != "Laurent":
        raise ValueError("needs a Laurent triple (integer t-image)")
    F = triple.field()
    first = specialize_module(L, triple.target())
    mid = specialize_module(L, triple.middle_target())
    n = mid.dim
    r = triple.r
    starts = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    if n > 1:
        starts += [[Fraction(1), Fraction(c)] + [Fraction(0)] * (n - 2) for c in range(1, r)]
        starts += [[Fraction(r), Fraction(1)] + [Fraction(0)] * (n - 2)]
    second, j_used = None, None
    for j, v in enumerate(starts):
        mats = _local_lattice(mid, r, start=[v])
        if mats is None:
            continue
        cand = FModule(F, [[[F.from_int(x) for x in row] for row in G] for G in mats])
        if second is None:
            second, j_used = cand, j
        if cand.gens != first.gens:
            second, j_used = cand, j
            break
    if second is None:
        return {"second_lattice": False, "agree": None}
    j = j_used
    a = composition_factors(first, seed)
    b = composition_factors(second, seed)
    D = _matrix_from_factor_lists([a, b], ["first", "second"], seed)
    agree = all(r[0] == r[1] for r in D.entries)
    differs = second.gens != first.gens
    return {"second_lattice": True, "generator": j, "differs": differs, "agree": agree}


def generic_commutant_dim(L):
    """dim over Q(t) of the commutant of the Laurent action matrices."""
    from . import linalg
    from .ring import ZERO
    mats = L.column_matrices() if hasattr(L, "column_matrices") else L
    n = len(mats[0]) if mats else 0
    rows = []
    for A in mats:
        for i in range(n):
            for j in range(n):
                row = [ZERO] * (n * n)
                for k in range(n):
                    if A[i][k]:
                        row[k * n + j] = row[k * n + j] + A[i][k]
                    if A[k][j]:
                        row[i * n + k] = row[i * n + k] - A[k][j]
                rows.append(row)
    return n * n - linalg.rank(rows) if rows else n * n


def unitriangularity_check(D, col_order=None, order=None):
    """Verdicts: cols >= rows, zero below the diagonal, ones on it.

    ``order`` (a Preorder on the column labels) is checked to be linearized
    by ``col_order`` when given."""
    if order is not None and col_order is not None and not order.is_linearization(col_order):
        raise PreconditionError("column order does not linearize the poset")
    E = D.entries if hasattr(D, "entries") else D
    m = len(E)
    n = len(E[0]) if E else 0
    wide = n >= m
    lower_zero = all(E[i][j] == 0 for i in range(m) for j in range(n) if i > j)
    diag = all(E[i][i] == 1 for i in range(min(m, n)))
    return {"square": m == n and lower_zero and diag, "cols_ge_rows": wide,
            "lower_zero": lower_zero, "unit_diagonal": diag,
            "unitriangular": wide and lower_zero and diag}


def rows_removed(D_small, D_big):
    """Is D_small obtained from D_big by deleting rows (same columns)?"""
    big = [tuple(r) for r in (D_big.entries if hasattr(D_big, "entries") else D_big)]
    small = [tuple(r) for r in (D_small.entries if hasattr(D_small, "entries") else D_small)]
    pool = list(big)
    for r in small:
        if r in pool:
            pool.remove(r)
        else:
            return False
    return True


def radical(alg, seed=0):
    """Jacobson radical of a specialized algebra: common kernel of the
    action on all composition factors of the regular module."""
    reg = alg.left_regular()
    facs = composition_factors(reg, seed)
    F = alg.F
    M = FMat(F)
    cols = []
    for f in facs:
        d = f.module.dim
        for i in range(d):
            for j in range(d):
                cols.append([f.module.gens[b][i][j] for b in range(alg.dim)])
    if not cols:
        return [alg.basis_vec(i) for i in range(alg.dim)], facs
    rad = M.nullspace(cols, alg.dim)
    return rad, facs


def is_split_semisimple(alg, seed=0):
    rad, facs = radical(alg, seed)
    return (not rad) and all(f.split for f in facs) and \
        sum(f.dim ** 2 for f in facs) == alg.dim
