"""Exact linear algebra.

Two families of routines:

* over Z[t,t^-1] viewed inside Q(t): fraction-free Gauss-Jordan, so every
  intermediate entry is a minor of the input and all divisions are exact;
* over an explicit field object from ``ring`` (Q, Q(sqrt2), GF(p^m)).

Matrices are lists of rows.
"""

from __future__ import annotations

import numpy as np

from .ring import (ONE, ZERO, LaurentPoly, RationalFunction, exact_div,
                   laurent_content_gcd)


class NoSolution(Exception):
    """Raised by ``solve`` when the system is inconsistent."""


# ------------------------------------------------------------ Laurent side

def _as_laurent_matrix(M):
    out = []
    den_rows = []
    for row in M:
        if any(isinstance(x, RationalFunction) for x in row):
            # clear denominators row by row (rank/nullspace are unaffected)
            d = ONE
            for x in row:
                if isinstance(x, RationalFunction) and x.den != ONE:
                    d = d * x.den
            new = []
            for x in row:
                x = RationalFunction.of(x) * d
                new.append(x.to_laurent())
            out.append(new)
        else:
            out.append([x if isinstance(x, LaurentPoly) else LaurentPoly.const(x) for x in row])
        den_rows.append(None)
    return out


class Echelon:
    """Result of fraction-free Gauss-Jordan: ``R = d * RREF`` with pivots at
    ``pivots`` (row i has its pivot in column pivots[i]) and ``d`` the
    final pivot (a nonzero minor of size rank)."""

    def __init__(self, R, pivots, d, perm):
        self.R = R
        self.pivots = pivots
        self.d = d
        self.perm = perm

    @property
    def rank(self):
        return len(self.pivots)


def gauss_jordan(M, ncols=None):
    """Fraction-free Gauss-Jordan elimination over Z[t,t^-1]."""
    A = [list(r) for r in _as_laurent_matrix(M)]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    prev = ONE
    r = 0
    pivots = []
    perm = list(range(m))
    for c in range(n):
        if r == m:
            break
        piv = None
        best = None
        for i in range(r, m):
            x = A[i][c]
            if x:
                # prefer short pivots: keeps degrees down
                size = len(x.c)
                if best is None or size < best:
                    piv, best = i, size
                    if size == 1:
                        break
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            perm[r], perm[piv] = perm[piv], perm[r]
        p = A[r][c]
        rowr = A[r]
        for i in range(m):
            if i == r:
                continue
            rowi = A[i]
            a = rowi[c]
            if not a and prev == ONE:
                rowi[:] = [x * p for x in rowi] if p != ONE else rowi
                continue
            new = []
            for j in range(len(rowi)):
                x = rowi[j] * p
                if a:
                    x = x - a * rowr[j]
                if prev != ONE and x:
                    x = exact_div(x, prev)
                new.append(x)
            A[i] = new
        prev = p
        pivots.append(c)
        r += 1
    return Echelon(A, pivots, prev, perm)


def rank(M):
    if not M:
        return 0
    return gauss_jordan(M).rank


def _primitive_vector(v):
    g = laurent_content_gcd(v)
    if g.c and g != ONE:
        v = [exact_div(x, g) for x in v]
    # unit normalization: first nonzero entry has lowest exponent 0, positive lead
    for x in v:
        if x:
            lo = x.low()
            sgn = -1 if x.c[x.high()] < 0 else 1
            if lo or sgn < 0:
                v = [y.shift(-lo) * sgn for y in v]
            break
    return v


def nullspace(M, ncols=None):
    """Basis of {x : M x = 0} with Laurent entries, content removed.

    One vector per free column; vector for free column f has its entry at
    f nonzero and zeros on the other free columns."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    E = gauss_jordan(M, n)
    piv = set(E.pivots)
    basis = []
    for f in range(n):
        if f in piv:
            continue
        v = [ZERO] * n
        v[f] = E.d
        for i, c in enumerate(E.pivots):
            v[c] = -E.R[i][f]
        basis.append(_primitive_vector(v))
    return basis


def nullspace_rref(M, ncols=None):
    """Reduced-echelon kernel basis over Q(t) plus an integrality flag.

    Each vector has a 1 at its free column and zeros at the other free
    columns.  ``integral`` is True when every entry is Laurent, in which
    case the vectors form a basis of the saturated kernel lattice."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)], True
    E = gauss_jordan(M, n)
    piv = set(E.pivots)
    basis = []
    integral = True
    for f in range(n):
        if f in piv:
            continue
        v = [RationalFunction.of(ZERO)] * n
        v[f] = RationalFunction.of(ONE)
        for i, c in enumerate(E.pivots):
            v[c] = RationalFunction(-E.R[i][f], E.d)
            if not v[c].is_laurent():
                integral = False
        basis.append(v)
    if integral:
        basis = [[x.to_laurent() for x in v] for v in basis]
    return basis, integral


def solve(M, b):
    """One solution x (RationalFunction entries) of M x = b; NoSolution if none."""
    n = len(M[0]) if M else 0
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    E = gauss_jordan(aug, n + 1)
    if E.pivots and E.pivots[-1] == n:
        raise NoSolution("inconsistent system")
    # rows beyond the rank must vanish in the last column
    for i in range(E.rank, len(E.R)):
        if E.R[i][n]:
            raise NoSolution("inconsistent system")
    x = [RationalFunction.of(ZERO)] * n
    for i, c in enumerate(E.pivots):
        x[c] = RationalFunction(E.R[i][n], E.d)
    return x


def invert(M):
    """Inverse over Q(t) as a matrix of RationalFunctions."""
    n = len(M)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(M)]
    E = gauss_jordan(aug, n)
    if E.rank < n:
        raise ZeroDivisionError("singular matrix")
    return [[RationalFunction(E.R[i][n + j], E.d) for j in range(n)] for i in range(n)]


def determinant(M):
    """Determinant in Z[t,t^-1] via fraction-free elimination."""
    n = len(M)
    if n == 0:
        return ONE
    E = gauss_jordan(M, n)
    if E.rank < n:
        return ZERO
    sign = _perm_sign(E.perm)
    return E.d if sign > 0 else -E.d


def _perm_sign(p):
    p = list(p)
    s = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def exact_linalg(M, task):
    if task == "rank":
        return rank(M)
    if task == "nullspace":
        return nullspace(M)
    if task == "invert":
        return invert(M)
    if task == "solve":
        A = [row[:-1] for row in M]
        b = [row[-1] for row in M]
        try:
            return solve(A, b)
        except NoSolution:
            return None
    raise ValueError(f"unknown task {task!r}")


def mat_mul(A, B):
    """Product of Laurent (or RationalFunction) matrices."""
    if not A:
        return []
    n = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else []
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        new = []
        for j in range(n):
            col = Bt[j]
            s = ZERO
            for k, a in nz:
                b = col[k]
                if b:
                    s = s + a * b
            new.append(s)
        out.append(new)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in r] for r in A]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[ZERO] * n for _ in range(m)]


def transpose(A):
    return [list(r) for r in zip(*A)] if A else []


def vec_mat(v, A):
    """Row vector times matrix."""
    n = len(A[0]) if A else 0
    out = [ZERO] * n
    for k, a in enumerate(v):
        if a:
            for j, b in enumerate(A[k]):
                if b:
                    out[j] = out[j] + a * b
    return out


# ------------------------------------------------------------- field side

class FMat:
    """Helpers for matrices over a field object ``F`` (from ``ring``)."""

    def __init__(self, F):
        self.F = F

    def zeros(self, m, n):
        z = self.F.zero()
        return [[z] * n for _ in range(m)]

    def eye(self, n):
        F = self.F
        return [[F.one() if i == j else F.zero() for j in range(n)] for i in range(n)]

    def mul(self, A, B):
        F = self.F
        if not A:
            return []
        n = len(B[0]) if B else 0
        z = F.zero()
        out = []
        if getattr(F, "m", 0) == 1:
            p = F.p
            Bt = list(zip(*B))
            for row in A:
                out.append([sum(a * b for a, b in zip(row, col)) % p for col in Bt])
            return out
        for row in A:
            new = [z] * n
            for k, a in enumerate(row):
                if a == z:
                    continue
                bk = B[k]
                for j in range(n):
                    b = bk[j]
                    if b != z:
                        new[j] = F.add(new[j], F.mul(a, b))
            out.append(new)
        return out

    def vecmul(self, v, A):
        return self.mul([v], A)[0]

    def add(self, A, B):
        F = self.F
        return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

    def sub(self, A, B):
        F = self.F
        return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

    def scale(self, A, c):
        F = self.F
        return [[F.mul(a, c) for a in r] for r in A]

    def transpose(self, A):
        return [list(r) for r in zip(*A)] if A else []

    def rref(self, A):
        """Row-reduced echelon form; returns (R, pivots)."""
        F = self.F
        if getattr(F, "m", 0) == 1 and A and A[0]:
            return _rref_mod_p(A, F.p)
        R = [list(r) for r in A]
        m = len(R)
        n = len(R[0]) if R else 0
        z = F.zero()
        pivots = []
        r = 0
        for c in range(n):
            if r == m:
                break
            piv = next((i for i in range(r, m) if R[i][c] != z), None)
            if piv is None:
                continue
            R[r], R[piv] = R[piv], R[r]
            inv = F.inv(R[r][c])
            R[r] = [F.mul(x, inv) for x in R[r]]
            rowr = R[r]
            for i in range(m):
                if i != r and R[i][c] != z:
                    a = R[i][c]
                    R[i] = [F.sub(x, F.mul(a, y)) for x, y in zip(R[i], rowr)]
            pivots.append(c)
            r += 1
        return R[:r], pivots

    def rank(self, A):
        if not A:
            return 0
        return len(self.rref(A)[1])

    def nullspace(self, A, n=None):
        """Right kernel {x : A x = 0} as a list of vectors."""
        F = self.F
        n = n if n is not None else (len(A[0]) if A else 0)
        if not A:
            return self.eye(n)
        R, piv = self.rref(A)
        ps = set(piv)
        out = []
        for f in range(n):
            if f in ps:
                continue
            v = [F.zero()] * n
            v[f] = F.one()
            for i, c in enumerate(piv):
                v[c] = F.neg(R[i][f])
            out.append(v)
        return out

    def left_nullspace(self, A):
        return self.nullspace(self.transpose(A), len(A))

    def row_space(self, vecs):
        """Echelon basis of the span of the given row vectors."""
        if not vecs:
            return []
        R, _ = self.rref(vecs)
        return R

    def solve(self, A, b):
        F = self.F
        n = len(A[0]) if A else 0
        aug = [list(r) + [bi] for r, bi in zip(A, b)]
        R, piv = self.rref(aug)
        if piv and piv[-1] == n:
            raise NoSolution("inconsistent system")
        x = [F.zero()] * n
        for i, c in enumerate(piv):
            x[c] = R[i][n]
        return x

    def inverse(self, A):
        n = len(A)
        aug = [list(r) + e for r, e in zip(A, self.eye(n))]
        R, piv = self.rref(aug)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("singular matrix over field")
        return [r[n:] for r in R]

    def is_zero(self, A):
        z = self.F.zero()
        return all(x == z for r in A for x in r)

    def trace(self, A):
        F = self.F
        s = F.zero()
        for i in range(len(A)):
            s = F.add(s, A[i][i])
        return s


def _rref_mod_p(A, p):
    """Vectorized reduced echelon form over GF(p) for prime p."""
    M = np.array(A, dtype=np.int64) % p
    m, n = M.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = (M[r] * pow(int(M[r, c]), p - 2, p)) % p
        col = M[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            M[rows] = (M[rows] - np.outer(col[rows], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r].tolist(), pivots


# ------------------------------------------------------------ integer lattices

def _egcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def int_kernel(A, n=None):
    """Z-basis of {x in Z^n : A x = 0} via unimodular column operations."""
    n = n if n is not None else (len(A[0]) if A else 0)
    cols = [[row[j] for row in A] for j in range(n)]
    U = [[1 if i == j else 0 for i in range(n)] for j in range(n)]   # U[j] = column j
    m = len(A)
    p = 0
    for i in range(m):
        if p == n:
            break
        for j in range(p + 1, n):
            b = cols[j][i]
            if not b:
                continue
            a = cols[p][i]
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            cp, cj = cols[p], cols[j]
            cols[p] = [x * u + y * v for u, v in zip(cp, cj)]
            cols[j] = [-bg * u + ag * v for u, v in zip(cp, cj)]
            up, uj = U[p], U[j]
            U[p] = [x * u + y * v for u, v in zip(up, uj)]
            U[j] = [-bg * u + ag * v for u, v in zip(up, uj)]
        if cols[p][i]:
            p += 1
    return [U[j] for j in range(p, n)]


def smith_invariants(M):
    """Nonzero invariant factors of an integer matrix (via sympy)."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors
    if not M or not M[0]:
        return []
    return [int(d) for d in invariant_factors(Matrix(M), domain=ZZ) if d]


def intertwiner_rows(A_list, B_list, m, n):
    """Linear equations (row-major unknowns of an m x n matrix X) for
    A X = X B, one pair (A, B) per generator."""
    rows = []
    for A, B in zip(A_list, B_list):
        for i in range(m):
            for j in range(n):
                row = [ZERO] * (m * n)
                for k in range(m):
                    a = A[i][k]
                    if a:
                        row[k * n + j] = row[k * n + j] + a
                for k in range(n):
                    b = B[k][j]
                    if b:
                        row[i * n + k] = row[i * n + k] - b
                if any(row):
                    rows.append(row)
    return rows


def kernel_with_coords(rows, n):
    """Kernel basis over Z[t,t^-1] plus data to read off coordinates.

    Returns (basis, free, scales, integral): basis vector k has value
    scales[k] at column free[k] and 0 at the other free columns, so the
    coordinate of a kernel vector v is v[free[k]] / scales[k]."""
    if not rows:
        basis = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
        return basis, list(range(n)), [ONE] * n, True
    E = gauss_jordan(rows, n)
    piv = E.pivots
    ps = set(piv)
    free = [f for f in range(n) if f not in ps]
    basis, scales = [], []
    integral = True
    for f in free:
        v = [ZERO] * n
        v[f] = E.d
        for i, c in enumerate(piv):
            v[c] = -E.R[i][f]
        try:
            w = [exact_div(x, E.d) if x else ZERO for x in v]
        except ArithmeticError:
            integral = False
            w = _primitive_vector(v)
        basis.append(w)
        scales.append(w[f])
    return basis, free, scales, integral


def _laurent_divmod(a, b):
    """Quotient/remainder of a by b in Z[t,t^-1] when b's top coefficient is
    +-1: the remainder spans fewer exponents than b (after shifting)."""
    hb, lb = b.high(), b.low()
    cb = b.c[hb]
    if cb not in (1, -1):
        return None
    q = {}
    r = a
    while r and r.high() - r.low() >= hb - lb:
        e = r.high() - hb
        c = r.c[r.high()] * cb
        q[e] = q.get(e, 0) + c
        r = r - LaurentPoly._raw({e: c}, "Z") * b
    return LaurentPoly(q), r


def _width(x):
    return x.high() - x.low()


def unit_echelon(vecs, n=None):
    """Free basis of the Z[t,t^-1]-span of ``vecs`` by unimodular elimination.

    Columns are cleared with unit pivots or, failing that, Euclidean
    reduction by entries with leading coefficient +-1.  A non-unit pivot is
    accepted only when it is the last nonzero entry of its column, so the
    rows stay a free basis of the span.  Returns (basis, pivots); basis row
    k vanishes at pivots[j] for j < k.  Raises ArithmeticError when the
    span cannot be brought into this form."""
    rows = [list(v) for v in vecs if any(v)]
    n = n if n is not None else (len(rows[0]) if rows else 0)
    basis, pivots = [], []
    while rows:
        cols = [c for c in range(n) if any(r[c] for r in rows)]
        choice = None
        for c in cols:
            nz = [i for i, r in enumerate(rows) if r[c]]
            unit = next((i for i in nz if rows[i][c].is_unit()), None)
            if unit is not None or len(nz) == 1:
                choice = (c, unit if unit is not None else nz[0])
                break
        if choice is None:
            for c in cols:
                if _euclid_column(rows, c):
                    break
            else:
                raise ArithmeticError("span is not visibly free over Z[t,t^-1]")
            rows = [r for r in rows if any(r)]
            continue
        c, i = choice
        r = rows.pop(i)
        u = r[c]
        if u.is_unit():
            r = [exact_div(x, u) if x else ZERO for x in r]
            for k, b in enumerate(basis):
                a = b[c]
                if a:
                    basis[k] = [x - a * y for x, y in zip(b, r)]
        new = []
        for s_ in rows:
            a = s_[c]
            if a:
                s_ = [x - a * y for x, y in zip(s_, r)]
            if any(s_):
                new.append(s_)
        rows = new
        basis.append(r)
        pivots.append(c)
    return basis, pivots


def _euclid_column(rows, c):
    """One round of Euclid on column c; True if some entry became a unit
    or the number of nonzero entries dropped."""
    nz = [i for i, r in enumerate(rows) if r[c]]
    before = len(nz)
    for _ in range(200):
        nz = [i for i, r in enumerate(rows) if r[c]]
        if len(nz) < before or any(rows[i][c].is_unit() for i in nz):
            return True
        nz.sort(key=lambda i: _width(rows[i][c]))
        progressed = False
        for b in nz:
            piv = rows[b][c]
            for i in nz:
                if i == b or not rows[i][c]:
                    continue
                qr = _laurent_divmod(rows[i][c], piv)
                if qr is None:
                    qr = _laurent_divmod(rows[i][c], -piv)
                if qr is None:
                    continue
                q, rem = qr
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[b])]
                    progressed = True
            if progressed:
                break
        if not progressed:
            return False
    return False


def echelon_coords(basis, pivots, v):
    """Coordinates of v on a basis from unit_echelon; ArithmeticError if v
    is not in the Laurent span."""
    v = list(v)
    out = []
    for b, c in zip(basis, pivots):
        x = v[c]
        k = exact_div(x, b[c]) if x else ZERO
        out.append(k)
        if k:
            v = [a - k * y for a, y in zip(v, b)]
    if any(v):
        raise ArithmeticError("vector outside the span")
    return out
