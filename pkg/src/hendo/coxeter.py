"""Finite weighted Coxeter systems (W, S, L).

Elements are realized as permutations of the root system of the
geometric representation; root coordinates are exact (integers, or
a + b*sqrt2 pairs for dihedral groups of order 16).  Elements are numbered
0..|W|-1 in ShortLex order of their reduced words, so 0 is the identity.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

from .ring import ZSqrt2

DEFAULT_CAP = 10 ** 6


class CapExceeded(RuntimeError):
    """Enumeration passed the element cap (infinite or too-large group)."""


class SystemMismatch(ValueError):
    pass


# 4cos^2(pi/m), which must be the product of the two off-diagonal Cartan entries
_COS2 = {2: 0, 3: 1, 4: 2, 6: 3, 8: ZSqrt2(2, 1)}


def _is_positive(x):
    if isinstance(x, int):
        return x > 0
    # a + b*sqrt2 > 0
    a, b = x.a, x.b
    if a >= 0 and b >= 0:
        return bool(a or b)
    if a <= 0 and b <= 0:
        return False
    if a > 0:
        return a * a > 2 * b * b
    return 2 * b * b > a * a


@dataclass(frozen=True)
class Element:
    system: "WeightedCoxeterSystem"
    index: int

    @property
    def shortlex_word(self):
        return self.system.words[self.index]

    @property
    def root_permutation(self):
        return self.system.root_perm(self.index)

    def __mul__(self, other):
        if other.system is not self.system:
            raise SystemMismatch("elements of different systems")
        return Element(self.system, self.system.mul(self.index, other.index))

    def __repr__(self):
        return self.system.name_of(self.index)


class WeightedCoxeterSystem:
    def __init__(self, matrix, weights=None, tag=None, cap=DEFAULT_CAP):
        n = len(matrix)
        M = [list(map(int, r)) for r in matrix]
        for i in range(n):
            if len(M[i]) != n:
                raise ValueError("Coxeter matrix must be square")
            for j in range(n):
                if M[i][j] != M[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if i == j:
                    if M[i][i] not in (1, 2):
                        raise ValueError("diagonal entries must be 1")
                elif M[i][j] < 2:
                    raise ValueError("off-diagonal entries must be >= 2 (infinity is not allowed)")
        for i in range(n):
            M[i][i] = 1
        if weights is None:
            weights = [1] * n
        weights = [int(x) for x in weights]
        if len(weights) != n or any(x <= 0 for x in weights):
            raise ValueError("weights must be positive integers, one per generator")
        self.rank = n
        self.matrix = M
        self.weights = weights
        self.tag = tag
        self.cap = cap
        self._check_weights()
        self._build_roots()
        self._enumerate()
        self._bruhat = None
        self._parabolic = {}

    # -------------------------------------------------------------- setup
    def _check_weights(self):
        # generators joined by an odd bond are conjugate, so must share L
        n = self.rank
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] % 2 == 1:
                    parent[find(i)] = find(j)
        for i in range(n):
            for j in range(n):
                if find(i) == find(j) and self.weights[i] != self.weights[j]:
                    raise ValueError("weights must agree on conjugate generators (odd bonds)")

    def _cartan(self):
        n = self.rank
        use_sqrt2 = any(self.matrix[i][j] == 8 for i in range(n) for j in range(n))
        A = [[0] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = 2
            for j in range(i + 1, n):
                m = self.matrix[i][j]
                if m not in _COS2:
                    raise ValueError(f"m = {m} needs a coefficient field beyond Z[sqrt2]")
                c = _COS2[m]
                if m == 2:
                    A[i][j] = A[j][i] = 0
                else:
                    A[i][j] = -1
                    A[j][i] = -c
        if use_sqrt2:
            A = [[ZSqrt2.coerce(x) for x in r] for r in A]
        return A, use_sqrt2

    def _build_roots(self):
        A, sq = self._cartan()
        n = self.rank
        zero = ZSqrt2(0) if sq else 0
        one = ZSqrt2(1) if sq else 1

        def reflect(i, beta):
            # s_i(beta) = beta - <beta, alpha_i^vee> alpha_i,  <alpha_j, alpha_i^vee> = A[i][j]
            c = zero
            for j in range(n):
                if beta[j]:
                    c = c + A[i][j] * beta[j]
            out = list(beta)
            out[i] = out[i] - c
            return tuple(out)

        simple = [tuple(one if k == j else zero for k in range(n)) for j in range(n)]
        roots = list(simple)
        index = {r: k for k, r in enumerate(roots)}
        queue = deque(roots)
        limit = max(self.cap, 64)
        while queue:
            beta = queue.popleft()
            for i in range(n):
                g = reflect(i, beta)
                if g not in index:
                    index[g] = len(roots)
                    roots.append(g)
                    queue.append(g)
                    if len(roots) > 2 * limit:
                        raise CapExceeded("root system exceeds the enumeration cap (infinite group?)")
        self.roots = roots
        self.root_index = index
        # every root has all coordinates >= 0 or all <= 0
        self.positive = [any(_is_positive(x) for x in r) for r in roots]
        self.gen_perm = [tuple(index[reflect(i, r)] for r in roots) for i in range(n)]
        self.nsimple = n

    def _enumerate(self):
        n = self.rank
        ident = tuple(range(len(self.roots)))
        key = lambda p: p[:n]  # images of simple roots determine the element
        perms = [ident]
        words = [()]
        lookup = {key(ident): 0}
        right = []
        layer = [0]
        while layer:
            nxt = []
            for w in layer:
                pw = perms[w]
                row = [None] * n
                for s in range(n):
                    ps = self.gen_perm[s]
                    q = tuple(pw[ps[k]] for k in range(len(ps)))  # w*s
                    k = key(q)
                    if k in lookup:
                        row[s] = lookup[k]
                    else:
                        idx = len(perms)
                        if idx >= self.cap:
                            raise CapExceeded(f"group has more than {self.cap} elements")
                        lookup[k] = idx
                        perms.append(q)
                        words.append(words[w] + (s,))
                        nxt.append(idx)
                        row[s] = idx
                right.append(row)
            layer = nxt
        # right[] was filled in BFS order, which is index order
        self.size = len(perms)
        self._perms = perms
        self.words = words
        self.rmul = right
        self.length = [len(w) for w in words]
        self.L = [sum(self.weights[s] for s in w) for w in words]
        # left multiplication by generators and inverses
        self._lookup = lookup
        self.lmul = [[lookup[key(tuple(self.gen_perm[s][p[k]] for k in range(len(p))))] for s in range(n)]
                     for p in perms]
        self.inverse = [self._word_to_index(tuple(reversed(w))) for w in words]
        self.word_index = {w: i for i, w in enumerate(words)}
        self.w0 = max(range(self.size), key=lambda i: (self.length[i], -i))
        self._verify_relations()

    def _verify_relations(self):
        n = self.rank
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                m = self.matrix[i][j]
                w = 0
                for _ in range(m):
                    w = self.rmul[self.rmul[w][i]][j]
                if w != 0:
                    raise ValueError("geometric representation does not satisfy the braid relations")

    def _word_to_index(self, word):
        w = 0
        for s in word:
            w = self.rmul[w][s]
        return w

    # -------------------------------------------------------------- basics
    def root_perm(self, w):
        return self._perms[w]

    def element(self, w):
        return Element(self, w)

    def elements(self):
        return range(self.size)

    def index_of_word(self, word):
        return self._word_to_index(tuple(word))

    def mul(self, a, b):
        for s in self.words[b]:
            a = self.rmul[a][s]
        return a

    def sign(self, w):
        return -1 if self.length[w] % 2 else 1

    def right_descents(self, w):
        return frozenset(s for s in range(self.rank) if self.length[self.rmul[w][s]] < self.length[w])

    def left_descents(self, w):
        return frozenset(s for s in range(self.rank) if self.length[self.lmul[w][s]] < self.length[w])

    def descent_sets(self, w):
        return self.left_descents(w), self.right_descents(w)

    def name_of(self, w):
        if w == 0:
            return "e"
        return "s" + "s".join(str(s + 1) for s in self.words[w])

    def word_str(self, w):
        return "".join(str(s + 1) for s in self.words[w]) or "e"

    def parse_word(self, text):
        if text in ("e", ""):
            return 0
        return self.index_of_word(tuple(int(c) - 1 for c in text))

    def descriptor(self):
        return {"matrix": self.matrix, "weights": self.weights, "tag": self.tag}

    # -------------------------------------------------------------- Bruhat
    def bruhat_down(self, y):
        """Bitset of {x : x <= y}."""
        if self._bruhat is None:
            self._bruhat = [None] * self.size
        B = self._bruhat
        if B[y] is not None:
            return B[y]
        order = sorted(range(self.size), key=lambda i: self.length[i])
        for w in order:
            if B[w] is not None:
                continue
            if w == 0:
                B[0] = 1
                continue
            s = self.words[w][0]
            sw = self.lmul[w][s]
            prev = B[sw]
            acc = prev
            x = prev
            k = 0
            while x:
                if x & 1:
                    acc |= 1 << self.lmul[k][s]
                x >>= 1
                k += 1
            B[w] = acc
        return B[y]

    def bruhat_leq(self, x, y):
        return bool(self.bruhat_down(y) >> x & 1)

    # ---------------------------------------------------------- parabolics
    def parabolic_elements(self, J):
        J = tuple(sorted(set(J)))
        out = {0}
        queue = [0]
        while queue:
            w = queue.pop()
            for s in J:
                v = self.rmul[w][s]
                if v not in out:
                    out.add(v)
                    queue.append(v)
        return sorted(out)

    def longest_in(self, J):
        els = self.parabolic_elements(J)
        return max(els, key=lambda i: self.length[i])

    def parabolic_data(self, J):
        J = frozenset(J)
        if J in self._parabolic:
            return self._parabolic[J]
        WJ = self.parabolic_elements(J)
        w0J = max(WJ, key=lambda i: self.length[i])
        # minimal length reps of left cosets wW_J: no right descent in J
        left_reps = [w for w in range(self.size) if not (self.right_descents(w) & J)]
        right_reps = [w for w in range(self.size) if not (self.left_descents(w) & J)]
        data = {"J": sorted(J), "elements": WJ, "w0J": w0J,
                "left_coset_reps": left_reps, "right_coset_reps": right_reps}
        self._parabolic[J] = data
        return data

    def double_cosets(self, I, J):
        """Partition of W into W_I w W_J blocks, each with its minimal rep."""
        I, J = sorted(set(I)), sorted(set(J))
        seen = [False] * self.size
        blocks = []
        for w in range(self.size):  # ShortLex order: first unseen is minimal
            if seen[w]:
                continue
            block = [w]
            seen[w] = True
            stack = [w]
            while stack:
                x = stack.pop()
                for s in I:
                    y = self.lmul[x][s]
                    if not seen[y]:
                        seen[y] = True
                        block.append(y)
                        stack.append(y)
                for s in J:
                    y = self.rmul[x][s]
                    if not seen[y]:
                        seen[y] = True
                        block.append(y)
                        stack.append(y)
            blocks.append((w, sorted(block)))
        return blocks

    def __repr__(self):
        return f"WeightedCoxeterSystem({self.tag or self.matrix}, L={self.weights}, |W|={self.size})"


# ------------------------------------------------------------------ catalog

def _chain(n, bonds=None):
    M = [[2] * n for _ in range(n)]
    for i in range(n):
        M[i][i] = 1
    for i in range(n - 1):
        M[i][i + 1] = M[i + 1][i] = 3
    for (i, j), m in (bonds or {}).items():
        M[i][j] = M[j][i] = m
    return M


def coxeter_matrix(kind, n):
    if kind == "A":
        return _chain(n)
    if kind in ("B", "C"):
        if n == 1:
            return _chain(1)
        return _chain(n, {(n - 2, n - 1): 4})
    if kind == "D":
        if n < 4:
            raise ValueError("type D needs rank >= 4")
        M = _chain(n)
        M[n - 2][n - 1] = M[n - 1][n - 2] = 2
        M[n - 3][n - 1] = M[n - 1][n - 3] = 3
        return M
    if kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("type E needs rank 6, 7 or 8")
        # Bourbaki: 1-3-4-5-6-..., 2 attached to 4
        M = [[2] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = 1
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in edges:
            M[i][j] = M[j][i] = 3
        return M
    if kind == "F":
        if n != 4:
            raise ValueError("type F needs rank 4")
        return _chain(4, {(1, 2): 4})
    if kind == "G":
        if n != 2:
            raise ValueError("type G needs rank 2")
        return _chain(2, {(0, 1): 6})
    if kind == "I":
        return [[1, n], [n, 1]]
    raise ValueError(f"unknown Cartan type {kind!r}")


def build_system(spec, weights=None, cap=DEFAULT_CAP, matrix=None):
    """Build a weighted Coxeter system from a catalog name or a raw matrix.

    Catalog names: A_n, B_n, C_n, D_n, E6-8, F4, G2, I2(m) (m in 2,3,4,6,8),
    SU<n> (quasi-split unitary), 2F4.  ``weights`` overrides (type B/C or
    any user system)."""
    if matrix is not None or isinstance(spec, (list, tuple)):
        M = matrix if matrix is not None else spec
        return WeightedCoxeterSystem(M, weights, tag=None if isinstance(spec, (list, tuple)) else spec, cap=cap)
    name = spec.strip()
    tag = name
    m = re.fullmatch(r"SU(\d+)", name)
    if m:
        N = int(m.group(1))
        if N < 2:
            raise ValueError("SU_n needs n >= 2")
        half = N // 2
        if N % 2 == 0:
            w = [2] * (half - 1) + [1]
        else:
            w = [2] * (half - 1) + [3]
        if weights is not None:
            raise ValueError("SU_n fixes its own weights")
        return WeightedCoxeterSystem(coxeter_matrix("B", half), w, tag=tag, cap=cap)
    if name == "2F4":
        if weights is not None:
            raise ValueError("2F4 fixes its own weights")
        return WeightedCoxeterSystem([[1, 8], [8, 1]], [2, 4], tag=tag, cap=cap)
    m = re.fullmatch(r"I2\((\d+)\)", name)
    if m:
        return WeightedCoxeterSystem(coxeter_matrix("I", int(m.group(1))), weights, tag=tag, cap=cap)
    m = re.fullmatch(r"([A-G])(\d+)", name)
    if not m:
        raise ValueError(f"unknown system {spec!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValueError("rank must be positive")
    if weights is not None and kind not in ("B", "C"):
        # split types carry equal parameters; other weights only via raw matrices
        if any(x != weights[0] for x in weights):
            raise ValueError(f"type {kind} admits only constant weights")
    return WeightedCoxeterSystem(coxeter_matrix(kind, n), weights, tag=tag, cap=cap)


def multiply(a, b):
    return a * b


def length(a):
    return a.system.length[a.index]


def weight_L(a):
    return a.system.L[a.index]


def sign(a):
    return a.system.sign(a.index)
