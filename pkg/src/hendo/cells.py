"""Kazhdan-Lusztig cells, the a-function, gamma constants, distinguished
involutions, height functions and preorder comparisons.

Convention: y <-_L w when c_y occurs in some c_s c_w; y <=_L w is the
reflexive-transitive closure.  With this convention e is the top and w_0
the bottom of every preorder.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx



class PFailure(AssertionError):
    """A finite consequence of Lusztig's P1-P15 failed."""


class NotAPoset(ValueError):
    pass


def _closure(nodes, edges):
    """SCCs and reachability (as bitsets over SCC ids) of a digraph."""
    G = nx.DiGraph()
    G.add_nodes_from(nodes)
    G.add_edges_from(edges)
    C = nx.condensation(G)
    members = C.graph["mapping"]
    order = list(nx.topological_sort(C))
    reach = {}
    for c in reversed(order):
        r = 1 << c
        for d in C.successors(c):
            r |= reach[d]
        reach[c] = r
    return members, reach, C


class Preorder:
    """A preorder on range(n) given by a reflexive-transitive relation matrix."""

    def __init__(self, n, leq, labels=None):
        self.n = n
        self._leq = leq
        self.labels = labels or list(range(n))

    def leq(self, i, j):
        return self._leq(i, j)

    def lt(self, i, j):
        return self._leq(i, j) and not self._leq(j, i)

    def equiv(self, i, j):
        return self._leq(i, j) and self._leq(j, i)

    def classes(self):
        out = []
        seen = set()
        for i in range(self.n):
            if i in seen:
                continue
            cls = [j for j in range(self.n) if self.equiv(i, j)]
            seen.update(cls)
            out.append(cls)
        return out

    def opposite(self):
        return Preorder(self.n, lambda i, j: self._leq(j, i), self.labels)

    def is_linearization(self, order):
        """True if listing ``order`` never puts a strictly bigger element first."""
        pos = {x: k for k, x in enumerate(order)}
        return all(not (self.lt(order[b], order[a])) for a in range(self.n) for b in range(a + 1, self.n)) \
            and len(pos) == self.n


def dominance_check(p1, p2):
    """Does p1 dominate p2 (<=_1 implies <=_2), and strictly (<_1 implies <_2)?"""
    if p1.n != p2.n:
        raise ValueError("preorders on different ground sets")
    n = p1.n
    dom = all(p2.leq(i, j) for i in range(n) for j in range(n) if p1.leq(i, j))
    strict = dom and all(p2.lt(i, j) for i in range(n) for j in range(n) if p1.lt(i, j))
    return {"dominates": dom, "strictly_dominates": strict}


class CellDecomposition:
    def __init__(self, H):
        self.H = H
        W = self.W = H.W
        H.compute_all()
        n = W.size
        inv = W.inverse
        left_edges = set()
        for w in range(n):
            for s in range(W.rank):
                for z in H.cs_c(s, w):
                    left_edges.add((w, z))
        right_edges = {(inv[w], inv[z]) for (w, z) in left_edges}
        self.left_edges = sorted(left_edges)
        self.right_edges = sorted(right_edges)

        self._left = self._build(left_edges)
        self._right = self._build(right_edges)
        self._two = self._build(left_edges | right_edges)
        self.left_cells = self._left["cells"]
        self.right_cells = self._right["cells"]
        self.two_sided_cells = self._two["cells"]
        self.left_cell_of = self._left["cell_of"]
        self.right_cell_of = self._right["cell_of"]
        self.two_sided_cell_of = self._two["cell_of"]
        # left cell -> two-sided cell
        self.left_to_two = [self.two_sided_cell_of[c[0]] for c in self.left_cells]
        for k, c in enumerate(self.left_cells):
            if any(self.two_sided_cell_of[w] != self.left_to_two[k] for w in c):
                raise PFailure("a left cell straddles two two-sided cells")

    def _build(self, edges):
        n = self.W.size
        members, reach, C = _closure(range(n), edges)
        # renumber SCCs by their ShortLex-smallest member
        groups = {}
        for w in range(n):
            groups.setdefault(members[w], []).append(w)
        ordered = sorted(groups.items(), key=lambda kv: min(kv[1]))
        ren = {old: k for k, (old, _) in enumerate(ordered)}
        cells = [sorted(ws) for _, ws in ordered]
        cell_of = [ren[members[w]] for w in range(n)]
        below = [0] * len(cells)
        for old, k in ren.items():
            r = reach[old]
            b = 0
            for o2, k2 in ren.items():
                if r >> o2 & 1:
                    b |= 1 << k2
            below[k] = b
        dag = sorted({(ren[a], ren[b]) for a, b in C.edges()})
        return {"cells": cells, "cell_of": cell_of, "below": below, "dag": dag}

    # relations on elements
    def leq_L(self, x, y):
        d = self._left
        return bool(d["below"][d["cell_of"][y]] >> d["cell_of"][x] & 1)

    def leq_R(self, x, y):
        d = self._right
        return bool(d["below"][d["cell_of"][y]] >> d["cell_of"][x] & 1)

    def leq_LR(self, x, y):
        d = self._two
        return bool(d["below"][d["cell_of"][y]] >> d["cell_of"][x] & 1)

    # preorders on left cells
    def left_preorder(self):
        below = self._left["below"]
        return Preorder(len(self.left_cells), lambda i, j: bool(below[j] >> i & 1))

    def lr_preorder_on_left_cells(self):
        rep = [c[0] for c in self.left_cells]
        return Preorder(len(rep), lambda i, j: self.leq_LR(rep[i], rep[j]))

    def two_sided_preorder(self):
        below = self._two["below"]
        return Preorder(len(self.two_sided_cells), lambda i, j: bool(below[j] >> i & 1))

    def left_dag(self):
        return self._left["dag"]

    def two_sided_dag(self):
        return self._two["dag"]

    def report(self):
        W = self.W
        ws = W.word_str
        return {
            "left_cells": [[ws(w) for w in c] for c in self.left_cells],
            "right_cells": [[ws(w) for w in c] for c in self.right_cells],
            "two_sided_cells": [[ws(w) for w in c] for c in self.two_sided_cells],
            "left_dag": self.left_dag(),
            "two_sided_dag": self.two_sided_dag(),
        }


def cell_decomposition(H):
    return CellDecomposition(H)


# ---------------------------------------------------------- a and gamma

@dataclass
class AFunction:
    a: list

    def __getitem__(self, z):
        return self.a[z]


def a_function(H):
    W = H.W
    H.compute_all()
    a = [0] * W.size
    for x in range(W.size):
        for y in range(W.size):
            for z, h in H.product(x, y).items():
                lo = h.low()
                if -lo > a[z]:
                    a[z] = -lo
    return AFunction(a)


@dataclass
class GammaAndInvolutions:
    gamma: dict
    D: list
    n: dict
    n_hat: list
    d_of: list = field(default_factory=list)   # x -> the d with gamma_{x^-1,x,d} != 0

    def g(self, x, y, z):
        return self.gamma.get((x, y, z), 0)


def gamma_table(H, cells=None, afun=None):
    W = H.W
    if afun is None:
        afun = a_function(H)
    if cells is None:
        cells = cell_decomposition(H)
    a = afun.a
    gamma = {}
    for x in range(W.size):
        for y in range(W.size):
            for z, h in H.product(x, y).items():
                c = h.coeff(a[z])
                if c:
                    if c != h.coeff(-a[z]):
                        raise PFailure("structure constant is not bar-invariant")
                    gamma[(x, y, z)] = c
    inv = W.inverse
    # D = {z : a(z) = Delta(z)}, where p_{e,z} = n_z t^{-Delta(z)} + lower terms
    delta = {}
    for z in range(W.size):
        pe = H.p(0, z)
        delta[z] = -pe.high()
    Dset = [z for z in range(W.size) if a[z] == delta[z]]
    nd = {z: H.p(0, z).coeff(-delta[z]) for z in Dset}
    d_of = []
    for x in range(W.size):
        ds = [d for d in Dset if gamma.get((inv[x], x, d))]
        if len(ds) != 1:
            raise PFailure(f"x = {W.word_str(x)} has {len(ds)} distinguished d with gamma(x^-1, x, d) != 0")
        d = ds[0]
        d_of.append(d)
        if gamma[(inv[x], x, d)] != nd[d]:
            raise PFailure(f"gamma(x^-1, x, d) != n_d for x = {W.word_str(x)}")
    D = set(Dset)
    for d, v in nd.items():
        if v not in (1, -1):
            raise PFailure(f"n_d = {v} is not a sign")
    D = sorted(D)
    for d in D:
        if inv[d] != d:
            raise PFailure(f"distinguished element {W.word_str(d)} is not an involution")
    per_cell = [0] * len(cells.left_cells)
    for d in D:
        per_cell[cells.left_cell_of[d]] += 1
    if any(k != 1 for k in per_cell):
        raise PFailure("a left cell does not contain exactly one distinguished involution")
    d_in_cell = {cells.left_cell_of[d]: d for d in D}
    n_hat = [nd[d_in_cell[cells.left_cell_of[inv[z]]]] for z in range(W.size)]
    return GammaAndInvolutions(gamma, D, nd, n_hat, d_of)


def check_a_constancy(cells, afun):
    for c in cells.two_sided_cells:
        if len({afun.a[w] for w in c}) != 1:
            raise PFailure("a is not constant on a two-sided cell")
    return True


def check_h_support(H, cells):
    """h_{x,y,z} != 0 implies z <=_L y and z <=_R x."""
    bad = []
    n = H.W.size
    for x in range(n):
        for y in range(n):
            for z in H.product(x, y):
                if not (cells.leq_L(z, y) and cells.leq_R(z, x)):
                    bad.append((x, y, z))
    return bad


# -------------------------------------------------------------- heights

@dataclass
class HeightFunction:
    values: list          # indexed by cell id
    orientation: str      # "left" (negative, for <=_LR), "right" (for <=_LR^op), "standard"
    over: str = "left_cells"

    def __getitem__(self, i):
        return self.values[i]


def is_compatible(h, order):
    n = order.n
    for i in range(n):
        for j in range(n):
            if order.lt(i, j) and not h[i] < h[j]:
                return False
            if order.equiv(i, j) and h[i] != h[j]:
                return False
    return True


def standard_height(order):
    """Length of the longest proper chain below each element of a preorder."""
    n = order.n
    classes = order.classes()
    cls_of = {}
    for k, c in enumerate(classes):
        for i in c:
            cls_of[i] = k
    G = nx.DiGraph()
    G.add_nodes_from(range(len(classes)))
    for a in range(len(classes)):
        for b in range(len(classes)):
            if a != b and order.leq(classes[a][0], classes[b][0]):
                G.add_edge(a, b)
    if not nx.is_directed_acyclic_graph(G):
        raise NotAPoset("relation has a cycle between distinct classes")
    hk = {}
    for v in nx.topological_sort(G):
        hk[v] = max((hk[u] + 1 for u in G.predecessors(v)), default=0)
    return HeightFunction([hk[cls_of[i]] for i in range(n)], "standard")


def standard_height_from_dag(n, edges):
    """Heights on a DAG given by (lower, upper) edges."""
    G = nx.DiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    if not nx.is_directed_acyclic_graph(G):
        raise NotAPoset("cycle detected")
    hk = {}
    for v in nx.topological_sort(G):
        hk[v] = max((hk[u] + 1 for u in G.predecessors(v)), default=0)
    return HeightFunction([hk[i] for i in range(n)], "standard")


def a_height(cells, afun, orientation="left"):
    check_a_constancy(cells, afun)
    vals = [-afun.a[c[0]] - 1 for c in cells.left_cells]
    if orientation == "right":
        vals = [-v for v in vals]
    elif orientation != "left":
        raise ValueError("orientation is 'left' or 'right'")
    h = HeightFunction(vals, orientation)
    order = cells.lr_preorder_on_left_cells()
    if orientation == "right":
        order = order.opposite()
    if not is_compatible(h, order):
        raise PFailure("a-based height is not compatible with the two-sided preorder")
    return h


def preceq(cells, h):
    """omega <= omega' iff h(omega) < h(omega') or (equal and same two-sided cell)."""
    tw = cells.left_to_two
    return Preorder(len(cells.left_cells),
                    lambda i, j: h[i] < h[j] or (h[i] == h[j] and tw[i] == tw[j]))
