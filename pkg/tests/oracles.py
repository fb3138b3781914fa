"""Reference computations that share no code with the package's algorithms.

Only the Coxeter multiplication tables and LaurentPoly arithmetic are
borrowed; everything else is recomputed from definitions.
"""

from __future__ import annotations

from itertools import permutations

import networkx as nx

from hendo.ring import LaurentPoly, ONE, t_pow


def length(W, w):
    return len(W.words[w])


# ------------------------------------------------------------ Hecke, T basis

def _rmul_Ts(W, vec, s):
    """(sum a_w T_w) T_s with T_s^2 = (q_s - 1) T_s + q_s, q_s = t^(2 L(s))."""
    q = t_pow(2 * W.weights[s])
    out = {}

    def add(k, v):
        r = out.get(k, LaurentPoly()) + v
        if r:
            out[k] = r
        else:
            out.pop(k, None)

    for w, a in vec.items():
        ws = W.rmul[w][s]
        if length(W, ws) > length(W, w):
            add(ws, a)
        else:
            add(w, a * (q - ONE))
            add(ws, a * q)
    return out


def _rmul_Ts_inv(W, vec, s):
    # T_s^-1 = q^-1 T_s + (q^-1 - 1)
    qi = t_pow(-2 * W.weights[s])
    a = {w: v * qi for w, v in _rmul_Ts(W, vec, s).items()}
    for w, v in vec.items():
        r = a.get(w, LaurentPoly()) + v * (qi - ONE)
        if r:
            a[w] = r
        else:
            a.pop(w, None)
    return a


def bar_T_table(W):
    """bar(T_w) = T_{w^-1}^{-1} in the T basis, one reduced word at a time."""
    table = {}
    for w in range(W.size):
        vec = {0: ONE}
        for s in W.words[w]:
            vec = _rmul_Ts_inv(W, vec, s)
        table[w] = vec
    return table


def bar_of(W, table, vec):
    """Bar of an element given in the T basis."""
    out = {}
    for w, a in vec.items():
        ab = a.bar()
        for z, b in table[w].items():
            r = out.get(z, LaurentPoly()) + ab * b
            if r:
                out[z] = r
            else:
                out.pop(z, None)
    return out


def subword_bruhat(W, w):
    """All y <= w via the subword property of one reduced word of w."""
    found = {0}
    for s in W.words[w]:
        found |= {W.rmul[y][s] for y in found}
    return found


def kl_element_T(W, p):
    """c_w = sum p_{y,w} t^{-L(y)} T_y as a T-basis dict."""
    return {y: q.shift(-W.L[y]) for y, q in p.items() if q}


def kl_failures(W, H):
    """Every c_w is checked with a bar map built only from the quadratic
    relation; the normalization conditions then force uniqueness."""
    table = bar_T_table(W)
    bad = []
    for w in range(W.size):
        p = H.kl(w)
        below = subword_bruhat(W, w)
        ok = p.get(w) == ONE
        ok &= all(y in below for y in p)
        ok &= all(q.in_negative_part() for y, q in p.items() if y != w)
        c = kl_element_T(W, p)
        ok &= bar_of(W, table, c) == c
        if not ok:
            bad.append(W.word_str(w))
    return bad


def reference_a(W, H):
    a = [0] * W.size
    for x in range(W.size):
        for y in range(W.size):
            for z, h in H.product(x, y).items():
                a[z] = max(a[z], -min(h.c))
    return a


def reference_leq(W, H, inverse=False):
    """z <=_L y as reachability along the c_s c_w support, closed by networkx."""
    G = nx.DiGraph()
    G.add_nodes_from(range(W.size))
    for w in range(W.size):
        for s in range(W.rank):
            for z in H.cs_c(s, w):
                if inverse:
                    G.add_edge(W.inverse[w], W.inverse[z])
                else:
                    G.add_edge(w, z)
    return {y: nx.descendants(G, y) | {y} for y in range(W.size)}


# ------------------------------------------------------------------ type A

def perm_of(W, w):
    """One-line notation of w in S_{n+1}, generator k acting as (k, k+1)."""
    n = W.rank + 1
    p = list(range(n))
    for s in W.words[w]:
        p[s], p[s + 1] = p[s + 1], p[s]
    return tuple(p)


def rsk(perm):
    """Insertion and recording tableaux, as tuples of row tuples."""
    P, Q = [], []
    for i, x in enumerate(perm):
        r = 0
        while True:
            if r == len(P):
                P.append([x])
                Q.append([i])
                break
            row = P[r]
            bump = next((k for k, y in enumerate(row) if y > x), None)
            if bump is None:
                row.append(x)
                Q[r].append(i)
                break
            row[bump], x = x, row[bump]
            r += 1
    return tuple(map(tuple, P)), tuple(map(tuple, Q))


def involution_count(n):
    return sum(1 for p in permutations(range(n)) if all(p[p[i]] == i for i in range(n)))


def partition_by(keys):
    groups = {}
    for w, k in enumerate(keys):
        groups.setdefault(k, set()).add(w)
    return sorted(map(frozenset, groups.values()), key=min)


# ------------------------------------------------------------ double cosets

def parabolic(W, J):
    seen, todo = {0}, [0]
    while todo:
        w = todo.pop()
        for s in J:
            v = W.rmul[w][s]
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def brute_double_cosets(W, I, J):
    WI, WJ = parabolic(W, I), parabolic(W, J)
    left, blocks = set(range(W.size)), []
    while left:
        w = min(left)
        block = {W.mul(W.mul(a, w), b) for a in WI for b in WJ}
        blocks.append(block)
        left -= block
    return blocks
