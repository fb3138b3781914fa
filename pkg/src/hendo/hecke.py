"""The generic Hecke algebra of a weighted Coxeter system over Z[t,t^-1].

Internally everything is expanded in the normalized basis
T~_w = t^{-L(w)} T_w, where the quadratic relation reads

    T~_s T~_y = T~_{sy}                          if sy > y
    T~_s T~_y = T~_{sy} + (t_s - t_s^-1) T~_y    if sy < y.
"""

from __future__ import annotations

import heapq
import json
import os
import tempfile

from .ring import ONE, ZERO, LaurentPoly, make_bar_invariant, t_pow

BASES = ("T", "Ttilde", "C")


class KLFailure(AssertionError):
    pass


class CacheError(ValueError):
    pass


def _vadd(acc, vec, coef=ONE):
    """acc += coef * vec, in place, on sparse dicts."""
    for k, v in vec.items():
        x = acc.get(k)
        y = v * coef if coef != ONE else v
        x = y if x is None else x + y
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


class HeckeElement:
    __slots__ = ("H", "basis", "coeffs")

    def __init__(self, H, basis, coeffs):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.H = H
        self.basis = basis
        self.coeffs = {k: v for k, v in coeffs.items() if v}

    def to(self, basis):
        return self.H.convert(self, basis)

    def __add__(self, o):
        o = o.to(self.basis)
        return HeckeElement(self.H, self.basis, _vadd(dict(self.coeffs), o.coeffs))

    def __sub__(self, o):
        return self + o.scale(-ONE)

    def __neg__(self):
        return self.scale(-ONE)

    def scale(self, c):
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        return HeckeElement(self.H, self.basis, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, o):
        if isinstance(o, (int, LaurentPoly)):
            return self.scale(o)
        return self.H.mul(self, o, out=self.basis)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, o):
        if not isinstance(o, HeckeElement):
            return NotImplemented
        return self.H is o.H and self.to("Ttilde").coeffs == o.to("Ttilde").coeffs

    def __hash__(self):
        return hash(frozenset(self.to("Ttilde").coeffs.items()))

    def is_zero(self):
        return not self.coeffs

    def __repr__(self):
        W = self.H.W
        sym = {"T": "T", "Ttilde": "T~", "C": "c"}[self.basis]
        if not self.coeffs:
            return "0"
        return " + ".join(f"({v!r}){sym}_{W.word_str(k)}" for k, v in sorted(self.coeffs.items()))


class HeckeAlgebra:
    def __init__(self, W):
        self.W = W
        self.ts = [t_pow(W.weights[s]) for s in range(W.rank)]
        self.tsinv = [t_pow(-W.weights[s]) for s in range(W.rank)]
        self.ts_diff = [self.ts[s] - self.tsinv[s] for s in range(W.rank)]
        self.ts_sum = [self.ts[s] + self.tsinv[s] for s in range(W.rank)]
        self._p = {0: {0: ONE}}          # w -> {y: p_{y,w}}
        self._mu_rec = {}                # w -> (s, w', {x: mu}) with c_s c_w' = c_w + sum mu c_x
        self._cs = {}                    # (s, w) -> {z: coeff} for c_s c_w
        self._csr = {}                   # (w, s) -> {z: coeff} for c_w c_s
        self._prod = {}                  # (x, y) -> {z: h_{x,y,z}}
        self._invt = {0: {0: ONE}}       # w -> T~_{w^-1}^{-1} in T~ basis

    # ----------------------------------------------------------- elements
    def T(self, w):
        return HeckeElement(self, "T", {w: ONE})

    def Tt(self, w):
        return HeckeElement(self, "Ttilde", {w: ONE})

    def C(self, w):
        return HeckeElement(self, "C", {w: ONE})

    def one(self):
        return self.Tt(0)

    def element(self, basis, coeffs):
        return HeckeElement(self, basis, coeffs)

    def x_element(self, J):
        return HeckeElement(self, "T", {w: ONE for w in self.W.parabolic_elements(J)})

    def y_element(self, J):
        W = self.W
        return HeckeElement(self, "T", {w: t_pow(-2 * W.L[w]) * W.sign(w) for w in W.parabolic_elements(J)})

    # ------------------------------------------------------- conversions
    def convert(self, a, basis):
        if a.basis == basis:
            return a
        tt = self._to_tt(a)
        if basis == "Ttilde":
            return HeckeElement(self, "Ttilde", tt)
        if basis == "T":
            L = self.W.L
            return HeckeElement(self, "T", {w: v.shift(-L[w]) for w, v in tt.items()})
        return HeckeElement(self, "C", self.tt_to_c(tt))

    def _to_tt(self, a):
        if a.basis == "Ttilde":
            return dict(a.coeffs)
        if a.basis == "T":
            L = self.W.L
            return {w: v.shift(L[w]) for w, v in a.coeffs.items()}
        acc = {}
        for w, v in a.coeffs.items():
            _vadd(acc, self.kl(w), v)
        return acc

    def tt_to_c(self, vec):
        """Expand a T~-vector in the C-basis (unitriangular inversion)."""
        vec = dict(vec)
        L = self.W.length
        heap = [(-L[x], x) for x in vec]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, x = heapq.heappop(heap)
            a = vec.get(x)
            if not a:
                continue
            out[x] = a
            for y, p in self.kl(x).items():
                if y not in vec:
                    heapq.heappush(heap, (-L[y], y))
                b = vec.get(y, ZERO) - a * p
                if b:
                    vec[y] = b
                else:
                    vec.pop(y, None)
        return out

    # ------------------------------------------------------ multiplication
    def _lmul_s(self, s, vec):
        """T~_s * vec (T~-basis)."""
        W = self.W
        out = {}
        d = self.ts_diff[s]
        for y, v in vec.items():
            sy = W.lmul[y][s]
            _vadd(out, {sy: v})
            if W.length[sy] < W.length[y]:
                _vadd(out, {y: v * d})
        return out

    def _rmul_s(self, vec, s):
        W = self.W
        out = {}
        d = self.ts_diff[s]
        for y, v in vec.items():
            ys = W.rmul[y][s]
            _vadd(out, {ys: v})
            if W.length[ys] < W.length[y]:
                _vadd(out, {y: v * d})
        return out

    def _mul_tt(self, a, b):
        out = {}
        W = self.W
        for x, v in a.items():
            vec = b
            for s in reversed(W.words[x]):
                vec = self._lmul_s(s, vec)
            _vadd(out, vec, v)
        return out

    def mul(self, a, b, out="T"):
        if a.H is not self or b.H is not self:
            raise ValueError("elements of different Hecke algebras")
        if a.basis == "C" and b.basis == "C" and out == "C":
            acc = {}
            for x, u in a.coeffs.items():
                for y, v in b.coeffs.items():
                    _vadd(acc, self.product(x, y), u * v)
            return HeckeElement(self, "C", acc)
        r = HeckeElement(self, "Ttilde", self._mul_tt(self._to_tt(a), self._to_tt(b)))
        return r.to(out)

    # ----------------------------------------------------------- KL basis
    def kl(self, w):
        """c_w in the T~-basis as {y: p_{y,w}}."""
        p = self._p.get(w)
        if p is None:
            self._compute_kl_upto(w)
            p = self._p[w]
        return p

    def _compute_kl_upto(self, w):
        W = self.W
        # indices are ShortLex so every proper prefix has a smaller index
        for v in range(len(self._p), w + 1):
            if v in self._p:
                continue
            s = W.words[v][0]
            vp = W.lmul[v][s]
            vec = self._cs_c_tt(s, vp)
            mus = {}
            L = W.length
            heap = [(-L[x], x) for x in vec if x != v]
            heapq.heapify(heap)
            done = set()
            while heap:
                _, x = heapq.heappop(heap)
                if x in done:
                    continue
                done.add(x)
                pi = vec.get(x)
                if not pi or pi.in_negative_part():
                    continue
                m = make_bar_invariant(pi)
                mus[x] = m
                for y, q in self._p[x].items():
                    b = vec.get(y, ZERO) - m * q
                    if b:
                        if y not in vec and y not in done:
                            heapq.heappush(heap, (-L[y], y))
                        vec[y] = b
                    else:
                        vec.pop(y, None)
            if vec.get(v) != ONE:
                raise KLFailure(f"leading coefficient of c_{W.word_str(v)} is {vec.get(v)!r}")
            for y, q in vec.items():
                if y != v and not q.in_negative_part():
                    raise KLFailure(f"p_{{{W.word_str(y)},{W.word_str(v)}}} = {q!r} not in t^-1 Z[t^-1]")
            self._p[v] = vec
            self._mu_rec[v] = (s, vp, mus)

    def _cs_c_tt(self, s, w):
        """c_s * c_w expanded in T~ (c_s = t_s^-1 + T~_s)."""
        W = self.W
        out = {}
        ts, tsi = self.ts[s], self.tsinv[s]
        for y, p in self.kl(w).items():
            sy = W.lmul[y][s]
            _vadd(out, {sy: p})
            if W.length[sy] > W.length[y]:
                _vadd(out, {y: p * tsi})
            else:
                _vadd(out, {y: p * ts})
        return out

    def compute_all(self):
        self.kl(self.W.size - 1)
        return self

    def p(self, y, w):
        return self.kl(w).get(y, ZERO)

    def mu_record(self, w):
        self.kl(w)
        return self._mu_rec.get(w)

    # --------------------------------------------------------- C-actions
    def cs_c(self, s, w):
        """c_s c_w in the C-basis."""
        key = (s, w)
        r = self._cs.get(key)
        if r is None:
            W = self.W
            if W.length[W.lmul[w][s]] < W.length[w]:
                r = {w: self.ts_sum[s]}
            else:
                r = self.tt_to_c(self._cs_c_tt(s, w))
            self._cs[key] = r
        return r

    def c_cs(self, w, s):
        """c_w c_s in the C-basis, through the anti-involution c_w -> c_{w^-1}."""
        key = (w, s)
        r = self._csr.get(key)
        if r is None:
            inv = self.W.inverse
            r = {inv[z]: v for z, v in self.cs_c(s, inv[w]).items()}
            self._csr[key] = r
        return r

    def mu(self, s, x, w):
        """mu^s_{x,w}: coefficient of c_x in c_s c_w - c_{sw} (sw > w)."""
        W = self.W
        sw = W.lmul[w][s]
        if W.length[sw] < W.length[w]:
            raise ValueError("mu^s_{x,w} is defined for sw > w")
        if x == sw:
            return ZERO
        return self.cs_c(s, w).get(x, ZERO)

    def cs_on_c_vector(self, s, vec):
        out = {}
        for w, v in vec.items():
            _vadd(out, self.cs_c(s, w), v)
        return out

    def product(self, x, y):
        """{z: h_{x,y,z}} with c_x c_y = sum h_{x,y,z} c_z."""
        key = (x, y)
        r = self._prod.get(key)
        if r is not None:
            return r
        if x == 0:
            r = {y: ONE}
        else:
            s, xp, mus = self.mu_record(x)
            r = self.cs_on_c_vector(s, self.product(xp, y))
            for z, m in mus.items():
                _vadd(r, self.product(z, y), -m)
        self._prod[key] = r
        return r

    def structure_constants(self, x, y):
        return self.product(x, y)

    def h(self, x, y, z):
        return self.product(x, y).get(z, ZERO)

    # -------------------------------------------------------- involutions
    def inv_tilde(self, w):
        """T~_{w^-1}^{-1} in the T~-basis."""
        r = self._invt.get(w)
        if r is None:
            W = self.W
            s = W.words[w][0]
            rest = self.inv_tilde(W.lmul[w][s])
            # T~_s^{-1} = T~_s - (t_s - t_s^-1)
            r = _vadd(self._lmul_s(s, rest), rest, -self.ts_diff[s])
            self._invt[w] = r
        return r

    def bar_H(self, a):
        acc = {}
        for w, v in self._to_tt(a).items():
            _vadd(acc, self.inv_tilde(w), v.bar())
        return HeckeElement(self, "Ttilde", acc).to(a.basis)

    def dagger(self, a):
        W = self.W
        acc = {}
        for w, v in self._to_tt(a).items():
            _vadd(acc, self.inv_tilde(w), v * W.sign(w))
        return HeckeElement(self, "Ttilde", acc).to(a.basis)

    # ------------------------------------------------------------ checks
    def check_kl_conditions(self, w):
        """p_{w,w} = 1, support in the Bruhat interval, negative part, bar-fixed."""
        W = self.W
        p = self.kl(w)
        if p.get(w) != ONE:
            return False
        for y, q in p.items():
            if y != w and (not W.bruhat_leq(y, w) or not q.in_negative_part()):
                return False
        c = HeckeElement(self, "Ttilde", p)
        return self.bar_H(c).coeffs == p

    def h_table(self):
        n = self.W.size
        return {(x, y): self.product(x, y) for x in range(n) for y in range(n)}


# ------------------------------------------------------------ KL cache I/O

def _words_key(W, y, w):
    return f"{W.word_str(y)}|{W.word_str(w)}"


def save_kl_cache(H, path):
    """Atomic write of the p-table and recursion mu-values."""
    W = H.W
    H.compute_all()
    data = {"version": 1, "system": W.descriptor(), "p": {}, "mu": {}}
    for w in range(W.size):
        for y, q in sorted(H.kl(w).items()):
            data["p"][_words_key(W, y, w)] = q.to_json()
        rec = H.mu_record(w)
        if rec is not None:
            s, _, mus = rec
            for x, m in sorted(mus.items()):
                data["mu"][f"{s + 1}|{W.word_str(x)}|{W.word_str(w)}"] = m.to_json()
    text = json.dumps(data, sort_keys=True, separators=(",", ":"))
    d = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".klcache.")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_kl_cache(H, path):
    """Validate a cache file against H's system and install it."""
    W = H.W
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise CacheError(f"unreadable cache: {e}") from e
    if not isinstance(data, dict) or data.get("version") != 1:
        raise CacheError(f"unsupported cache version {data.get('version') if isinstance(data, dict) else None!r}")
    sysd = data.get("system", {})
    if sysd.get("matrix") != W.matrix or sysd.get("weights") != W.weights:
        raise CacheError("cache belongs to a different system")
    table = {w: {} for w in range(W.size)}
    try:
        for key, val in data["p"].items():
            ys, ws = key.split("|")
            y, w = W.parse_word(ys), W.parse_word(ws)
            table[w][y] = LaurentPoly.from_json(val)
    except (KeyError, ValueError, IndexError) as e:
        raise CacheError(f"malformed cache entry: {e}") from e
    for w in range(W.size):
        p = table[w]
        if p.get(w) != ONE:
            raise CacheError(f"p_{{w,w}} != 1 for w = {W.word_str(w)}")
        for y, q in p.items():
            if y != w and not q.in_negative_part():
                raise CacheError(f"p_{{{W.word_str(y)},{W.word_str(w)}}} has a nonnegative exponent")
            if not W.bruhat_leq(y, w):
                raise CacheError(f"p_{{{W.word_str(y)},{W.word_str(w)}}} outside the Bruhat interval")
    fresh = HeckeAlgebra(W)
    fresh._p = table
    for w in range(W.size):
        c = HeckeElement(fresh, "Ttilde", table[w])
        if fresh.bar_H(c).coeffs != table[w]:
            raise CacheError(f"c_{W.word_str(w)} from cache is not bar-invariant")
    H._p = table
    # recursion records are rebuilt from the validated table
    H._mu_rec = {}
    for v in range(1, W.size):
        s = W.words[v][0]
        vp = W.lmul[v][s]
        rest = H.tt_to_c(H._cs_c_tt(s, vp))
        if rest.get(v) != ONE:
            raise CacheError("cache inconsistent with the multiplication rule")
        H._mu_rec[v] = (s, vp, {x: m for x, m in rest.items() if x != v})
    return H
