"""Exact scalars: Laurent polynomials over Z and Z[sqrt2], rational
functions over Q, and the small fields used for specialization.

Nothing here ever touches a float.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd


class RingMismatch(ValueError):
    pass


class UnsupportedTarget(ValueError):
    pass


# ---------------------------------------------------------------- Z[sqrt2]

class ZSqrt2:
    """a + b*sqrt(2) with integer a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = int(a)
        self.b = int(b)

    @staticmethod
    def coerce(x):
        if isinstance(x, ZSqrt2):
            return x
        if isinstance(x, int):
            return ZSqrt2(x, 0)
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return ZSqrt2(x[0], x[1])
        raise TypeError(f"cannot read {x!r} as an element of Z[sqrt2]")

    def __add__(self, o):
        o = ZSqrt2.coerce(o)
        return ZSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = ZSqrt2.coerce(o)
        return ZSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return ZSqrt2.coerce(o) - self

    def __neg__(self):
        return ZSqrt2(-self.a, -self.b)

    def __mul__(self, o):
        o = ZSqrt2.coerce(o)
        return ZSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __eq__(self, o):
        try:
            o = ZSqrt2.coerce(o)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __bool__(self):
        return bool(self.a or self.b)

    def norm(self):
        return self.a * self.a - 2 * self.b * self.b

    def conj(self):
        return ZSqrt2(self.a, -self.b)

    def exact_div(self, o):
        o = ZSqrt2.coerce(o)
        n = o.norm()
        p = self * o.conj()
        if p.a % n or p.b % n:
            raise ArithmeticError("inexact division in Z[sqrt2]")
        return ZSqrt2(p.a // n, p.b // n)

    def __repr__(self):
        if not self.b:
            return str(self.a)
        return f"({self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}r2)"


# ---------------------------------------------------------------- Laurent

def _zero_of(ring):
    return ZSqrt2(0, 0) if ring == "Zsqrt2" else 0


class LaurentPoly:
    """Sparse element of Z[t,t^-1] (ring 'Z') or Z[sqrt2][t,t^-1] (ring 'Zsqrt2').

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("ring", "c", "_h")

    def __init__(self, coeffs=None, ring="Z"):
        if ring not in ("Z", "Zsqrt2"):
            raise ValueError(f"unknown coefficient ring {ring!r}")
        self.ring = ring
        d = {}
        if coeffs:
            conv = ZSqrt2.coerce if ring == "Zsqrt2" else int
            for e, v in coeffs.items():
                v = conv(v)
                if v:
                    d[int(e)] = v
        self.c = d
        self._h = None

    @classmethod
    def _raw(cls, d, ring="Z"):
        p = object.__new__(cls)
        p.ring = ring
        p.c = d
        p._h = None
        return p

    @classmethod
    def const(cls, v, ring="Z"):
        return cls({0: v}, ring)

    @classmethod
    def monomial(cls, e, v=1, ring="Z"):
        return cls({e: v}, ring)

    def _coerce(self, o):
        if isinstance(o, LaurentPoly):
            if o.ring != self.ring:
                if self.ring == "Zsqrt2" and o.ring == "Z":
                    return LaurentPoly(o.c, "Zsqrt2")
                raise RingMismatch(f"{self.ring} vs {o.ring}")
            return o
        if isinstance(o, (int, ZSqrt2)):
            if isinstance(o, ZSqrt2) and self.ring == "Z":
                raise RingMismatch("Z vs Zsqrt2")
            return LaurentPoly({0: o}, self.ring)
        return NotImplemented

    def _lift(self, o):
        # Z op Zsqrt2 is an error only when the Z side is self and o is explicit
        if isinstance(o, LaurentPoly) and self.ring == "Z" and o.ring == "Zsqrt2":
            raise RingMismatch("Z vs Zsqrt2")
        return self._coerce(o)

    def __add__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        d = dict(self.c)
        for e, v in o.c.items():
            w = d.get(e, 0) + v
            if w:
                d[e] = w
            else:
                d.pop(e, None)
        return LaurentPoly._raw(d, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self.c.items()}, self.ring)

    def __sub__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, int) and self.ring == "Z":
            if not o:
                return LaurentPoly._raw({}, "Z")
            return LaurentPoly._raw({e: v * o for e, v in self.c.items()}, "Z")
        o = self._lift(o)
        if o is NotImplemented:
            return o
        d = {}
        for e1, v1 in self.c.items():
            for e2, v2 in o.c.items():
                e = e1 + e2
                d[e] = d.get(e, 0) + v1 * v2
        return LaurentPoly._raw({e: v for e, v in d.items() if v}, self.ring)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if len(self.c) != 1:
                raise ArithmeticError("only monomials have inverses")
            (e, v), = self.c.items()
            if v not in (1, -1):
                raise ArithmeticError("monomial with non-unit coefficient")
            return LaurentPoly._raw({e * n: v ** (-n) if isinstance(v, int) else v}, self.ring)
        r = LaurentPoly.const(1, self.ring)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, o):
        if isinstance(o, (int, ZSqrt2)):
            o = LaurentPoly({0: o} if o else {}, self.ring)
        if not isinstance(o, LaurentPoly):
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self.c.items()))
        return self._h

    def __bool__(self):
        return bool(self.c)

    def is_zero(self):
        return not self.c

    def low(self):
        return min(self.c) if self.c else None

    def high(self):
        return max(self.c) if self.c else None

    def coeff(self, e):
        return self.c.get(e, _zero_of(self.ring))

    def shift(self, k):
        return LaurentPoly._raw({e + k: v for e, v in self.c.items()}, self.ring)

    def bar(self):
        return LaurentPoly._raw({-e: v for e, v in self.c.items()}, self.ring)

    def is_bar_fixed(self):
        return all(self.c.get(-e) == v for e, v in self.c.items())

    def in_negative_part(self):
        """True iff the element lies in t^-1 Z[t^-1]."""
        return all(e < 0 for e in self.c)

    def is_unit(self):
        if len(self.c) != 1:
            return False
        v = next(iter(self.c.values()))
        if isinstance(v, ZSqrt2):
            return v.norm() in (1, -1)
        return v in (1, -1)

    def is_constant(self):
        return all(e == 0 for e in self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c, reverse=True):
            v = self.c[e]
            if e == 0:
                parts.append(f"{v!r}")
            else:
                m = "t" if e == 1 else f"t^{e}"
                parts.append(m if v == 1 else (f"-{m}" if v == -1 else f"{v!r}*{m}"))
        return " + ".join(parts).replace("+ -", "- ")

    # JSON, exponent keys as decimal strings
    def to_json(self):
        if self.ring == "Z":
            cs = {str(e): v for e, v in sorted(self.c.items())}
        else:
            cs = {str(e): [v.a, v.b] for e, v in sorted(self.c.items())}
        return {"ring": self.ring, "coeffs": cs}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        ring = obj.get("ring")
        if ring not in ("Z", "Zsqrt2"):
            raise ValueError(f"bad ring tag {ring!r}")
        cs = {}
        for k, v in obj["coeffs"].items():
            if ring == "Z":
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ValueError(f"non-integer coefficient {v!r}")
                cs[int(k)] = v
            else:
                if isinstance(v, int):
                    v = [v, 0]
                cs[int(k)] = ZSqrt2(*v)
        return cls(cs, ring)


ZERO = LaurentPoly._raw({}, "Z")
ONE = LaurentPoly._raw({0: 1}, "Z")


def t_pow(k, ring="Z"):
    return LaurentPoly._raw({k: 1 if ring == "Z" else ZSqrt2(1)}, ring)


def laurent_arith(a, b, op):
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def bar(a):
    return a.bar()


def make_bar_invariant(pi):
    """The unique bar-fixed m with m - pi in t^-1 Z[t^-1]."""
    d = {}
    for e, v in pi.c.items():
        if e == 0:
            d[0] = v
        elif e > 0:
            d[e] = v
            d[-e] = v
    return LaurentPoly(d, pi.ring)


def random_laurent(rng, lo=-4, hi=4, terms=4, bound=5, ring="Z"):
    d = {}
    for _ in range(rng.randint(0, terms)):
        e = rng.randint(lo, hi)
        if ring == "Z":
            d[e] = rng.randint(-bound, bound)
        else:
            d[e] = ZSqrt2(rng.randint(-bound, bound), rng.randint(-bound, bound))
    return LaurentPoly(d, ring)


# ------------------------------------------------------- Z[t] poly helpers
# Dense ascending integer lists; used for gcds and exact division.

def _dense(p):
    """Laurent p -> (shift, dense list) with p = t^shift * poly."""
    if not p.c:
        return 0, []
    lo, hi = min(p.c), max(p.c)
    return lo, [p.c.get(e, 0) for e in range(lo, hi + 1)]


def _from_dense(shift, lst, ring="Z"):
    return LaurentPoly._raw({i + shift: v for i, v in enumerate(lst) if v}, ring)


def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _content(a):
    g = 0
    for v in a:
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _primitive(a):
    g = _content(a)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    return [v // g for v in a]


def _prem(a, b):
    """Pseudo-remainder of a by b (dense lists, b nonzero)."""
    a = list(a)
    lb, db = b[-1], len(b) - 1
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        la = a[-1]
        a = [v * lb for v in a]
        for i, v in enumerate(b):
            a[i + k] -= la * v
        _trim(a)
    return a


def _poly_gcd(a, b):
    if not a:
        return _primitive(b) if b else []
    if not b:
        return _primitive(a)
    g = gcd(_content(a), _content(b))
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_primitive(r) if r else [])
    return [g * v for v in a]


def _divmod_exact(a, b):
    """Exact quotient of dense integer polys, or None if not exact."""
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while a and len(a) >= len(b):
        k = len(a) - len(b)
        if a[-1] % lb:
            return None
        c = a[-1] // lb
        q[k] = c
        for i, v in enumerate(b):
            a[i + k] -= c * v
        _trim(a)
    if a:
        return None
    return q


def exact_div(a, b):
    """a / b in the Laurent ring; raises if the quotient is not Laurent."""
    if not b.c:
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if not a.c:
        return LaurentPoly._raw({}, a.ring)
    if len(b.c) == 1:
        (eb, vb), = b.c.items()
        if a.ring == "Z":
            d = {}
            for e, v in a.c.items():
                if v % vb:
                    raise ArithmeticError("inexact Laurent division")
                d[e - eb] = v // vb
            return LaurentPoly._raw(d, "Z")
        return LaurentPoly._raw({e - eb: ZSqrt2.coerce(v).exact_div(vb) for e, v in a.c.items()}, a.ring)
    if a.ring != "Z" or b.ring != "Z":
        return _exact_div_sqrt2(a, b)
    sa, da = _dense(a)
    sb, db = _dense(b)
    q = _divmod_exact(da, db)
    if q is None:
        raise ArithmeticError("inexact Laurent division")
    return _from_dense(sa - sb, q)


def _exact_div_sqrt2(a, b):
    # long division from the top, coefficients in Z[sqrt2]
    a = LaurentPoly(a.c, "Zsqrt2")
    b = LaurentPoly(b.c, "Zsqrt2")
    hb, lb = b.high(), b.c[b.high()]
    qlow = a.low() - b.low()
    q = {}
    while a.c and a.high() - hb >= qlow:
        ha = a.high()
        c = a.c[ha].exact_div(lb)
        q[ha - hb] = c
        a = a - LaurentPoly._raw({ha - hb: c}, "Zsqrt2") * b
    if a.c:
        raise ArithmeticError("inexact Laurent division")
    return LaurentPoly._raw(q, "Zsqrt2")


def divides(b, a):
    try:
        exact_div(a, b)
        return True
    except ArithmeticError:
        return False


def laurent_gcd(a, b):
    """gcd in Z[t,t^-1], normalized to lowest exponent 0 and positive lead."""
    if a.ring != "Z" or b.ring != "Z":
        raise RingMismatch("gcd is implemented over Z only")
    _, da = _dense(a)
    _, db = _dense(b)
    g = _poly_gcd(da, db)
    return _from_dense(0, g)


def laurent_content_gcd(polys):
    g = ZERO
    for p in polys:
        if p.c:
            g = p if not g.c else laurent_gcd(g, p)
            if g.c and len(g.c) == 1 and abs(next(iter(g.c.values()))) == 1:
                return ONE
    if g.c:
        _, dg = _dense(g)
        g = _from_dense(0, _primitive(dg) if dg[-1] < 0 else dg)
    return g


# ---------------------------------------------------------------- Q(t)

def _normalize_den(den):
    lo = den.low()
    p = den.shift(-lo)
    if p.c[p.high()] < 0:
        return -p, -1, lo
    return p, 1, lo


class RationalFunction:
    """num/den in Q(t), reduced; den has lowest exponent 0 and positive lead."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, int):
            num = LaurentPoly.const(num)
        if den is None:
            den = ONE
        elif isinstance(den, int):
            den = LaurentPoly.const(den)
        if num.ring != "Z" or den.ring != "Z":
            raise RingMismatch("rational functions are implemented over Q only")
        if not den.c:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if not num.c:
                num, den = ZERO, ONE
            else:
                g = laurent_gcd(num, den)
                if g != ONE:
                    num = exact_div(num, g)
                    den = exact_div(den, g)
                den, sgn, lo = _normalize_den(den)
                num = num.shift(-lo)
                if sgn < 0:
                    num = -num
        self.num = num
        self.den = den

    @staticmethod
    def of(x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, LaurentPoly):
            if x.ring != "Z":
                raise RingMismatch("rational functions are implemented over Q only")
            return RationalFunction(x, ONE, _reduced=True)
        if isinstance(x, int):
            return RationalFunction(LaurentPoly.const(x), ONE, _reduced=True)
        if isinstance(x, Fraction):
            return RationalFunction(LaurentPoly.const(x.numerator), LaurentPoly.const(x.denominator))
        raise TypeError(f"cannot coerce {x!r}")

    def __add__(self, o):
        o = RationalFunction.of(o)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, o):
        return self + (-RationalFunction.of(o))

    def __rsub__(self, o):
        return RationalFunction.of(o) - self

    def __mul__(self, o):
        o = RationalFunction.of(o)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.c:
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, o):
        return self * RationalFunction.of(o).inverse()

    def __rtruediv__(self, o):
        return RationalFunction.of(o) * self.inverse()

    def __eq__(self, o):
        try:
            o = RationalFunction.of(o)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num.c)

    def is_laurent(self):
        return self.den.is_unit()

    def to_laurent(self):
        if not self.is_laurent():
            raise ArithmeticError("not a Laurent polynomial")
        return exact_div(self.num, self.den)

    def __repr__(self):
        if self.den == ONE:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


# ---------------------------------------------------------------- fields
# Elements are plain Python values (int or Fraction or tuple); the field
# object carries the arithmetic.

class Field:
    char = 0
    size = None

    def is_finite(self):
        return self.size is not None


class Rationals(Field):
    name = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def sqrt2(self):
        raise UnsupportedTarget("Q has no square root of 2")

    def random(self, rng):
        return Fraction(rng.randint(-9, 9))

    def __eq__(self, o):
        return isinstance(o, Rationals)

    def __hash__(self):
        return hash("Q")

    def describe(self):
        return {"field": "Q"}


class QSqrt2(Field):
    """Q(sqrt2); elements are pairs (a, b) of Fractions."""

    name = "Q(sqrt2)"

    def zero(self):
        return (Fraction(0), Fraction(0))

    def one(self):
        return (Fraction(1), Fraction(0))

    def from_int(self, n):
        return (Fraction(n), Fraction(0))

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def sub(self, x, y):
        return (x[0] - y[0], x[1] - y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def mul(self, x, y):
        return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def inv(self, x):
        n = x[0] * x[0] - 2 * x[1] * x[1]
        if not n:
            raise ZeroDivisionError
        return (x[0] / n, -x[1] / n)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def sqrt2(self):
        return (Fraction(0), Fraction(1))

    def random(self, rng):
        return (Fraction(rng.randint(-9, 9)), Fraction(rng.randint(-9, 9)))

    def __eq__(self, o):
        return isinstance(o, QSqrt2)

    def __hash__(self):
        return hash("Qsqrt2")

    def describe(self):
        return {"field": "Q(sqrt2)"}


def _is_irreducible_mod_p(f, p):
    """f monic, dense ascending over F_p; brute-force root/factor test for small degree."""
    m = len(f) - 1
    # Rabin-style test via enumeration of monic polys of degree <= m//2
    from itertools import product
    for d in range(1, m // 2 + 1):
        for tail in product(range(p), repeat=d):
            g = list(tail) + [1]
            if _polymod_p(f, g, p) == []:
                return False
    return True


def _polymod_p(a, b, p):
    a = [v % p for v in a]
    _trim(a)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        k = len(a) - len(b)
        for i, v in enumerate(b):
            a[i + k] = (a[i + k] - c * v) % p
        _trim(a)
    return a


class FiniteField(Field):
    """GF(p^m). Elements are ints 0..q-1 encoding base-p digit vectors
    (coefficients of a polynomial in a fixed root of a Conway-like
    irreducible modulus chosen deterministically)."""

    def __init__(self, p, m=1):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be positive")
        self.char = p
        self.p = p
        self.m = m
        self.size = p ** m
        self.name = f"F{p}" if m == 1 else f"F{p}^{m}"
        if m > 1:
            if self.size > 1 << 16:
                raise UnsupportedTarget("extension fields are limited to 65536 elements")
            self._build_tables()

    def _build_tables(self):
        from itertools import product
        p, m, q = self.p, self.m, self.size
        # first irreducible monic modulus (lexicographic) with a primitive root x
        for tail in product(range(p), repeat=m):
            f = list(tail) + [1]
            if f[0] == 0 or not _is_irreducible_mod_p(f, p):
                continue
            exp = [0] * (q - 1)
            x = [1] + [0] * (m - 1)
            seen = set()
            ok = True
            for k in range(q - 1):
                code = self._encode(x)
                if code in seen:
                    ok = False
                    break
                seen.add(code)
                exp[k] = code
                # multiply by the generator
                x = [0] + x
                top = x.pop()
                for i in range(m):
                    x[i] = (x[i] - top * f[i]) % p
            if ok:
                self.modulus = f
                self._exp = exp
                self._log = {c: k for k, c in enumerate(exp)}
                return
        raise RuntimeError("no primitive modulus found")

    def _encode(self, digits):
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def _decode(self, v):
        out = []
        for _ in range(self.m):
            out.append(v % self.p)
            v //= self.p
        return out

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        r, k = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * k
            a //= p
            b //= p
            k *= p
        return r

    def neg(self, a):
        if self.m == 1:
            return -a % self.p
        p = self.p
        r, k = 0, 1
        while a:
            r += (-(a % p) % p) * k
            a //= p
            k *= p
        return r

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of 0 in finite field")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.size - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        return range(self.size)

    def random(self, rng):
        return rng.randrange(self.size)

    def sqrt(self, a):
        for x in range(self.size):
            if self.mul(x, x) == a:
                return x
        return None

    def sqrt2(self):
        r = self.sqrt(self.from_int(2))
        if r is None:
            raise UnsupportedTarget(f"{self.name} contains no square root of 2")
        return r

    def generator(self):
        return self._exp[1] if self.m > 1 else _prim_root(self.p)

    def __eq__(self, o):
        return isinstance(o, FiniteField) and (o.p, o.m) == (self.p, self.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def fmt(self, a):
        return str(a)

    def describe(self):
        d = {"field": "F", "p": self.p, "m": self.m}
        if self.m > 1:
            d["modulus"] = self.modulus
        return d


def _prim_root(p):
    if p == 2:
        return 1
    fs = [d for d in range(2, p) if (p - 1) % d == 0 and all(d % e for e in range(2, d))]
    for g in range(2, p):
        if all(pow(g, (p - 1) // d, p) != 1 for d in fs):
            return g
    return 1


class SpecializationTarget:
    """A field plus the (invertible) image of t; sqrt2 image resolved lazily."""

    def __init__(self, field, t_image, sqrt2_image=None):
        self.field = field
        if isinstance(field, Rationals):
            t_image = Fraction(t_image)
        elif isinstance(field, QSqrt2) and not isinstance(t_image, tuple):
            t_image = field.from_int(t_image)
        elif isinstance(field, FiniteField) and isinstance(t_image, int) and field.m == 1:
            t_image = t_image % field.p
        if field.mul(t_image, field.one()) == field.zero():
            raise UnsupportedTarget("image of t must be invertible")
        self.t = t_image
        self._tinv = field.inv(t_image)
        self._sqrt2 = sqrt2_image

    def sqrt2(self):
        if self._sqrt2 is None:
            self._sqrt2 = self.field.sqrt2()
        return self._sqrt2

    def scalar(self, v):
        F = self.field
        if isinstance(v, ZSqrt2):
            r = F.from_int(v.a)
            if v.b:
                r = F.add(r, F.mul(F.from_int(v.b), self.sqrt2()))
            return r
        return F.from_int(v)

    def power(self, e):
        F = self.field
        b = self.t if e >= 0 else self._tinv
        r = F.one()
        e = abs(e)
        while e:
            if e & 1:
                r = F.mul(r, b)
            b = F.mul(b, b)
            e >>= 1
        return r

    def __call__(self, a):
        return specialize(a, self)

    def describe(self):
        d = dict(self.field.describe())
        d["t"] = str(self.t)
        return d


def specialize(a, target):
    F = target.field
    if isinstance(a, int):
        return F.from_int(a)
    if isinstance(a, RationalFunction):
        d = specialize(a.den, target)
        if d == F.zero():
            raise ZeroDivisionError("denominator vanishes at this specialization")
        return F.div(specialize(a.num, target), d)
    r = F.zero()
    for e, v in a.c.items():
        r = F.add(r, F.mul(target.scalar(v), target.power(e)))
    return r


def laurent_from_int(n):
    return LaurentPoly._raw({0: n} if n else {}, "Z")
