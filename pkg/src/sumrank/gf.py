"""Finite-field tower arithmetic F_h < F_q < F_{q^m} with q = h^n.

The whole tower is realized as a single extension F_h[z]/(P) of degree
t = n*m.  An element is a tuple of t digits over F_h in the polynomial
basis {1, z, ..., z^{t-1}}.  The intermediate field F_q is not a separate
object: it is the fixed set of the n-fold h-Frobenius, and membership is
a cheap Frobenius test.

The base field F_h itself may be a prime power p^e; its digits are
integers in [0, h) encoding base-p coefficient vectors, with arithmetic
backed by precomputed tables (h is small at desk scale).

Defining moduli ship in ``registry.json`` keyed by "h,t" (coefficients in
ascending degree order, base-field digits).  Every entry is the
lexicographically least monic irreducible for its (h, t); the loader
re-verifies irreducibility.
"""

from __future__ import annotations

import functools
import json
from importlib import resources

import numpy as np
from sympy import factorint

__all__ = [
    "DigitField",
    "FieldElement",
    "FieldTower",
    "lex_least_irreducible",
    "is_irreducible",
    "load_tower",
    "registry",
]


def _factor_prime_power(h):
    """Return (p, e) with h = p^e, or raise ValueError."""
    if h < 2:
        raise ValueError(f"h={h} is not a prime power")
    fac = factorint(h)
    if len(fac) != 1:
        raise ValueError(f"h={h} is not a prime power")
    (p, e), = fac.items()
    return p, e


@functools.lru_cache(maxsize=None)
def registry():
    """Load the parameter registry shipped with the package."""
    data = resources.files(__package__).joinpath("registry.json").read_text()
    return json.loads(data)


class DigitField:
    """Arithmetic on the base field F_h, h = p^e, digits as ints in [0, h).

    For e > 1 a digit encodes the base-p coefficient vector of an element
    of F_p[w]/(g), with g taken from the registry's "base_fields" table.
    Operation tables are precomputed as numpy arrays; they also drive the
    vectorized mod-h linear algebra in :mod:`sumrank.linalg`.
    """

    def __init__(self, h, base_modulus=None):
        p, e = _factor_prime_power(h)
        self.h = h
        self.p = p
        self.e = e
        if e == 1:
            self.modulus = None
        else:
            if base_modulus is None:
                key = f"{p},{e}"
                try:
                    base_modulus = registry()["base_fields"][key]
                except KeyError:
                    raise ValueError(f"no base-field modulus for h={h} ({key})")
            self.modulus = tuple(base_modulus)
            if len(self.modulus) != e + 1 or self.modulus[e] != 1:
                raise ValueError("base modulus must be monic of degree e")
        self._build_tables()

    def _digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def _undigits(self, ds):
        return sum(d * self.p**i for i, d in enumerate(ds))

    def _mul_raw(self, a, b):
        p, e = self.p, self.e
        if e == 1:
            return (a * b) % p
        da, db = self._digits(a), self._digits(b)
        conv = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        # fold degrees >= e using w^e = -(g_0 + ... + g_{e-1} w^{e-1})
        for i in range(2 * e - 2, e - 1, -1):
            c = conv[i]
            if c:
                conv[i] = 0
                for j in range(e):
                    conv[i - e + j] = (conv[i - e + j] - c * self.modulus[j]) % p
        return self._undigits(conv[:e])

    def _build_tables(self):
        h, p, e = self.h, self.p, self.e
        if e == 1:
            idx = np.arange(h, dtype=np.int64)
            self.ADD = (idx[:, None] + idx[None, :]) % p
            self.SUB = (idx[:, None] - idx[None, :]) % p
            self.NEG = (-idx) % p
            self.MUL = (idx[:, None] * idx[None, :]) % p
        else:
            add = np.zeros((h, h), dtype=np.int64)
            mul = np.zeros((h, h), dtype=np.int64)
            for a in range(h):
                da = self._digits(a)
                for b in range(h):
                    db = self._digits(b)
                    add[a, b] = self._undigits([(x + y) % p for x, y in zip(da, db)])
                    mul[a, b] = self._mul_raw(a, b)
            self.ADD = add
            self.MUL = mul
            self.NEG = np.array(
                [self._undigits([(-x) % p for x in self._digits(a)]) for a in range(h)],
                dtype=np.int64,
            )
            sub = np.zeros((h, h), dtype=np.int64)
            for a in range(h):
                sub[a] = self.ADD[a, self.NEG]
            self.SUB = sub
        inv = np.zeros(h, dtype=np.int64)
        for a in range(1, h):
            hits = np.nonzero(self.MUL[a] == 1)[0]
            if len(hits) != 1:
                raise ValueError(f"digit {a} has no unique inverse; bad base modulus?")
            inv[a] = hits[0]
        self.INV = inv

    # int convenience wrappers (hot paths index the tables directly)
    def add(self, a, b):
        return int(self.ADD[a, b])

    def sub(self, a, b):
        return int(self.SUB[a, b])

    def mul(self, a, b):
        return int(self.MUL[a, b])

    def neg(self, a):
        return int(self.NEG[a])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in base field")
        return int(self.INV[a])


# ---------------------------------------------------------------------------
# polynomial helpers over a DigitField (dense digit lists, ascending degree)
# ---------------------------------------------------------------------------

def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(df, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    MUL, ADD = df.MUL, df.ADD
    for i, x in enumerate(a):
        if x:
            row = MUL[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = ADD[out[i + j], row[y]]
    return _ptrim(out)


def _pmod(df, a, m):
    a = list(a)
    _ptrim(a)
    dm = len(m) - 1
    inv_lead = df.inv(m[-1])
    SUB, MUL = df.SUB, df.MUL
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        factor = df.mul(a[-1], inv_lead)
        row = MUL[factor]
        for j, c in enumerate(m):
            if c:
                a[shift + j] = SUB[a[shift + j], row[c]]
        _ptrim(a)
    return a


def _pgcd(df, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(df, a, b)
    if a:
        inv_lead = df.inv(a[-1])
        a = [df.mul(c, inv_lead) for c in a]
    return a


def _ppow_h(df, base, m, times):
    """Raise a polynomial to the h-th power `times` times, mod m."""
    h = df.h
    out = list(base)
    for _ in range(times):
        acc = [1]
        sq = out
        e = h
        while e:
            if e & 1:
                acc = _pmod(df, _pmul(df, acc, sq), m)
            e >>= 1
            if e:
                sq = _pmod(df, _pmul(df, sq, sq), m)
        out = acc
    return out


def is_irreducible(df, coeffs):
    """Rabin test: monic ``coeffs`` (ascending, degree >= 1) over ``df``."""
    t = len(coeffs) - 1
    if t < 1 or coeffs[-1] != 1:
        raise ValueError("expected a monic polynomial of degree >= 1")
    if t == 1:
        return True
    if coeffs[0] == 0:  # divisible by x
        return False
    m = list(coeffs)
    x = [0, 1]
    # x^(h^t) == x mod m
    xht = _ppow_h(df, x, m, t)
    sub = [df.sub(a, b) for a, b in zip(xht + [0] * 2, x + [0] * len(xht))]
    if _ptrim(sub):
        return False
    # gcd(x^(h^(t/r)) - x, m) == 1 for every prime r | t
    for r in sorted(factorint(t)):
        xe = _ppow_h(df, x, m, t // r)
        diff = [df.sub(a, b) for a, b in zip(xe + [0] * 2, x + [0] * len(xe))]
        _ptrim(diff)
        g = _pgcd(df, m, diff)
        if len(g) != 1:
            return False
    return True


def lex_least_irreducible(h, t):
    """Lexicographically least monic irreducible of degree t over F_h.

    Candidates are ordered by the integer whose base-h digits are the
    non-leading coefficients in ascending degree order.
    """
    df = DigitField(h)
    for v in range(1, h**t):
        digits = []
        w = v
        for _ in range(t):
            digits.append(w % h)
            w //= h
        coeffs = digits + [1]
        if coeffs[0] != 0 and is_irreducible(df, coeffs):
            return coeffs
    raise ValueError(f"no irreducible of degree {t} over F_{h}")  # unreachable


# ---------------------------------------------------------------------------
# the tower
# ---------------------------------------------------------------------------

class FieldElement:
    """Immutable element of a FieldTower; digit tuple in the z-basis."""

    __slots__ = ("tower", "coeffs", "_arr")

    def __init__(self, tower, coeffs):
        self.tower = tower
        self.coeffs = coeffs
        self._arr = None

    def arr(self):
        if self._arr is None:
            self._arr = np.asarray(self.coeffs, dtype=np.int64)
        return self._arr

    def __add__(self, other):
        return self.tower.add(self, other)

    def __sub__(self, other):
        return self.tower.sub(self, other)

    def __neg__(self):
        return self.tower.neg(self)

    def __mul__(self, other):
        return self.tower.mul(self, other)

    def __truediv__(self, other):
        return self.tower.mul(self, self.tower.inv(other))

    def __pow__(self, e):
        return self.tower.pow(self, e)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.coeffs == other.coeffs
            and self.tower is other.tower
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def to_hex(self):
        return self.tower.to_hex(self)

    def __repr__(self):
        return f"<{self.to_hex()}>"


class FieldTower:
    """The chain F_h < F_{h^n} = F_q < F_{q^m} = F_{h^t}, t = n*m.

    Arithmetic is mod one registry polynomial of degree t; Frobenius maps
    are precomputed as F_h-linear matrices on digit vectors.
    """

    def __init__(self, h, n, m, modulus=None):
        p, e = _factor_prime_power(h)
        self.h = h
        self.n = n
        self.m = m
        self.t = n * m
        self.q = h**n
        self.df = DigitField(h)
        if modulus is None:
            key = f"{h},{self.t}"
            try:
                modulus = registry()["towers"][key]
            except KeyError:
                raise ValueError(f"no registry modulus for (h,t)=({h},{self.t})")
        self.modulus = tuple(modulus)
        if len(self.modulus) != self.t + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree t")
        if not is_irreducible(self.df, list(self.modulus)):
            raise ValueError(f"registry modulus for (h,t)=({h},{self.t}) is reducible")
        self._digit_width = len(format(h - 1, "x"))
        self._prime_base = self.df.e == 1
        self._build_reduction()
        self._frob_cache = {}
        self._gamma = None
        self._g = None
        self._expand_q_inv = None
        self.zero = FieldElement(self, (0,) * self.t)
        self.one = self.scalar(1)

    # -- construction ------------------------------------------------------

    def scalar(self, d):
        """Embed a base-field digit as a constant element."""
        return FieldElement(self, (d % self.h if self._prime_base else d,) + (0,) * (self.t - 1))

    def from_digits(self, seq):
        seq = tuple(int(d) for d in seq)
        if len(seq) != self.t or any(d < 0 or d >= self.h for d in seq):
            raise ValueError("bad digit vector")
        return FieldElement(self, seq)

    def from_int(self, v):
        """Element whose digits are the base-h digits of v (little-endian)."""
        digits = []
        for _ in range(self.t):
            digits.append(v % self.h)
            v //= self.h
        if v:
            raise ValueError("integer too large for this field")
        return FieldElement(self, tuple(digits))

    def random_element(self, rng):
        return FieldElement(self, tuple(int(x) for x in rng.integers(0, self.h, self.t)))

    def elements(self):
        """Iterate over the whole field (desk-scale only)."""
        size = self.h**self.t
        if size > 1 << 22:
            raise ValueError(f"field too large to enumerate ({size} elements)")
        for v in range(size):
            yield self.from_int(v)

    def z(self):
        return FieldElement(self, (0, 1) + (0,) * (self.t - 2)) if self.t > 1 else self.one

    # -- arithmetic --------------------------------------------------------

    def _build_reduction(self):
        # red[i] = digits of z^(t+i) mod P, for i in [0, t-2]
        t, df = self.t, self.df
        red = []
        # z^t = -(m_0 + m_1 z + ... + m_{t-1} z^{t-1})
        cur = [df.neg(c) for c in self.modulus[:t]]
        red.append(list(cur))
        for _ in range(t - 2):
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                row = df.MUL[carry]
                for j in range(t):
                    cur[j] = df.ADD[cur[j], row[red[0][j]]]
            red.append(list(cur))
        self._red = red
        self._red_np = np.asarray(red, dtype=np.int64) if red else np.zeros((0, t), dtype=np.int64)

    def add(self, x, y):
        self._check(x, y)
        if self._prime_base:
            return FieldElement(self, tuple(int(v) for v in (x.arr() + y.arr()) % self.h))
        ADD = self.df.ADD
        return FieldElement(self, tuple(int(ADD[a, b]) for a, b in zip(x.coeffs, y.coeffs)))

    def sub(self, x, y):
        self._check(x, y)
        if self._prime_base:
            return FieldElement(self, tuple(int(v) for v in (x.arr() - y.arr()) % self.h))
        SUB = self.df.SUB
        return FieldElement(self, tuple(int(SUB[a, b]) for a, b in zip(x.coeffs, y.coeffs)))

    def neg(self, x):
        if self._prime_base:
            return FieldElement(self, tuple(int(v) for v in (-x.arr()) % self.h))
        NEG = self.df.NEG
        return FieldElement(self, tuple(int(NEG[a]) for a in x.coeffs))

    def mul(self, x, y):
        self._check(x, y)
        t = self.t
        if self._prime_base:
            conv = np.convolve(x.arr(), y.arr()) % self.h
            if len(conv) > t:
                high = conv[t:]
                low = (conv[:t] + high @ self._red_np[: len(high)]) % self.h
            else:
                low = np.zeros(t, dtype=np.int64)
                low[: len(conv)] = conv
            return FieldElement(self, tuple(int(v) for v in low))
        df = self.df
        conv = [0] * (2 * t - 1)
        for i, a in enumerate(x.coeffs):
            if a:
                row = df.MUL[a]
                for j, b in enumerate(y.coeffs):
                    if b:
                        conv[i + j] = df.ADD[conv[i + j], row[b]]
        out = conv[:t]
        for i in range(t, 2 * t - 1):
            c = conv[i]
            if c:
                row = df.MUL[c]
                red = self._red[i - t]
                for j in range(t):
                    out[j] = df.ADD[out[j], row[red[j]]]
        return FieldElement(self, tuple(int(v) for v in out))

    def inv(self, x):
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid on representative polynomials
        df = self.df
        r0, r1 = list(self.modulus), _ptrim(list(x.coeffs))
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1
            q = [0] * max(1, len(r0) - len(r1) + 1)
            rem = list(r0)
            inv_lead = df.inv(r1[-1])
            while len(rem) >= len(r1) and rem:
                shift = len(rem) - len(r1)
                factor = df.mul(rem[-1], inv_lead)
                q[shift] = factor
                row = df.MUL[factor]
                for j, c in enumerate(r1):
                    if c:
                        rem[shift + j] = df.SUB[rem[shift + j], row[c]]
                _ptrim(rem)
            r0, r1 = r1, rem
            qs1 = _pmul(df, q, s1)
            new_s = [
                df.SUB[a, b]
                for a, b in zip(s0 + [0] * max(0, len(qs1) - len(s0)),
                                qs1 + [0] * max(0, len(s0) - len(qs1)))
            ]
            s0, s1 = s1, _ptrim(new_s)
        # r0 is gcd (a nonzero constant); normalize
        c_inv = df.inv(r0[0])
        out = [df.mul(c, c_inv) for c in s0]
        out += [0] * (self.t - len(out))
        return FieldElement(self, tuple(out))

    def pow(self, x, e):
        if e < 0:
            return self.pow(self.inv(x), -e)
        acc = self.one
        base = x
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return acc

    def _check(self, x, y):
        if x.tower is not self or y.tower is not self:
            raise ValueError("elements from different towers")

    # -- Frobenius and subfield --------------------------------------------

    def _frob_matrix(self, i):
        """t x t matrix over F_h of x -> x^(h^i), columns = images of z^u."""
        i %= self.t
        if i in self._frob_cache:
            return self._frob_cache[i]
        zh = self.pow(self.z(), self.h**i) if self.t > 1 else self.one
        cols = []
        acc = self.one
        for _ in range(self.t):
            cols.append(acc.coeffs)
            acc = self.mul(acc, zh)
        mat = np.asarray(cols, dtype=np.int64).T
        self._frob_cache[i] = mat
        return mat

    def frob(self, x, base, i):
        """x^(h^i) for base 'h', x^(q^i) for base 'q'; negative i inverts."""
        if base == "q":
            i = (i * self.n) % self.t
        elif base == "h":
            i %= self.t
        else:
            raise ValueError("base must be 'h' or 'q'")
        if i == 0:
            return x
        mat = self._frob_matrix(i)
        if self._prime_base:
            return FieldElement(self, tuple(int(v) for v in (mat @ x.arr()) % self.h))
        df = self.df
        out = [0] * self.t
        for u, d in enumerate(x.coeffs):
            if d:
                row = df.MUL[d]
                col = mat[:, u]
                for j in range(self.t):
                    if col[j]:
                        out[j] = df.ADD[out[j], row[col[j]]]
        return FieldElement(self, tuple(int(v) for v in out))

    def sigma(self, x, base, i=1):
        """Alias for frob; sigma_base 'h' is x^h, 'q' is x^q."""
        return self.frob(x, base, i)

    def is_in_subfield(self, x):
        return self.frob(x, "h", self.n) == x

    def fixed_field_degree(self, base):
        """Degree over F_h of the fixed field of the base-Frobenius."""
        return 1 if base == "h" else self.n

    # -- primitive elements -------------------------------------------------

    def primitive_element(self):
        """Deterministic search for a generator of the multiplicative group."""
        if self._gamma is not None:
            return self._gamma
        order = self.h**self.t - 1
        primes = sorted(factorint(order))
        v = 2 if self.t == 1 else self.h  # first candidate: z (or 2 in a prime field)
        while True:
            cand = self.from_int(v)
            if not cand.is_zero() and all(
                self.pow(cand, order // p) != self.one for p in primes
            ):
                self._gamma = cand
                return cand
            v += 1

    def subfield_generator(self):
        """Generator of F_q* = F_{h^n}*, as gamma^((h^t-1)/(q-1))."""
        if self._g is None:
            gamma = self.primitive_element()
            self._g = self.pow(gamma, (self.h**self.t - 1) // (self.q - 1))
        return self._g

    def subfield_elements(self):
        """Iterate over F_q = F_{h^n} inside the big field."""
        g = self.subfield_generator()
        basis = []
        acc = self.one
        for _ in range(self.n):
            basis.append(acc)
            acc = self.mul(acc, g)
        for v in range(self.q):
            digits = []
            w = v
            for _ in range(self.n):
                digits.append(w % self.h)
                w //= self.h
            out = self.zero
            for d, b in zip(digits, basis):
                if d:
                    out = self.add(out, self.mul(self.scalar(d), b))
            yield out

    # -- expansion ----------------------------------------------------------

    def digits(self, x):
        """F_h coordinates in the polynomial basis (identity on storage)."""
        return x.coeffs

    def expand(self, x, base):
        """Coordinate vector of x over the base subfield, as field elements.

        base 'h': the t digits, embedded as constants.
        base 'q': the m coordinates w.r.t. the F_q-basis {1, z, ..., z^(m-1)}.
        """
        if base == "h":
            return [self.scalar(d) for d in x.coeffs]
        if base != "q":
            raise ValueError("base must be 'h' or 'q'")
        if self._expand_q_inv is None:
            self._build_expand_q()
        from . import linalg

        vec = np.asarray(x.coeffs, dtype=np.int64)
        coords_h = linalg.matvec_h(self.df, self._expand_q_inv, vec)
        g = self.subfield_generator()
        gpows = []
        acc = self.one
        for _ in range(self.n):
            gpows.append(acc)
            acc = self.mul(acc, g)
        out = []
        for j in range(self.m):
            c = self.zero
            for u in range(self.n):
                d = int(coords_h[j * self.n + u])
                if d:
                    c = self.add(c, self.mul(self.scalar(d), gpows[u]))
            out.append(c)
        return out

    def recombine(self, coords, base):
        """Inverse of expand: coords over the base subfield -> element."""
        if base == "h":
            out = self.zero
            zp = self.one
            for c in coords:
                out = self.add(out, self.mul(c, zp))
                zp = self.mul(zp, self.z())
            return out
        if base != "q":
            raise ValueError("base must be 'h' or 'q'")
        out = self.zero
        zp = self.one
        for c in coords:
            out = self.add(out, self.mul(c, zp))
            zp = self.mul(zp, self.z())
        return out

    def _build_expand_q(self):
        from . import linalg

        g = self.subfield_generator()
        cols = []
        zj = self.one
        for _ in range(self.m):
            gu = self.one
            for _ in range(self.n):
                cols.append(self.mul(gu, zj).coeffs)
                gu = self.mul(gu, g)
            zj = self.mul(zj, self.z())
        T = np.asarray(cols, dtype=np.int64).T
        Tinv = linalg.inverse_h(self.df, T)
        if Tinv is None:
            raise ValueError("tower basis {g^u z^j} is singular; bad registry entry")
        self._expand_q_inv = Tinv

    def linear_map_matrix(self, fn):
        """t x t F_h matrix of an F_h-linear map, columns = images of z^u."""
        cols = []
        for u in range(self.t):
            e = FieldElement(self, tuple(1 if i == u else 0 for i in range(self.t)))
            cols.append(fn(e).coeffs)
        return np.asarray(cols, dtype=np.int64).T

    def mul_matrix(self, c):
        """Matrix of v -> c * v."""
        return self.linear_map_matrix(lambda v: self.mul(c, v))

    def frob_matrix(self, base, i):
        """Matrix of v -> frob(v, base, i)."""
        step = 1 if base == "h" else self.n
        return self._frob_matrix((i * step) % self.t)

    # -- serialization -------------------------------------------------------

    def to_hex(self, x):
        w = self._digit_width
        return "".join(format(d, f"0{w}x") for d in x.coeffs)

    def from_hex(self, s):
        w = self._digit_width
        if len(s) != w * self.t:
            raise ValueError(f"hex string of length {w * self.t} expected")
        digits = [int(s[i * w : (i + 1) * w], 16) for i in range(self.t)]
        return self.from_digits(digits)

    def __repr__(self):
        return f"FieldTower(h={self.h}, n={self.n}, m={self.m})"


@functools.lru_cache(maxsize=None)
def load_tower(h, n, m):
    """Registry-backed tower, cached per (h, n, m)."""
    return FieldTower(h, n, m)
