"""Skew polynomials over the top field, twisted by a Frobenius power.

A SkewPoly carries ``sigma_base`` ('h' or 'q'), naming which Frobenius
generates the twisting automorphism: x * c = sigma(c) * x.  Evaluation is
the generalized operator evaluation

    f(b)_a = sum_i f_i sigma^i(b) N_i(a),      N_i(a) = prod_{j<i} sigma^j(a),

which is linear over the fixed field of sigma.  Conjugacy of evaluation
parameters (b = sigma(c) a / c for some c) partitions the field into
classes; interpolation needs pairwise non-conjugate class representatives
and, within a class, evaluation points independent over the fixed field.
"""

from __future__ import annotations

from . import linalg

__all__ = [
    "SkewPoly",
    "gen_power",
    "op_eval",
    "product_rule_check",
    "conjugate_test",
    "class_representatives",
    "nonzero_class_count",
    "lagrange_interpolate",
    "count_roots_bound_check",
]


class SkewPoly:
    """Coefficient tuple (ascending degree) with twisted multiplication."""

    __slots__ = ("tower", "sigma_base", "coeffs")

    def __init__(self, tower, sigma_base, coeffs):
        if sigma_base not in ("h", "q"):
            raise ValueError("sigma_base must be 'h' or 'q'")
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.tower = tower
        self.sigma_base = sigma_base
        self.coeffs = tuple(coeffs)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, tower, sigma_base):
        return cls(tower, sigma_base, ())

    @classmethod
    def constant(cls, tower, sigma_base, c):
        return cls(tower, sigma_base, (c,))

    @classmethod
    def x(cls, tower, sigma_base):
        return cls(tower, sigma_base, (tower.zero, tower.one))

    @classmethod
    def monomial(cls, tower, sigma_base, c, i):
        return cls(tower, sigma_base, (tower.zero,) * i + (c,))

    # -- basics ---------------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Degree as an int; -1 stands in for the zero polynomial."""
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.tower.zero

    def __eq__(self, other):
        return (
            isinstance(other, SkewPoly)
            and self.sigma_base == other.sigma_base
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.sigma_base, self.coeffs))

    def sigma(self, x, i=1):
        return self.tower.frob(x, self.sigma_base, i)

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(
            self.tower, self.sigma_base, [self[i] + other[i] for i in range(n)]
        )

    def __sub__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(
            self.tower, self.sigma_base, [self[i] - other[i] for i in range(n)]
        )

    def __neg__(self):
        return SkewPoly(self.tower, self.sigma_base, [-c for c in self.coeffs])

    def __mul__(self, other):
        """Twisted convolution: (f*g)_k = sum f_i sigma^i(g_j), i+j=k."""
        self._check(other)
        T = self.tower
        if self.is_zero() or other.is_zero():
            return SkewPoly.zero(T, self.sigma_base)
        out = [T.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, fi in enumerate(self.coeffs):
            if fi.is_zero():
                continue
            for j, gj in enumerate(other.coeffs):
                if gj.is_zero():
                    continue
                out[i + j] = out[i + j] + T.mul(fi, self.sigma(gj, i))
        return SkewPoly(T, self.sigma_base, out)

    def scale(self, c):
        """Left multiplication by a constant."""
        return SkewPoly(self.tower, self.sigma_base, [c * v for v in self.coeffs])

    def _check(self, other):
        if self.sigma_base != other.sigma_base or self.tower is not other.tower:
            raise ValueError("mixed skew rings")

    # -- evaluation --------------------------------------------------------------

    def op_eval(self, b, a):
        return op_eval(self, b, a)

    def frob_twist(self, j):
        """Coefficient-wise x -> x^(q^j)."""
        T = self.tower
        return SkewPoly(
            T, self.sigma_base, [T.frob(c, "q", j) for c in self.coeffs]
        )

    def left_strip_x(self):
        """Write self = x^d * g with g(0) != 0; returns (d, g).

        Left division twists coefficients back: g_j = sigma^(-d)(f_{j+d}).
        """
        if self.is_zero():
            raise ValueError("cannot strip the zero polynomial")
        d = next(i for i, c in enumerate(self.coeffs) if not c.is_zero())
        if d == 0:
            return 0, self
        g = [self.sigma(c, -d) for c in self.coeffs[d:]]
        return d, SkewPoly(self.tower, self.sigma_base, g)

    def __repr__(self):
        if self.is_zero():
            return "SkewPoly(0)"
        return "SkewPoly(" + " + ".join(
            f"{c.to_hex()}*x^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()
        ) + f"; sigma={self.sigma_base})"


def gen_power(tower, sigma_base, a, i):
    """N_i(a) = a * sigma(a) * ... * sigma^(i-1)(a); N_0 = 1."""
    if i < 0:
        raise ValueError("gen_power needs i >= 0")
    out = tower.one
    for j in range(i):
        out = tower.mul(out, tower.frob(a, sigma_base, j))
    return out


def op_eval(f, b, a):
    """Generalized operator evaluation f(b)_a = sum f_i sigma^i(b) N_i(a)."""
    T = f.tower
    out = T.zero
    Ni = T.one  # N_i(a)
    bi = b      # sigma^i(b)
    for i, fi in enumerate(f.coeffs):
        if not fi.is_zero():
            out = out + T.mul(fi, T.mul(bi, Ni))
        if i + 1 < len(f.coeffs):
            Ni = T.mul(Ni, T.frob(a, f.sigma_base, i))
            bi = T.frob(bi, f.sigma_base, 1)
    return out


def product_rule_check(f, g, b, a):
    """Oracle for (f*g)(b)_a == f(g(b)_a)_a; both sides computed independently."""
    lhs = op_eval(f * g, b, a)
    rhs = op_eval(f, op_eval(g, b, a), a)
    return lhs == rhs


def nonzero_class_count(tower, sigma_base):
    """Number of nonzero sigma-conjugacy classes: |fixed field| - 1."""
    return (tower.h if sigma_base == "h" else tower.q) - 1


def conjugate_test(tower, sigma_base, a, b):
    """True iff a and b are sigma-conjugate (b = sigma(c) a c^-1, some c).

    The image of c -> sigma(c)/c is the subgroup of (r-1)-th powers where
    r = |fixed field|, so the test is one exponentiation.
    """
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    r = tower.h if sigma_base == "h" else tower.q
    order = tower.h**tower.t - 1
    ratio = tower.mul(a, tower.inv(b))
    return tower.pow(ratio, order // (r - 1)) == tower.one


def class_representatives(tower, sigma_base, count):
    """Deterministic pairwise non-conjugate nonzero elements.

    Powers gamma^0, gamma^1, ... of the subfield generator (sigma_base 'h')
    or the primitive element (sigma_base 'q') are filtered greedily.
    """
    total = nonzero_class_count(tower, sigma_base)
    if count > total:
        raise ValueError(
            f"asked for {count} class representatives but only {total} nonzero "
            f"classes exist for sigma_base={sigma_base!r}"
        )
    gen = (
        tower.subfield_generator() if sigma_base == "h" else tower.primitive_element()
    )
    reps = []
    cand = tower.one
    while len(reps) < count:
        if all(not conjugate_test(tower, sigma_base, cand, r) for r in reps):
            reps.append(cand)
        cand = tower.mul(cand, gen)
    return reps


def lagrange_interpolate(tower, sigma_base, groups):
    """Unique f with op_eval(f, b, a_i) = c for every point, deg f < #points.

    ``groups`` is a sequence of (a_i, [(b, c), ...]); the a_i must be
    pairwise non-conjugate and each group's b's independent over the fixed
    field of sigma.
    """
    a_list = [a for a, _ in groups]
    for i in range(len(a_list)):
        for j in range(i + 1, len(a_list)):
            if conjugate_test(tower, sigma_base, a_list[i], a_list[j]):
                raise ValueError(f"conjugate class representatives at {i} and {j}")
    npoints = sum(len(pts) for _, pts in groups)
    base = sigma_base
    for idx, (a, pts) in enumerate(groups):
        mat = [[c for c in tower.expand(b, base)] for b, _ in pts]
        if linalg.field_rank(tower, mat) != len(pts):
            raise ValueError(f"dependent evaluation points in group {idx}")
    rows, rhs = [], []
    for a, pts in groups:
        for b, c in pts:
            row = []
            Ni = tower.one
            for i in range(npoints):
                row.append(tower.mul(tower.frob(b, sigma_base, i), Ni))
                Ni = tower.mul(Ni, tower.frob(a, sigma_base, i))
            rows.append(row)
            rhs.append(c)
    sol = linalg.field_solve_affine(tower, rows, rhs)
    if sol is None or sol[1]:
        raise ValueError("interpolation system is singular; invalid point set")
    return SkewPoly(tower, sigma_base, sol[0])


def count_roots_bound_check(f, groups):
    """Oracle for the root bound: a nonzero f vanishing on the given points
    admits at most deg(f) of them, counting fixed-field-independent points
    per class.  Raises if the points are not actually roots or the classes
    collide; returns the truth of (sum of block ranks) <= deg f.
    """
    if f.is_zero():
        raise ValueError("root bound applies to nonzero polynomials")
    tower = f.tower
    a_list = [a for a, _ in groups]
    for i in range(len(a_list)):
        for j in range(i + 1, len(a_list)):
            if conjugate_test(tower, f.sigma_base, a_list[i], a_list[j]):
                raise ValueError("conjugate classes in root set")
    total = 0
    for a, bs in groups:
        for b in bs:
            if not op_eval(f, b, a).is_zero():
                raise ValueError("given point is not a root")
        mat = [[c for c in tower.expand(b, f.sigma_base)] for b in bs]
        total += linalg.field_rank(tower, mat) if mat else 0
    return total <= f.degree
