"""Folded linearized Reed-Solomon codes and their list decoder.

Folding stacks lam consecutive evaluations at powers of a primitive
element gamma into the rows of each codeword column; the twist here is
always the q-Frobenius.  Block i (one per conjugacy class) is the
lam x eta grid with entry (r, c) = op_eval(f, gamma^(c*lam + r), a_i).

Decoding slides an s-high window down every column: interpolation yields
Q_0..Q_s with

    Q_0(x) + Q_1(x) f(x) + Q_2(x) f(x) gamma + ... + Q_s(x) f(x) gamma^(s-1) = 0

for every message within the folded radius.  Equating x^r coefficients
gives ordinary polynomials R_u(x) = q_{1,u} + q_{2,u} x + ... + q_{s,u} x^(s-1)
and the recurrence

    q_{0,r} + sum_{v <= r} R_{r-v}(sigma^r(gamma)) sigma^(r-v)(f_v) = 0,

so f_r is forced unless R_0(gamma^(q^r)) = 0.  Since deg R_0 <= s-1 < m
and the arguments cycle with period m, at most ceil(k/m)*(s-1) indices
are free; the solution set is q-affine and is handed to a subspace-
evasive message restriction to pin the list size.
"""

from __future__ import annotations

import json
import warnings

import numpy as np

from . import linalg, skew
from .designs import AffineSubspace, EvasiveSet, intersect_evasive
from .metric import BlockProfile, SumRankVector
from .skew import SkewPoly

__all__ = [
    "FlrsParams",
    "flrs_encode",
    "FlrsInterpolation",
    "flrs_interpolate",
    "flrs_key_equation_holds",
    "FlrsSolution",
    "flrs_solve",
    "flrs_decode_list",
    "flrs_params_to_json",
    "flrs_params_from_json",
    "folded_word_to_json",
    "folded_word_from_json",
]


class FlrsParams:
    """Folding lam, block length n = N/lam, ell classes, dimension k."""

    def __init__(self, tower, lam, n, ell, k, epsilon=0.0, evasive_seed=0, a=None):
        self.tower = tower
        self.lam = int(lam)
        self.n = int(n)
        self.ell = int(ell)
        self.k = int(k)
        self.epsilon = float(epsilon)
        self.evasive_seed = int(evasive_seed)
        self.N = self.lam * self.n
        if self.n % self.ell:
            raise ValueError("class count must divide the block length")
        self.eta = self.n // self.ell
        self.gamma = tower.primitive_element()
        self.a = tuple(a) if a is not None else tuple(
            skew.class_representatives(tower, "q", self.ell)
        )
        self.profile = BlockProfile((self.eta,) * self.ell, base="q", fold=self.lam)
        self._points = None

    def validate(self):
        issues = []
        T = self.tower
        if not 1 <= self.k <= self.n:
            issues.append(("k-range", f"k={self.k} outside [1, {self.n}]"))
        if len(self.a) != self.ell:
            issues.append(("shape", "one class representative per block required"))
            return issues
        classes = skew.nonzero_class_count(T, "q")
        if self.ell > classes:
            issues.append(
                ("class-count", f"{self.ell} blocks but only {classes} classes")
            )
        for i, ai in enumerate(self.a):
            if ai.is_zero():
                issues.append(("zero-rep", f"a[{i}] is zero"))
        for i in range(self.ell):
            for j in range(i + 1, self.ell):
                if skew.conjugate_test(T, "q", self.a[i], self.a[j]):
                    issues.append(
                        ("conjugate", f"a[{i}] and a[{j}] share a conjugacy class")
                    )
        per_class = self.eta * self.lam
        if per_class > T.m:
            issues.append(
                (
                    "points-dependent",
                    f"{per_class} unfolded points per class exceed m={T.m}; "
                    "they cannot be F_q-independent",
                )
            )
        else:
            mat = [T.expand(p, "q") for p in self.points()]
            if linalg.field_rank(T, mat) != per_class:
                issues.append(("points-dependent", "gamma powers are F_q-dependent"))
        order = T.h**T.t - 1
        if T.pow(self.gamma, order) != T.one or any(
            T.pow(self.gamma, order // p) == T.one
            for p in _prime_divisors(order)
        ):
            issues.append(("gamma", "gamma is not primitive"))
        return issues

    def warn_regime(self):
        m, n = self.tower.m, self.n
        if m * 4 < n or m > 4 * n:
            warnings.warn(
                f"m={m} is far from the m=Theta(n) regime (n={n}); complexity "
                "claims degrade, correctness does not",
                stacklevel=2,
            )

    def require_valid(self):
        bad = self.validate()
        if bad:
            raise ValueError(f"invalid parameters: {bad}")
        self.warn_regime()

    def points(self):
        """Unfolded evaluation points gamma^0 .. gamma^(eta*lam - 1)."""
        if self._points is None:
            T = self.tower
            pts = []
            acc = T.one
            for _ in range(self.eta * self.lam):
                pts.append(acc)
                acc = T.mul(acc, self.gamma)
            self._points = pts
        return self._points

    def radius(self, s):
        """floor of s/(s+1) * (n(lam-s+1) - k + 1)/(lam-s+1)."""
        num = s * (self.n * (self.lam - s + 1) - self.k + 1)
        den = (s + 1) * (self.lam - s + 1)
        return num // den

    def solution_dim_bound(self, s):
        return -(-self.k // self.tower.m) * (s - 1)

    def evasive_set(self):
        return EvasiveSet(self.tower, self.k, self.epsilon, self.evasive_seed)

    def random_message(self, rng):
        return tuple(self.tower.random_element(rng) for _ in range(self.k))

    def __repr__(self):
        return (
            f"FlrsParams(h={self.tower.h}, q={self.tower.q}, m={self.tower.m}, "
            f"lam={self.lam}, n={self.n}, ell={self.ell}, k={self.k})"
        )


def _prime_divisors(v):
    from sympy import factorint

    return sorted(factorint(v))


def flrs_encode(params, msg):
    """lam x eta block per class; entry (r, c) = f(gamma^(c*lam+r))_(a_i)."""
    if len(msg) != params.k:
        raise ValueError(f"message length {len(msg)} != k={params.k}")
    params.require_valid()
    T = params.tower
    f = SkewPoly(T, "q", msg)
    pts = params.points()
    blocks = []
    for a in params.a:
        grid = [
            [skew.op_eval(f, pts[c * params.lam + r], a) for c in range(params.eta)]
            for r in range(params.lam)
        ]
        blocks.append(grid)
    return SumRankVector(T, params.profile, blocks)


class FlrsInterpolation:
    __slots__ = ("params", "s", "D", "polys")

    def __init__(self, params, s, D, polys):
        self.params = params
        self.s = s
        self.D = D
        self.polys = list(polys)
        if all(p.is_zero() for p in self.polys):
            raise ValueError("interpolation polynomial is zero")
        if self.polys[0].degree > D + params.k - 1 or any(
            p.degree > D for p in self.polys[1:]
        ):
            raise ValueError("interpolation degree bounds violated")

    def residuals(self, y):
        params = self.params
        T = params.tower
        pts = params.points()
        out = []
        for kappa in range(params.ell):
            grid = y.blocks[kappa]
            a = params.a[kappa]
            for i in range(params.eta):
                for j in range(params.lam - self.s + 1):
                    p = i * params.lam + j
                    acc = skew.op_eval(self.polys[0], pts[p], a)
                    for r in range(1, self.s + 1):
                        pos = p + r - 1
                        yv = grid[pos % params.lam][pos // params.lam]
                        acc = acc + skew.op_eval(self.polys[r], yv, a)
                    out.append(acc)
        return out


def flrs_degree_bound(params, s):
    return (params.n * (params.lam - s + 1) - params.k + 1) // (s + 1)


def flrs_interpolate(params, y, s):
    """Nonzero Q vanishing on every sliding window of the received word."""
    if not 1 <= s <= params.lam:
        raise ValueError(f"s={s} outside [1, lam={params.lam}]")
    if y.profile != params.profile:
        raise ValueError("received word profile mismatch")
    params.require_valid()
    T = params.tower
    k = params.k
    D = flrs_degree_bound(params, s)
    constraints = params.n * (params.lam - s + 1)
    unknowns = (D + 1) * (s + 1) + k - 1
    if unknowns <= constraints:
        raise AssertionError("unknown count must exceed constraint count")
    pts = params.points()
    rows = []
    for kappa in range(params.ell):
        grid = y.blocks[kappa]
        a = params.a[kappa]
        for i in range(params.eta):
            for j in range(params.lam - s + 1):
                p = i * params.lam + j
                row = []
                Ni = T.one
                bu = pts[p]
                for u in range(D + k):
                    row.append(T.mul(bu, Ni))
                    Ni = T.mul(Ni, T.frob(a, "q", u))
                    bu = T.frob(bu, "q", 1)
                for r in range(1, s + 1):
                    pos = p + r - 1
                    yv = grid[pos % params.lam][pos // params.lam]
                    Ni = T.one
                    yu = yv
                    for u in range(D + 1):
                        row.append(T.mul(yu, Ni))
                        Ni = T.mul(Ni, T.frob(a, "q", u))
                        yu = T.frob(yu, "q", 1)
                rows.append(row)
    vec = linalg.field_kernel_vector(T, rows, unknowns)
    if vec is None:
        raise AssertionError("homogeneous system unexpectedly had full rank")
    polys = [SkewPoly(T, "q", vec[: D + k])]
    pos = D + k
    for _ in range(s):
        polys.append(SkewPoly(T, "q", vec[pos : pos + D + 1]))
        pos += D + 1
    Q = FlrsInterpolation(params, s, D, polys)
    bad = [r for r in Q.residuals(y) if not r.is_zero()]
    if bad:
        raise AssertionError("interpolation residuals are nonzero")
    return Q


def flrs_key_equation_holds(Q, msg):
    """Skew-arithmetic oracle for Q_0 + sum_j Q_j * f * gamma^(j-1) = 0."""
    params = Q.params
    T = params.tower
    f = SkewPoly(T, "q", msg)
    acc = Q.polys[0]
    gp = T.one
    for j in range(1, Q.s + 1):
        acc = acc + Q.polys[j] * f * SkewPoly.constant(T, "q", gp)
        gp = T.mul(gp, params.gamma)
    return acc.is_zero()


class FlrsSolution:
    """Affine solution space with its forward-substitution bookkeeping."""

    __slots__ = ("space", "free_indices", "dim_q")

    def __init__(self, space, free_indices, dim_q):
        self.space = space
        self.free_indices = free_indices
        self.dim_q = dim_q

    @property
    def free_count(self):
        return len(self.free_indices)

    @property
    def is_empty(self):
        return self.space is None

    def solution_dim(self):
        """Dimension on the F_{q^m} scale (0 when the space is a point)."""
        m = 1 if self.space is None else self.space.tower.m
        return -(-self.dim_q // m) if self.dim_q else 0

    def contains(self, msg):
        return self.space is not None and self.space.contains(msg)


def flrs_solve(Q, params):
    """All messages satisfying the key equation, as a q-affine space."""
    T = params.tower
    k = params.k
    s = Q.s
    polys = list(Q.polys)
    strip = min(
        (next(i for i, c in enumerate(p.coeffs) if not c.is_zero()))
        for p in polys
        if not p.is_zero()
    )
    if strip:
        polys = [
            SkewPoly(T, "q", [T.frob(c, "q", -strip) for c in p.coeffs[strip:]])
            if not p.is_zero()
            else p
            for p in polys
        ]
    if all(p.is_zero() for p in polys[1:]):
        return FlrsSolution(None, (), 0)

    u_max = max(p.degree for p in polys[1:])
    r_max = max(polys[0].degree, u_max + k - 1)
    m = T.m

    def R_eval(u, x):
        # ordinary polynomial R_u at x
        acc = T.zero
        xp = T.one
        for j in range(1, s + 1):
            c = polys[j][u]
            if not c.is_zero():
                acc = acc + T.mul(c, xp)
            xp = T.mul(xp, x)
        return acc

    # forced/free bookkeeping for the consistency invariant
    free_indices = tuple(
        r for r in range(k) if R_eval(0, T.frob(params.gamma, "q", r)).is_zero()
    )

    # unknown c_{v,w}: f_v = sum_w c_{v,w} z^w, coefficients in F_q
    zpows = []
    acc = T.one
    for _ in range(m):
        zpows.append(acc)
        acc = T.mul(acc, T.z())
    rows = []
    rhs = []
    for r in range(r_max + 1):
        sig_r_gamma = T.frob(params.gamma, "q", r)
        coeffs = [T.zero] * (k * m)
        for v in range(max(0, r - u_max), min(r, k - 1) + 1):
            Rval = R_eval(r - v, sig_r_gamma)
            if Rval.is_zero():
                continue
            for w in range(m):
                coeffs[v * m + w] = coeffs[v * m + w] + T.mul(
                    Rval, T.frob(zpows[w], "q", r - v)
                )
        rhs_el = T.neg(polys[0][r])
        if all(c.is_zero() for c in coeffs) and rhs_el.is_zero():
            continue
        coeff_cols = [T.expand(c, "q") for c in coeffs]
        rhs_cols = T.expand(rhs_el, "q")
        for w in range(m):
            rows.append([col[w] for col in coeff_cols])
            rhs.append(rhs_cols[w])
    if not rows:
        rows = [[T.zero] * (k * m)]
        rhs = [T.zero]
    sol = linalg.field_solve_affine(T, rows, rhs)
    if sol is None:
        return FlrsSolution(None, free_indices, 0)
    offset_q, basis_q = sol
    dim_q = len(basis_q)

    def recombine_vec(flat):
        return tuple(
            sum((flat[v * m + w] * zpows[w] for w in range(m)), T.zero)
            for v in range(k)
        )

    offset = recombine_vec(offset_q)
    gpows = []
    acc = T.one
    for _ in range(T.n):
        gpows.append(acc)
        acc = T.mul(acc, T.subfield_generator())
    basis_h = []
    for b in basis_q:
        vec = recombine_vec(b)
        for gp in gpows:
            basis_h.append(tuple(gp * x for x in vec))
    space = AffineSubspace(T, k, offset, basis_h)
    bound = params.solution_dim_bound(s)
    if len(free_indices) > bound:
        raise AssertionError(
            f"free index count {len(free_indices)} exceeds the bound {bound}"
        )
    if dim_q > m * len(free_indices):
        raise AssertionError("solution dimension exceeds the free-parameter budget")
    return FlrsSolution(space, free_indices, dim_q)


def flrs_decode_list(params, y, s, evasive=None, max_points=10**6):
    """Interpolate, solve, and intersect with the evasive message set."""
    Q = flrs_interpolate(params, y, s)
    sol = flrs_solve(Q, params)
    if sol.is_empty:
        return []
    S = evasive if evasive is not None else params.evasive_set()
    return intersect_evasive(S, sol.space, max_points)


# ---------------------------------------------------------------------------
# files and wire formats
# ---------------------------------------------------------------------------

def flrs_params_to_json(params):
    T = params.tower
    doc = {
        "family": "flrs",
        "h": T.h,
        "n_sub": T.n,
        "m": T.m,
        "lambda": params.lam,
        "N": params.N,
        "ell": params.ell,
        "k": params.k,
        "epsilon": params.epsilon,
        "evasive_seed": params.evasive_seed,
        "a": [v.to_hex() for v in params.a],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def flrs_params_from_json(text, tower_loader=None):
    from .gf import load_tower

    doc = json.loads(text)
    if doc.get("family") != "flrs":
        raise ValueError("not an FLRS parameter file")
    loader = tower_loader or load_tower
    T = loader(doc["h"], doc["n_sub"], doc["m"])
    lam = doc["lambda"]
    n = doc["N"] // lam
    a = [T.from_hex(sv) for sv in doc["a"]] if "a" in doc else None
    return FlrsParams(
        T,
        lam,
        n,
        doc["ell"],
        doc["k"],
        epsilon=doc.get("epsilon", 0.0),
        evasive_seed=doc.get("evasive_seed", 0),
        a=a,
    )


def folded_word_to_json(word):
    """Columns serialized column-major within each block."""
    lam = word.profile.fold
    blocks = []
    for grid in word.blocks:
        width = len(grid[0])
        blocks.append(
            [[grid[r][c].to_hex() for r in range(lam)] for c in range(width)]
        )
    return json.dumps({"fold": lam, "blocks": blocks}, sort_keys=True)


def folded_word_from_json(text, params):
    doc = json.loads(text)
    T = params.tower
    lam = doc["fold"]
    blocks = []
    for cols in doc["blocks"]:
        width = len(cols)
        grid = [
            [T.from_hex(cols[c][r]) for c in range(width)] for r in range(lam)
        ]
        blocks.append(grid)
    return SumRankVector(T, params.profile, blocks)
