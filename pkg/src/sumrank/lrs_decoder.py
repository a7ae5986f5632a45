"""Linear-algebraic list decoding for LRS codes.

Three stages, each a separate entry point so tests can cross-check them:

1. ``interpolate`` builds a nonzero multivariate skew polynomial
   Q = Q_0 + Q_1 y_1 + ... + Q_s y_s whose generalized evaluations vanish
   on the received word and its q-power twists.
2. ``solve_key_equation`` turns Q into the space of all messages f with
   Q_0 + sum_j Q_j * f^(q^(j-1)) = 0.  Equating x^i coefficients gives

       q_{0,i} + sum_{r<=i} R_{i-r}(sigma^(i-r)(f_r)) = 0,
       R_u(x) = q_{1,u} x + q_{2,u} x^q + ... + q_{s,u} x^(q^(s-1)),

   so each coefficient, given the earlier ones, ranges over a coset of
   ker R_0 -- a periodic structure with q-coset steps of dimension
   <= s-1.  The returned object keeps the canonical data (B = matrix of
   R_0, offsets, prefix maps) plus the coefficient equations beyond
   index k, so membership is exact, not an over-approximation.
3. ``decode_list`` stacks the key-equation system with the membership
   constraints of a subspace-design selection and solves one affine
   system over F_h.
"""

from __future__ import annotations

import numpy as np

from . import linalg, skew
from .designs import AffineSubspace, intersect_periodic, vector_digits
from .skew import SkewPoly

__all__ = [
    "InterpolationPoly",
    "interpolate",
    "key_equation_holds",
    "PeriodicSubspace",
    "solve_key_equation",
    "decode_list",
]


class InterpolationPoly:
    """Q_0..Q_s with deg Q_0 <= D+k-1 and deg Q_i <= D."""

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
        """Evaluations at every received position; all must be zero."""
        params = self.params
        T = params.tower
        out = []
        for a, blk, yblk in zip(params.a, params.beta, y.blocks):
            for b, yv in zip(blk, yblk):
                acc = skew.op_eval(self.polys[0], b, a)
                for r in range(1, self.s + 1):
                    acc = acc + skew.op_eval(
                        self.polys[r], T.frob(yv, "q", r - 1), a
                    )
                out.append(acc)
        return out


def interpolation_degree_bound(params, s):
    return (params.n - params.k + 1) // (s + 1)


def interpolate(params, y, s):
    """Nonzero Q vanishing on the received word (Gaussian elimination;
    the kernel vector is pinned by the first-free-variable rule)."""
    if not 1 <= s <= params.tower.m:
        raise ValueError(f"s={s} outside [1, m={params.tower.m}]")
    if y.profile != params.profile:
        raise ValueError("received word profile mismatch")
    params.require_decodable()
    T = params.tower
    k = params.k
    D = interpolation_degree_bound(params, s)
    unknowns = (D + 1) * (s + 1) + k - 1
    if unknowns <= params.n:
        raise AssertionError("unknown count must exceed constraint count")
    rows = []
    for a, blk, yblk in zip(params.a, params.beta, y.blocks):
        for b, yv in zip(blk, yblk):
            row = []
            # Q_0 columns: sigma^u(b) N_u(a), u <= D+k-1
            Ni = T.one
            bu = b
            for u in range(D + k):
                row.append(T.mul(bu, Ni))
                Ni = T.mul(Ni, T.frob(a, params.sigma_base, u))
                bu = T.frob(bu, params.sigma_base, 1)
            # Q_r columns: sigma^u(y^(q^(r-1))) N_u(a), u <= D
            for r in range(1, s + 1):
                yr = T.frob(yv, "q", r - 1)
                Ni = T.one
                yu = yr
                for u in range(D + 1):
                    row.append(T.mul(yu, Ni))
                    Ni = T.mul(Ni, T.frob(a, params.sigma_base, u))
                    yu = T.frob(yu, params.sigma_base, 1)
            rows.append(row)
    vec = linalg.field_kernel_vector(T, rows, unknowns)
    if vec is None:
        raise AssertionError("homogeneous system unexpectedly had full rank")
    polys = [SkewPoly(T, params.sigma_base, vec[: D + k])]
    pos = D + k
    for _ in range(s):
        polys.append(SkewPoly(T, params.sigma_base, vec[pos : pos + D + 1]))
        pos += D + 1
    Q = InterpolationPoly(params, s, D, polys)
    bad = [r for r in Q.residuals(y) if not r.is_zero()]
    if bad:
        raise AssertionError("interpolation residuals are nonzero")
    return Q


def key_equation_holds(Q, msg):
    """Whether Q_0 + sum_j Q_j * f^(q^(j-1)) is the zero polynomial.

    Computed through skew multiplication and Frobenius twists only, so it
    serves as an independent oracle for the linear-algebra solver.
    """
    params = Q.params
    f = SkewPoly(params.tower, params.sigma_base, msg)
    acc = Q.polys[0]
    for j in range(1, Q.s + 1):
        acc = acc + Q.polys[j] * f.frob_twist(j - 1)
    return acc.is_zero()


class PeriodicSubspace:
    """Solution set of the key equation, in canonical + tail form.

    ``B`` is the F_h matrix of R_0 acting on one coefficient; its kernel
    (the coset step) is an F_q-subspace of q-dimension at most s-1.
    ``offsets[i]`` and ``prefix_maps[(i, r)]`` give the block equations
    for i < k; ``affine_system`` additionally stacks the equations for
    i >= k so that membership is exactly the key equation.
    """

    def __init__(self, tower, sigma_base, k, s, B, offsets, prefix_maps,
                 tail_rows, tail_rhs, empty=False, degenerate=False):
        self.tower = tower
        self.sigma_base = sigma_base
        self.k = k
        self.s = s
        self.B = B
        self.offsets = offsets
        self.prefix_maps = prefix_maps
        self._tail = (tail_rows, tail_rhs)
        self.empty = empty
        self.degenerate = degenerate
        self._system = None
        if degenerate or empty:
            self.kernel_basis = None
            self.coset_dim_q = None
        else:
            self.kernel_basis = linalg.nullspace_h(tower.df, B)
            dim_h = self.kernel_basis.shape[0]
            if dim_h % tower.n:
                raise AssertionError("kernel of a q-linearized map must be F_q-linear")
            self.coset_dim_q = dim_h // tower.n
            if self.coset_dim_q > s - 1:
                raise AssertionError(
                    f"coset step dimension {self.coset_dim_q} exceeds s-1={s - 1}"
                )

    def affine_system(self):
        """(A, b) over F_h with: f in the set  iff  A, digits(f) solves."""
        if self.empty:
            t, k = self.tower.t, self.k
            A = np.zeros((1, t * k), dtype=np.int64)
            return A, np.ones(1, dtype=np.int64)
        if self._system is None:
            t, k = self.tower.t, self.k
            rows = []
            rhs = []
            for i in range(k):
                block = np.zeros((t, t * k), dtype=np.int64)
                for r in range(i + 1):
                    M = self.prefix_maps.get((i, r))
                    if M is None:
                        continue
                    block[:, r * t : (r + 1) * t] = M
                rows.append(block)
                rhs.append(self.offsets[i])
            tail_rows, tail_rhs = self._tail
            if tail_rows is not None and tail_rows.size:
                rows.append(tail_rows)
                rhs.append(tail_rhs)
            self._system = (np.concatenate(rows, axis=0), np.concatenate(rhs))
        return self._system

    def contains(self, msg):
        if self.empty:
            return False
        A, b = self.affine_system()
        x = vector_digits(self.tower, tuple(msg))
        r = linalg.matvec_h(self.tower.df, A, x)
        diff = (r - b) % self.tower.h if self.tower.df.e == 1 else self.tower.df.SUB[r, b]
        return not diff.any()

    def as_affine(self):
        """The same set as an explicit AffineSubspace, or None if empty."""
        if self.empty:
            return None
        A, b = self.affine_system()
        sol = linalg.solve_affine_h(self.tower.df, A, b)
        if sol is None:
            return None
        return AffineSubspace.from_digit_solution(self.tower, self.k, *sol)


def solve_key_equation(Q, k=None):
    """Periodic description of every message satisfying the key equation."""
    params = Q.params
    T = params.tower
    if k is None:
        k = params.k
    polys = list(Q.polys)
    s = Q.s
    # normalize: strip the largest common left power of x
    strip = min(
        (next(i for i, c in enumerate(p.coeffs) if not c.is_zero()))
        for p in polys
        if not p.is_zero()
    )
    if strip:
        polys = [
            SkewPoly(
                T,
                p.sigma_base,
                [T.frob(c, p.sigma_base, -strip) for c in p.coeffs[strip:]],
            )
            if not p.is_zero()
            else p
            for p in polys
        ]
    if all(p.is_zero() for p in polys[1:]):
        # key equation reads Q_0 = 0 with Q_0 nonzero: unsatisfiable
        return PeriodicSubspace(
            T, params.sigma_base, k, s, None, None, None, None, None, empty=True
        )
    t = T.t
    df = T.df
    step = 1 if params.sigma_base == "h" else T.n
    u_max = max(p.degree for p in polys[1:])
    i_max = max(polys[0].degree, u_max + k - 1)

    # matrix of v -> R_u(v) = sum_j q_{j,u} v^(q^(j-1))
    def r_matrix(u):
        M = None
        for j in range(1, s + 1):
            c = polys[j][u]
            if c.is_zero():
                continue
            part = linalg.matmul_h(df, T.mul_matrix(c), T.frob_matrix("q", j - 1))
            M = part if M is None else df.ADD[M, part] if df.e > 1 else (M + part) % T.h
        return M

    r_mats = {u: r_matrix(u) for u in range(u_max + 1)}
    B = r_mats.get(0)
    degenerate = B is None
    if degenerate:
        B = np.zeros((t, t), dtype=np.int64)

    frob_pows = {}

    def sigma_mat(j):
        if j not in frob_pows:
            frob_pows[j] = T.frob_matrix(params.sigma_base, j)
        return frob_pows[j]

    offsets = []
    prefix_maps = {}
    tail_rows = []
    tail_rhs = []
    NEG = df.NEG
    for i in range(i_max + 1):
        q0i = polys[0][i]
        rhs = NEG[np.asarray(q0i.coeffs, dtype=np.int64)]
        maps = {}
        for r in range(min(i, k - 1) + 1):
            u = i - r
            M = r_mats.get(u)
            if M is None:
                continue
            full = linalg.matmul_h(df, M, sigma_mat(u)) if u else M
            maps[r] = full
        if i < k:
            offsets.append(rhs)
            for r, M in maps.items():
                prefix_maps[(i, r)] = M
        else:
            row = np.zeros((t, t * k), dtype=np.int64)
            for r, M in maps.items():
                row[:, r * t : (r + 1) * t] = M
            tail_rows.append(row)
            tail_rhs.append(rhs)
    tail_rows = (
        np.concatenate(tail_rows, axis=0) if tail_rows else np.zeros((0, t * k), np.int64)
    )
    tail_rhs = np.concatenate(tail_rhs) if len(tail_rhs) else np.zeros(0, np.int64)
    return PeriodicSubspace(
        T,
        params.sigma_base,
        k,
        s,
        B,
        offsets,
        prefix_maps,
        tail_rows,
        tail_rhs,
        degenerate=degenerate,
    )


def decode_list(params, design, selection, y, s, enum_dim_cap=20):
    """Full pipeline: interpolation, key-equation solve, design intersection.

    Returns the exact list of messages in the restricted space whose key
    equation holds; every transmitted message within s/(s+1)*(n-k) errors
    is guaranteed to appear.
    """
    if len(selection) != params.k:
        raise ValueError("one design subspace per message coefficient required")
    Q = interpolate(params, y, s)
    P = solve_key_equation(Q, params.k)
    if P.empty:
        return []
    space = intersect_periodic(P, design, selection, max_dim=design.A)
    if space is None:
        return []
    if space.dim_h > enum_dim_cap:
        raise ValueError(
            f"solution space dimension {space.dim_h} exceeds the enumeration "
            f"cap {enum_dim_cap}"
        )
    return list(space.points())
