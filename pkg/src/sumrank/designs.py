"""Subspace designs and subspace-evasive sets, plus the affine solution
spaces the decoders hand to them.

The design ambient is F_h^(mn) identified with the field F_{h^t} itself
(t = mn), so subspace bases are plain field elements.  The design
property bounds, over every F_{h^n}-subspace W of dimension s, the total
F_h-intersection dimension with the member subspaces; ``verify_design``
checks it exactly by enumerating all such W.

Evasive sets are keyed-hash membership predicates: storage-free, so the
set can be astronomically larger than memory, mirroring the random-set
model they stand in for.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from . import linalg

__all__ = [
    "AffineSubspace",
    "SubspaceDesign",
    "random_design",
    "verify_design",
    "intersect_periodic",
    "EvasiveSet",
    "evasive_membership",
    "intersect_evasive",
    "design_to_json",
    "design_from_json",
]


# ---------------------------------------------------------------------------
# affine solution spaces
# ---------------------------------------------------------------------------

def vector_digits(tower, vec):
    """Concatenate the F_h digit vectors of a tuple of field elements."""
    out = []
    for v in vec:
        out.extend(v.coeffs)
    return np.asarray(out, dtype=np.int64)


def vector_from_digits(tower, digits, length):
    t = tower.t
    return tuple(
        tower.from_digits(digits[i * t : (i + 1) * t]) for i in range(length)
    )


class AffineSubspace:
    """offset + F_h-span(basis) inside F_{h^t}^length.

    Solutions of q-linear systems are also F_h-affine; when such a space
    is built from an F_q-linear solve, dim_h is a multiple of n and
    dim_q = dim_h / n.
    """

    __slots__ = ("tower", "length", "offset", "basis")

    def __init__(self, tower, length, offset, basis):
        self.tower = tower
        self.length = length
        self.offset = tuple(offset)
        self.basis = [tuple(b) for b in basis]

    @classmethod
    def from_digit_solution(cls, tower, length, offset_digits, basis_rows):
        offset = vector_from_digits(tower, offset_digits, length)
        basis = [vector_from_digits(tower, row, length) for row in basis_rows]
        return cls(tower, length, offset, basis)

    @property
    def dim_h(self):
        return len(self.basis)

    def point_count(self):
        return self.tower.h ** self.dim_h

    def points(self, max_points=10**6):
        """Enumerate every member (offset first, then digit-counter order)."""
        if self.point_count() > max_points:
            raise ValueError(
                f"affine space has {self.point_count()} points, over the "
                f"enumeration cap {max_points}"
            )
        T = self.tower
        h = T.h
        dim = self.dim_h
        coefs = [0] * dim
        while True:
            vec = list(self.offset)
            for c, b in zip(coefs, self.basis):
                if c:
                    s = T.scalar(c)
                    vec = [v + s * bv for v, bv in zip(vec, b)]
            yield tuple(vec)
            i = 0
            while i < dim and coefs[i] == h - 1:
                coefs[i] = 0
                i += 1
            if i == dim:
                return
            coefs[i] += 1

    def contains(self, vec):
        T = self.tower
        target = vector_digits(T, tuple(vec)) if not isinstance(vec, np.ndarray) else vec
        diff = (target - vector_digits(T, self.offset)) % T.h if T.df.e == 1 else None
        if diff is None:
            off = vector_digits(T, self.offset)
            diff = T.df.SUB[target, off]
        if not self.basis:
            return not diff.any()
        A = np.stack([vector_digits(T, b) for b in self.basis], axis=1)
        return linalg.solve_affine_h(T.df, A, diff) is not None


# ---------------------------------------------------------------------------
# subspace designs
# ---------------------------------------------------------------------------

class SubspaceDesign:
    """F_h-subspaces of the coefficient field, with the (s, A, n) target."""

    def __init__(self, tower, subspaces, s, A, epsilon, seed=None, stamp=None):
        self.tower = tower
        self.subspaces = [tuple(basis) for basis in subspaces]
        self.s = int(s)
        self.A = int(A)
        self.epsilon = float(epsilon)
        self.seed = seed
        self.stamp = stamp

    @property
    def M(self):
        return len(self.subspaces)

    def basis_matrix(self, i):
        return np.asarray([b.coeffs for b in self.subspaces[i]], dtype=np.int64)

    def annihilator(self, i):
        """Rows N with: x in H_i  iff  N @ digits(x) = 0."""
        return linalg.nullspace_h(self.tower.df, self.basis_matrix(i))

    def contains(self, i, x):
        N = self.annihilator(i)
        r = linalg.matvec_h(self.tower.df, N, np.asarray(x.coeffs, dtype=np.int64))
        return not r.any()

    def sample_message(self, selection, rng):
        """Random member of H_(sel_1) x ... x H_(sel_k)."""
        T = self.tower
        out = []
        for i in selection:
            basis = self.subspaces[i]
            v = T.zero
            for b in basis:
                d = int(rng.integers(0, T.h))
                if d:
                    v = v + T.scalar(d) * b
            out.append(v)
        return tuple(out)


def random_design(tower, M, s, epsilon, seed, A=None, dim=None):
    """M random subspaces of dimension floor((1-2*eps)*t); the design
    property is NOT guaranteed -- pair with verify_design."""
    T = tower
    if dim is None:
        dim = int(math.floor((1 - 2 * epsilon) * T.t))
    if not 0 <= dim <= T.t:
        raise ValueError(f"subspace dimension {dim} out of range")
    if A is None:
        A = math.ceil(2 * (T.m - 1) * s / epsilon) if epsilon > 0 else T.t * M
    rng = np.random.default_rng(seed)
    subspaces = []
    for _ in range(M):
        if dim == 0:
            subspaces.append(())
            continue
        while True:
            mat = rng.integers(0, T.h, (dim, T.t))
            if linalg.rank_h(T.df, mat) == dim:
                break
        subspaces.append(tuple(T.from_digits(row) for row in mat))
    return SubspaceDesign(T, subspaces, s, A, epsilon, seed=seed)


def enumerate_structured_subspaces(tower, s, max_count=200000):
    """All F_q-subspaces of F_{q^m} (z-basis identification) of dim s.

    Yields (rref_rows, h_basis_matrix): the F_q RREF rows as field-element
    m-tuples, and an F_h digit basis matrix of the same set (s*n rows).
    Enumeration order is the lexicographic order of the RREF description.
    """
    T = tower
    m, q = T.m, T.q
    count = _gaussian_binomial(m, s, q)
    if count > max_count:
        raise ValueError(
            f"enumerating {count} structured subspaces exceeds the cap {max_count}"
        )
    subfield = list(T.subfield_elements())
    g = T.subfield_generator()
    gpows = []
    acc = T.one
    for _ in range(T.n):
        gpows.append(acc)
        acc = acc * g
    zpows = []
    acc = T.one
    for _ in range(m):
        zpows.append(acc)
        acc = acc * T.z()

    from itertools import combinations, product

    for pivots in combinations(range(m), s):
        free_positions = [
            (r, c)
            for r in range(s)
            for c in range(m)
            if c > pivots[r] and c not in pivots
        ]
        for fill in product(range(q), repeat=len(free_positions)):
            rows = [[T.zero] * m for _ in range(s)]
            for r, p in enumerate(pivots):
                rows[r][p] = T.one
            for (r, c), v in zip(free_positions, fill):
                rows[r][c] = subfield[v]
            # field elements of the F_q-basis
            basis_q = [
                sum((rows[r][c] * zpows[c] for c in range(m)), T.zero)
                for r in range(s)
            ]
            h_rows = [(gp * b).coeffs for b in basis_q for gp in gpows]
            yield rows, np.asarray(h_rows, dtype=np.int64)


def _gaussian_binomial(m, s, q):
    num = den = 1
    for i in range(s):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def verify_design(design, max_count=200000):
    """Exact check of the design property.

    Returns (ok, worst_W, worst_sum) with worst_W the first (in canonical
    enumeration order) structured subspace attaining the maximum total
    intersection dimension.
    """
    T = design.tower
    df = T.df
    h_bases = [design.basis_matrix(i) for i in range(design.M)]
    dims = [linalg.rank_h(df, B) if B.size else 0 for B in h_bases]
    worst_sum = -1
    worst_W = None
    for rows, W_mat in enumerate_structured_subspaces(T, design.s, max_count):
        dim_w = W_mat.shape[0]
        total = 0
        for B, dB in zip(h_bases, dims):
            if B.size == 0:
                continue
            stacked = np.concatenate([B, W_mat], axis=0)
            total += dB + dim_w - linalg.rank_h(df, stacked)
        if total > worst_sum:
            worst_sum = total
            worst_W = rows
    return worst_sum <= design.A, worst_W, worst_sum


def intersect_periodic(periodic, design, selection, max_dim=None):
    """Affine basis + offset of P intersected with H_(sel_1) x ... x H_(sel_k).

    ``periodic`` supplies its full constraint system over F_h^(t*k); the
    membership constraints of the selected design subspaces are stacked on
    top and the combined affine system is solved once.  Returns None when
    the intersection is empty.
    """
    T = design.tower
    A_rows, b = periodic.affine_system()
    k = periodic.k
    t = T.t
    blocks = []
    rhs = [b]
    blocks.append(A_rows)
    for pos, i in enumerate(selection):
        N = design.annihilator(i)
        if N.size == 0:
            continue
        row = np.zeros((N.shape[0], t * k), dtype=np.int64)
        row[:, pos * t : (pos + 1) * t] = N
        blocks.append(row)
        rhs.append(np.zeros(N.shape[0], dtype=np.int64))
    A_full = np.concatenate(blocks, axis=0)
    b_full = np.concatenate(rhs)
    sol = linalg.solve_affine_h(T.df, A_full, b_full)
    if sol is None:
        return None
    offset, basis = sol
    space = AffineSubspace.from_digit_solution(T, k, offset, basis)
    if max_dim is not None and space.dim_h > max_dim:
        raise AssertionError(
            f"intersection dimension {space.dim_h} exceeds the design bound {max_dim}"
        )
    return space


# ---------------------------------------------------------------------------
# subspace-evasive sets
# ---------------------------------------------------------------------------

class EvasiveSet:
    """Keyed-PRF membership predicate over F_{h^t}^k.

    A vector belongs iff its hash lands in a 1/M slice, M = round(Q^(eps*k))
    with Q the coefficient field size; the expected density matches a
    random set of size Q^((1-eps)*k).  epsilon = 0 keeps everything.
    """

    def __init__(self, tower, k, epsilon, seed):
        self.tower = tower
        self.k = int(k)
        self.epsilon = float(epsilon)
        self.seed = int(seed)
        Q = tower.h**tower.t
        self.modulus = max(1, round(Q ** (self.epsilon * self.k)))
        self._key = hashlib.blake2b(
            str(self.seed).encode(), digest_size=16
        ).digest()

    def contains(self, vec):
        if len(vec) != self.k:
            raise ValueError(f"vector length {len(vec)} != k={self.k}")
        if self.modulus == 1:
            return True
        payload = ",".join(v.to_hex() for v in vec).encode()
        digest = hashlib.blake2b(payload, key=self._key, digest_size=16).digest()
        return int.from_bytes(digest, "big") % self.modulus == 0

    def sample_member(self, rng, max_tries=100000):
        T = self.tower
        for _ in range(max_tries):
            vec = tuple(T.random_element(rng) for _ in range(self.k))
            if self.contains(vec):
                return vec
        raise RuntimeError("no evasive-set member found; density too small?")


def evasive_membership(s, vec):
    return s.contains(vec)


def intersect_evasive(s, space, max_points=10**6):
    """Exactly the members of the affine space passing the predicate."""
    return [vec for vec in space.points(max_points) if s.contains(vec)]


# ---------------------------------------------------------------------------
# design files
# ---------------------------------------------------------------------------

def design_to_json(design):
    T = design.tower
    doc = {
        "kind": "subspace_design",
        "h": T.h,
        "n": T.n,
        "m": T.m,
        "s": design.s,
        "A": design.A,
        "epsilon": design.epsilon,
        "subspaces": [[b.to_hex() for b in basis] for basis in design.subspaces],
        "stamp": design.stamp,
    }
    if design.seed is not None:
        doc["seed"] = design.seed
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def design_from_json(text, tower_loader=None):
    from .gf import load_tower

    doc = json.loads(text)
    if doc.get("kind") != "subspace_design":
        raise ValueError("not a design file")
    loader = tower_loader or load_tower
    T = loader(doc["h"], doc["n"], doc["m"])
    subspaces = [[T.from_hex(s) for s in basis] for basis in doc["subspaces"]]
    return SubspaceDesign(
        T,
        subspaces,
        doc["s"],
        doc["A"],
        doc["epsilon"],
        seed=doc.get("seed"),
        stamp=doc.get("stamp"),
    )
