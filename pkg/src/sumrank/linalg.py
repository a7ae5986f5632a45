"""Exact linear algebra kernels.

Two flavors serve the whole package:

* mod-h arithmetic on numpy int arrays, driven by the DigitField tables
  (works for prime and prime-power h alike);
* Gaussian elimination on dense lists of FieldElement rows for systems
  over the big field.

Both are O(n^3) eliminations; ample at desk scale.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "matmul_h",
    "matvec_h",
    "rref_h",
    "rank_h",
    "inverse_h",
    "nullspace_h",
    "solve_affine_h",
    "field_rref",
    "field_rank",
    "field_kernel_vector",
    "field_solve_affine",
]


# ---------------------------------------------------------------------------
# mod-h numpy kernels
# ---------------------------------------------------------------------------

def matmul_h(df, A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if df.e == 1:
        return (A @ B) % df.h
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = df.ADD[out, df.MUL[A[:, k : k + 1], B[k : k + 1, :]]]
    return out


def matvec_h(df, A, v):
    return matmul_h(df, A, np.asarray(v, dtype=np.int64).reshape(-1, 1)).reshape(-1)


def rref_h(df, A):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("matrix expected")
    rows, cols = R.shape
    ADD, MUL, NEG, INV = df.ADD, df.MUL, df.NEG, df.INV
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(R[r:, c])[0]
        if len(hits) == 0:
            continue
        p = r + hits[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        inv = INV[R[r, c]]
        if inv != 1:
            R[r] = MUL[inv, R[r]]
        col = R[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if len(mask):
            R[mask] = ADD[R[mask], MUL[NEG[col[mask]][:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return R, pivots


def rank_h(df, A):
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    _, pivots = rref_h(df, A)
    return len(pivots)


def inverse_h(df, A):
    """Inverse of a square matrix, or None if singular."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref_h(df, aug)
    if pivots[:n] != list(range(n)):
        return None
    return R[:, n:]


def nullspace_h(df, A):
    """Rows form a basis of {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.size == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref_h(df, A)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    NEG = df.NEG
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = NEG[R[r, fc]]
    return basis


def solve_affine_h(df, A, b):
    """All solutions of A x = b as (offset, basis_rows), or None.

    Deterministic: free variables in natural column order; the i-th basis
    vector sets the i-th free variable to 1 and the others to 0.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    cols = A.shape[1]
    aug = np.concatenate([A, b], axis=1)
    R, pivots = rref_h(df, aug)
    if cols in pivots:
        return None  # inconsistent
    offset = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        offset[pc] = R[r, cols]
    basis = nullspace_from_rref(df, R[:, :cols], pivots, cols)
    return offset, basis


def nullspace_from_rref(df, R, pivots, cols):
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    NEG = df.NEG
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = NEG[R[r, fc]]
    return basis


# ---------------------------------------------------------------------------
# big-field elimination (rows are lists of FieldElement)
# ---------------------------------------------------------------------------

def field_rref(tower, rows):
    """In-place-free RREF over the tower field; returns (rows, pivots)."""
    R = [list(r) for r in rows]
    if not R:
        return R, []
    cols = len(R[0])
    pivots = []
    r = 0
    for c in range(cols):
        if r == len(R):
            break
        p = next((i for i in range(r, len(R)) if not R[i][c].is_zero()), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = tower.inv(R[r][c])
        R[r] = [tower.mul(inv, v) for v in R[r]]
        for i in range(len(R)):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [tower.sub(a, tower.mul(f, b)) for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def field_rank(tower, rows):
    _, pivots = field_rref(tower, rows)
    return len(pivots)


def field_kernel_vector(tower, rows, cols):
    """One nonzero kernel vector of the homogeneous system, or None.

    Deterministic: the first free variable (natural order) is set to one,
    all other free variables to zero.
    """
    R, pivots = field_rref(tower, rows)
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return None
    fc = free[0]
    vec = [tower.zero] * cols
    vec[fc] = tower.one
    for r, pc in enumerate(pivots):
        vec[pc] = tower.neg(R[r][fc])
    return vec


def field_solve_affine(tower, rows, rhs):
    """All solutions of (rows) x = rhs as (offset, basis), or None.

    Entries may lie in a subfield; elimination then stays in it, so the
    returned offset/basis inherit subfield coordinates.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    cols = len(rows[0]) if rows else 0
    R, pivots = field_rref(tower, aug)
    if cols in pivots:
        return None
    offset = [tower.zero] * cols
    for r, pc in enumerate(pivots):
        offset[pc] = R[r][cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [tower.zero] * cols
        vec[fc] = tower.one
        for r, pc in enumerate(pivots):
            vec[pc] = tower.neg(R[r][fc])
        basis.append(vec)
    return offset, basis
