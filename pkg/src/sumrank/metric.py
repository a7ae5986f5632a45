"""Sum-rank weight, distance, and an exact-weight error channel.

A word is partitioned into blocks; its weight is the sum over blocks of
the rank of the block's expansion matrix over a configurable base
subfield ('h' or 'q').  With all block lengths 1 and base 'q' this is the
Hamming weight; with a single block it is the rank weight.

Folded words carry lam x width blocks; each block is expanded by stacking
the per-entry coordinate vectors of every column, and the rank of that
taller matrix is the block's weight contribution.
"""

from __future__ import annotations

import numpy as np

from . import linalg

__all__ = [
    "BlockProfile",
    "SumRankVector",
    "sum_rank_weight",
    "sum_rank_distance",
    "sample_error",
]


class BlockProfile:
    """Block lengths, rank base subfield, optional folding height."""

    __slots__ = ("lengths", "base", "fold")

    def __init__(self, lengths, base="h", fold=None):
        lengths = tuple(int(x) for x in lengths)
        if not lengths or any(x < 1 for x in lengths):
            raise ValueError("block lengths must be positive")
        if base not in ("h", "q"):
            raise ValueError("base must be 'h' or 'q'")
        if fold is not None and fold < 1:
            raise ValueError("fold must be positive")
        self.lengths = lengths
        self.base = base
        self.fold = fold

    @property
    def n(self):
        return sum(self.lengths)

    @property
    def ell(self):
        return len(self.lengths)

    def expansion_height(self, tower):
        per_entry = tower.t if self.base == "h" else tower.m
        return per_entry * (self.fold or 1)

    def max_weight(self, tower):
        height = self.expansion_height(tower)
        return sum(min(w, height) for w in self.lengths)

    def __eq__(self, other):
        return (
            isinstance(other, BlockProfile)
            and self.lengths == other.lengths
            and self.base == other.base
            and self.fold == other.fold
        )

    def __repr__(self):
        fold = f", fold={self.fold}" if self.fold else ""
        return f"BlockProfile({self.lengths}, base={self.base!r}{fold})"


class SumRankVector:
    """Block-partitioned word; blocks are tuples (or lam-row grids) of elements."""

    __slots__ = ("tower", "profile", "blocks")

    def __init__(self, tower, profile, blocks):
        blocks = tuple(
            tuple(tuple(row) for row in blk) if profile.fold else tuple(blk)
            for blk in blocks
        )
        if len(blocks) != profile.ell:
            raise ValueError("block count mismatch")
        for blk, w in zip(blocks, profile.lengths):
            if profile.fold:
                if len(blk) != profile.fold or any(len(row) != w for row in blk):
                    raise ValueError("folded block shape mismatch")
            elif len(blk) != w:
                raise ValueError("block length mismatch")
        self.tower = tower
        self.profile = profile
        self.blocks = blocks

    @classmethod
    def zero(cls, tower, profile):
        if profile.fold:
            blocks = [
                [[tower.zero] * w for _ in range(profile.fold)]
                for w in profile.lengths
            ]
        else:
            blocks = [[tower.zero] * w for w in profile.lengths]
        return cls(tower, profile, blocks)

    def entries(self):
        """Flattened entries (row-major within folded blocks)."""
        out = []
        for blk in self.blocks:
            if self.profile.fold:
                for row in blk:
                    out.extend(row)
            else:
                out.extend(blk)
        return out

    def _zip(self, other, op):
        if self.profile != other.profile or self.tower is not other.tower:
            raise ValueError("profile mismatch")
        if self.profile.fold:
            blocks = [
                [[op(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(ba, bb)]
                for ba, bb in zip(self.blocks, other.blocks)
            ]
        else:
            blocks = [
                [op(a, b) for a, b in zip(ba, bb)]
                for ba, bb in zip(self.blocks, other.blocks)
            ]
        return SumRankVector(self.tower, self.profile, blocks)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __eq__(self, other):
        return (
            isinstance(other, SumRankVector)
            and self.profile == other.profile
            and self.blocks == other.blocks
        )

    def is_zero(self):
        return all(e.is_zero() for e in self.entries())


def _block_columns(tower, profile, blk):
    """Expansion columns of one block over the profile's base subfield."""
    if profile.fold:
        cols = []
        width = len(blk[0])
        for c in range(width):
            col = []
            for r in range(profile.fold):
                col.extend(tower.expand(blk[r][c], profile.base))
            cols.append(col)
        return cols
    return [tower.expand(e, profile.base) for e in blk]


def _rank_gf2(rows):
    # XOR row basis keyed by leading bit; rows are packed ints
    pivots = {}
    rank = 0
    for r in rows:
        while r:
            msb = r.bit_length() - 1
            if msb in pivots:
                r ^= pivots[msb]
            else:
                pivots[msb] = r
                rank += 1
                break
    return rank


def _block_rank(tower, profile, blk):
    if profile.base == "h" and not profile.fold:
        if tower.h == 2:
            rows = [sum(d << i for i, d in enumerate(e.coeffs)) for e in blk]
            return _rank_gf2(rows)
        mat = np.asarray([e.coeffs for e in blk], dtype=np.int64)
        return linalg.rank_h(tower.df, mat)
    cols = _block_columns(tower, profile, blk)
    if profile.base == "h":
        mat = np.asarray([[c.coeffs[0] for c in col] for col in cols], dtype=np.int64)
        return linalg.rank_h(tower.df, mat)
    return linalg.field_rank(tower, cols)


def sum_rank_weight(v):
    """Sum over blocks of the base-subfield rank of the block matrix."""
    return sum(_block_rank(v.tower, v.profile, blk) for blk in v.blocks)


def sum_rank_distance(u, v):
    if u.profile != v.profile:
        raise ValueError("profile mismatch")
    return sum_rank_weight(u - v)


# ---------------------------------------------------------------------------
# exact-weight error channel
# ---------------------------------------------------------------------------

def _compositions(e, caps):
    if len(caps) == 1:
        if e <= caps[0]:
            yield (e,)
        return
    for first in range(min(e, caps[0]) + 1):
        for rest in _compositions(e - first, caps[1:]):
            yield (first,) + rest


def _random_full_rank_h(df, rows, cols, rng):
    """rows x cols digit matrix of rank min(rows, cols), by rejection."""
    from . import linalg as la

    while True:
        M = rng.integers(0, df.h, (rows, cols))
        if la.rank_h(df, M) == min(rows, cols):
            return M


def _random_subfield_matrix_full_rank(tower, rows, cols, rng):
    from . import linalg as la

    gpows = []
    acc = tower.one
    for _ in range(tower.n):
        gpows.append(acc)
        acc = tower.mul(acc, tower.subfield_generator())
    while True:
        M = []
        for _ in range(rows):
            row = []
            for _ in range(cols):
                digs = rng.integers(0, tower.h, tower.n)
                v = tower.zero
                for d, gp in zip(digs, gpows):
                    if d:
                        v = v + tower.scalar(int(d)) * gp
                row.append(v)
            M.append(row)
        if la.field_rank(tower, M) == min(rows, cols):
            return M


def sample_error(tower, profile, e, rng_seed):
    """Word of sum-rank weight exactly e; deterministic given the seed.

    Block weights come from a uniformly random valid composition of e;
    each block is a product of a full-column-rank and a full-row-rank
    matrix over the profile's base subfield.
    """
    rng = (
        rng_seed
        if isinstance(rng_seed, np.random.Generator)
        else np.random.default_rng(rng_seed)
    )
    height = profile.expansion_height(tower)
    caps = [min(w, height) for w in profile.lengths]
    if e < 0 or e > sum(caps):
        raise ValueError(f"error weight {e} outside feasible range [0, {sum(caps)}]")
    comps = list(_compositions(e, caps))
    comp = comps[int(rng.integers(0, len(comps)))]
    blocks = []
    for w, ei in zip(profile.lengths, comp):
        width = w
        if ei == 0:
            if profile.fold:
                blocks.append([[tower.zero] * width for _ in range(profile.fold)])
            else:
                blocks.append([tower.zero] * width)
            continue
        if profile.base == "h":
            A = _random_full_rank_h(tower.df, height, ei, rng)
            B = _random_full_rank_h(tower.df, ei, width, rng)
            M = linalg.matmul_h(tower.df, A, B)  # height x width digits
            cols = [M[:, c] for c in range(width)]
            per_entry = tower.t
            elems = [
                [
                    tower.from_digits(col[r * per_entry : (r + 1) * per_entry])
                    for r in range(profile.fold or 1)
                ]
                for col in cols
            ]
        else:
            A = _random_subfield_matrix_full_rank(tower, height, ei, rng)
            B = _random_subfield_matrix_full_rank(tower, ei, width, rng)
            per_entry = tower.m
            elems = []
            for c in range(width):
                col = []
                for r in range(height):
                    v = tower.zero
                    for k in range(ei):
                        v = v + A[r][k] * B[k][c]
                    col.append(v)
                elems.append(
                    [
                        tower.recombine(col[r * per_entry : (r + 1) * per_entry], "q")
                        for r in range(profile.fold or 1)
                    ]
                )
        if profile.fold:
            blocks.append(
                [[elems[c][r] for c in range(width)] for r in range(profile.fold)]
            )
        else:
            blocks.append([elems[c][0] for c in range(width)])
    return SumRankVector(tower, profile, blocks)
