"""The linear isometry group of an NRT space: (Tm)^n acting blockwise,
extended by the symmetric group permuting blocks.

An isometry is a pair (perm, blocks).  Applied to v = (v_1 | ... | v_n),
destination block j of the result is T_j @ v_{perm^-1(j)}: the permutation
moves whole blocks, then each destination block is hit by its own
invertible upper-triangular matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Field, Matrix, UpperTriangular
from .errors import DimensionMismatch, SpaceMismatch, ZeroVector
from .metric import CodeSpace


@dataclass(frozen=True)
class Isometry:
    """Element of the NRT symmetry group.

    perm is stored 0-based: perm[i] is the destination of source block i.
    blocks[j] is the upper-triangular matrix applied at destination j.
    """

    space: CodeSpace
    perm: tuple[int, ...]
    blocks: tuple[UpperTriangular, ...]

    def __post_init__(self):
        n, m = self.space.n, self.space.m
        if sorted(self.perm) != list(range(n)):
            raise ValueError(f"perm {self.perm} is not a permutation of 0..{n - 1}")
        if len(self.blocks) != n:
            raise ValueError(f"expected {n} block transforms, got {len(self.blocks)}")
        for T in self.blocks:
            if T.size != m or T.field != self.space.field:
                raise SpaceMismatch("block transform does not match the space")

    def inverse_perm(self) -> tuple[int, ...]:
        inv = [0] * len(self.perm)
        for src, dst in enumerate(self.perm):
            inv[dst] = src
        return tuple(inv)


def identity_isometry(space: CodeSpace) -> Isometry:
    eye = UpperTriangular.identity(space.field, space.m)
    return Isometry(space, tuple(range(space.n)), (eye,) * space.n)


def apply_isometry(iso: Isometry, v: Matrix) -> Matrix:
    """Apply the isometry to every row of v (a 1 x m*n vector or a k x m*n matrix)."""
    space = iso.space
    if v.cols != space.dim:
        raise DimensionMismatch(f"row length {v.cols} != {space.dim}")
    if v.field != space.field:
        raise SpaceMismatch("matrix field differs from the space's field")
    field = space.field
    src_of = iso.inverse_perm()
    out = np.empty_like(v.array)
    for dst in range(space.n):
        block = v.array[:, space.block_slice(src_of[dst])]
        out[:, space.block_slice(dst)] = field.matmul(block, iso.blocks[dst].matrix.array.T)
    return Matrix(field, out)


def compose(a: Isometry, b: Isometry) -> Isometry:
    """Isometry acting as "apply b, then a"."""
    if a.space != b.space:
        raise SpaceMismatch("isometries over different spaces")
    perm = tuple(a.perm[b.perm[i]] for i in range(a.space.n))
    a_src = a.inverse_perm()
    blocks = tuple(
        a.blocks[j].compose(b.blocks[a_src[j]]) for j in range(a.space.n)
    )
    return Isometry(a.space, perm, blocks)


def invert(a: Isometry) -> Isometry:
    perm = a.inverse_perm()
    blocks = tuple(a.blocks[a.perm[j]].inverse() for j in range(a.space.n))
    return Isometry(a.space, perm, blocks)


def map_to_canonical(v, field: Field | None = None) -> UpperTriangular:
    """Upper-triangular T with T @ v = e_r, r the chain weight of v != 0.

    Scales coordinate r to 1, then clears coordinates 1..r-1 by adding
    multiples of coordinate r.
    """
    if isinstance(v, Matrix):
        field = v.field
        row = v.array.reshape(-1)
    else:
        if field is None:
            raise ValueError("field required when v is not a Matrix")
        row = np.asarray(v, dtype=np.int64).reshape(-1)
    nz = np.nonzero(row)[0]
    if nz.size == 0:
        raise ZeroVector("cannot canonicalize the zero vector")
    r = int(nz[-1])
    m = row.size
    T = np.eye(m, dtype=np.int64)
    pivot_inv = int(field.inv(int(row[r])))
    T[r, r] = pivot_inv
    if r:
        T[:r, r] = field.neg(field.mul(row[:r], pivot_inv))
    return UpperTriangular(Matrix(field, T))


def stabilizes_canonical(T: UpperTriangular, j: int) -> bool:
    """True iff T fixes e_j, i.e. column j of T equals e_j (1-based j)."""
    if not 1 <= j <= T.size:
        raise DimensionMismatch(f"index {j} outside 1..{T.size}")
    col = T.matrix.array[:, j - 1]
    return bool(col[j - 1] == 1 and np.count_nonzero(col) == 1)


def embed_upper_triangular(T: UpperTriangular, m: int) -> UpperTriangular:
    """Embed a Tk element into Tm as the block matrix [[T, 0], [0, I]]."""
    k = T.size
    if k > m:
        raise DimensionMismatch(f"cannot embed size {k} into size {m}")
    out = np.eye(m, dtype=np.int64)
    out[:k, :k] = T.matrix.array
    return UpperTriangular(Matrix(T.field, out))


def random_upper_triangular(field: Field, m: int, rng: np.random.Generator) -> UpperTriangular:
    """Uniform nonzero diagonal, uniform strict-upper entries."""
    a = np.zeros((m, m), dtype=np.int64)
    a[np.diag_indices(m)] = rng.integers(1, field.q, size=m, dtype=np.int64)
    upper = np.triu_indices(m, 1)
    a[upper] = rng.integers(0, field.q, size=len(upper[0]), dtype=np.int64)
    return UpperTriangular(Matrix(field, a))


def random_isometry(space: CodeSpace, seed: int) -> Isometry:
    rng = np.random.default_rng(seed)
    perm = tuple(int(x) for x in rng.permutation(space.n))
    blocks = tuple(
        random_upper_triangular(space.field, space.m, rng) for _ in range(space.n)
    )
    return Isometry(space, perm, blocks)
