"""The NRT weight and distance on F_q^(m*n), plus the poset-ideal oracle.

Vectors are 1 x (m*n) row matrices laid out block by block: coordinates
(j-1)*m+1 .. j*m form chain j, position i inside a block is level i of
that chain.  The weight of one block is the largest 1-based index of a
nonzero coordinate; the NRT weight of a vector is the sum over blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Field, Matrix
from .errors import DimensionMismatch


@dataclass(frozen=True)
class CodeSpace:
    """Ambient NRT space: n chains of length m over GF(q)."""

    field: Field
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("chain length and chain count must be >= 1")

    @property
    def dim(self) -> int:
        return self.m * self.n

    def block_slice(self, j: int) -> slice:
        """Column slice of 0-based block j."""
        return slice(j * self.m, (j + 1) * self.m)

    def __repr__(self) -> str:
        return f"CodeSpace(q={self.field.q}, m={self.m}, n={self.n})"


@dataclass(frozen=True)
class WeightProfile:
    """Per-block NRT weights of one vector and their total."""

    blocks: tuple[int, ...]
    total: int


def _as_row(v) -> np.ndarray:
    a = v.array if isinstance(v, Matrix) else np.asarray(v, dtype=np.int64)
    return a.reshape(-1)


def block_weights(arr: np.ndarray, m: int, n: int) -> np.ndarray:
    """Per-block chain weights for every row of a (rows x m*n) array."""
    a = arr.reshape(arr.shape[0], n, m)
    levels = np.arange(1, m + 1, dtype=np.int64)
    return np.max((a != 0) * levels, axis=2)


def chain_weight_array(arr: np.ndarray) -> np.ndarray:
    """Largest 1-based nonzero index per row (0 for zero rows)."""
    levels = np.arange(1, arr.shape[1] + 1, dtype=np.int64)
    return np.max((arr != 0) * levels, axis=1) if arr.shape[1] else np.zeros(arr.shape[0], dtype=np.int64)


def nrt_weight_chain(v) -> int:
    """Weight of a vector over a single chain: max index of a nonzero entry."""
    row = _as_row(v)
    nz = np.nonzero(row)[0]
    return int(nz[-1]) + 1 if nz.size else 0


def nrt_weight(v, space: CodeSpace) -> WeightProfile:
    row = _as_row(v)
    if row.size != space.dim:
        raise DimensionMismatch(f"vector length {row.size} != {space.dim}")
    per_block = tuple(
        nrt_weight_chain(row[space.block_slice(j)]) for j in range(space.n)
    )
    return WeightProfile(per_block, sum(per_block))


def nrt_distance(u, v, space: CodeSpace) -> int:
    ru, rv = _as_row(u), _as_row(v)
    if ru.size != rv.size:
        raise DimensionMismatch(f"vector lengths {ru.size} != {rv.size}")
    return nrt_weight(space.field.sub(ru, rv), space).total


def ideal_weight(v, space: CodeSpace) -> int:
    """Size of the poset ideal generated by the support of v.

    Independent oracle for the NRT weight: the support is read as a set
    of poset points (level, chain), closed downward within each chain,
    and counted.
    """
    row = _as_row(v)
    if row.size != space.dim:
        raise DimensionMismatch(f"vector length {row.size} != {space.dim}")
    support = {
        (k % space.m + 1, k // space.m + 1) for k in np.nonzero(row)[0]
    }
    ideal = {
        (lower, chain) for level, chain in support for lower in range(1, level + 1)
    }
    return len(ideal)
