"""Standard forms for generator matrices in NRT spaces.

Three layers of reduction, each returning an explicit witness:

* a single block can be brought to triangular-reduced form using only
  upper-triangular column operations (the Tm action M -> M @ T^t);
* the span of a set of rows over one chain reduces to distinct canonical
  vectors, one per attained chain weight, using row operations plus Tm;
* a full generator matrix [G_1 | ... | G_n] reduces to NRT-triangular
  form, processing blocks in order of increasing residual rank so the
  result is in block echelon form.

Row transforms that protect the top s1 rows (arbitrary operations on the
bottom rows, plus adding bottom rows into top rows) form the group of
admissible matrices [[I, *], [0, GL]]; every stage's transform stays in
the group for its split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Field,
    Matrix,
    UpperTriangular,
    _invert_array,
    _rank_array,
)
from .errors import DimensionMismatch, SpaceMismatch
from .metric import CodeSpace, chain_weight_array
from .symmetry import Isometry, UpperTriangular as _UT  # noqa: F401  (re-export convenience)
from .symmetry import identity_isometry


@dataclass(frozen=True)
class BlockSplit:
    """Row split into s1 protected top rows and s2 free bottom rows."""

    s1: int
    s2: int

    def __post_init__(self):
        if self.s1 < 0 or self.s2 < 0:
            raise ValueError("split counts must be >= 0")

    @property
    def k(self) -> int:
        return self.s1 + self.s2


@dataclass(frozen=True)
class ReductionWitness:
    """Certificate that G_out = S @ (iso applied row-wise to G_in)."""

    row_transform: Matrix
    iso: Isometry
    space: CodeSpace


def is_admissible(S: Matrix, split: BlockSplit) -> bool:
    """True iff S = [[I_s1, any], [0, invertible]] for the given split."""
    if S.rows != S.cols:
        raise DimensionMismatch("admissibility is defined for square matrices")
    if S.rows != split.k:
        raise DimensionMismatch(f"matrix size {S.rows} != split total {split.k}")
    s1 = split.s1
    a = S.array
    if not np.array_equal(a[:s1, :s1], np.eye(s1, dtype=np.int64)):
        return False
    if np.any(a[s1:, :s1]):
        return False
    return _rank_array(S.field, a[s1:, s1:]) == split.s2


# ---------------------------------------------------------------------------
# triangular-reduced blocks
# ---------------------------------------------------------------------------

def _is_tm_reduced_array(arr: np.ndarray) -> tuple[bool, list[tuple[int, int]] | None]:
    """Greedy pivot scan; returns (ok, [(pivot_row, column), ...]).

    A column is acceptable iff it has an entry equal to 1 in a row not yet
    covered by earlier nonzero columns; any such choice works, so greedy
    acceptance decides the existential row permutation.
    """
    covered = np.zeros(arr.shape[0], dtype=bool)
    pivots: list[tuple[int, int]] = []
    for c in range(arr.shape[1]):
        col = arr[:, c]
        if not col.any():
            continue
        candidates = np.nonzero((col == 1) & ~covered)[0]
        if candidates.size == 0:
            return False, None
        pivots.append((int(candidates[0]), c))
        covered |= col != 0
    return True, pivots


def is_tm_reduced(M: Matrix) -> bool:
    """Whether some row permutation puts every nonzero column in pivot form.

    Required form per column: entries (c_1, .., c_{w-1}, 1, 0, .., 0) with
    the pivot rows strictly increasing across nonzero columns.
    """
    ok, _ = _is_tm_reduced_array(M.array)
    return ok


def tm_reduced_witness(M: Matrix) -> tuple[int, ...] | None:
    """A row order (new position -> old row) realizing the reduced form."""
    ok, pivots = _is_tm_reduced_array(M.array)
    if not ok:
        return None
    pivot_rows = [p for p, _ in pivots]
    taken = set(pivot_rows)
    others = [r for r in range(M.rows) if r not in taken]
    return tuple(others + pivot_rows)


def _sub_map_to_canonical(field: Field, row: np.ndarray, cols: list[int]) -> np.ndarray:
    """T in Tm sending row to the canonical vector of its last active column.

    cols is the (sorted) working sub-chain; the pivot is cols[-1].  T is
    the identity outside the working columns, so previously fixed columns
    are untouched.
    """
    m = row.size
    T = np.eye(m, dtype=np.int64)
    piv = cols[-1]
    pivot_inv = int(field.inv(int(row[piv])))
    T[piv, piv] = pivot_inv
    earlier = [c for c in cols[:-1] if row[c]]
    if earlier:
        T[earlier, piv] = field.neg(field.mul(row[earlier], pivot_inv))
    return T


def _tm_reduce_array(
    field: Field, arr: np.ndarray, active: list[int] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Reduce arr by column operations restricted to the active sub-chain.

    Repeatedly takes a row of maximum weight within the remaining active
    columns (highest row index on ties), maps it to the canonical vector
    of its pivot column, and shrinks the working column set below that
    pivot.  Returns (arr @ T^t, T).
    """
    m = arr.shape[1]
    work = list(range(m)) if active is None else list(active)
    A = arr.astype(np.int64, copy=True)
    T = np.eye(m, dtype=np.int64)
    while work and A.shape[0]:
        sub = A[:, work]
        w = chain_weight_array(sub)
        t = int(w.max()) if w.size else 0
        if t == 0:
            break
        r = int(np.nonzero(w == t)[0][-1])
        T1 = _sub_map_to_canonical(field, A[r], work[:t])
        A = field.matmul(A, T1.T)
        T = field.matmul(T1, T)
        work = work[: t - 1]
    return A, T


def tm_reduce(M: Matrix) -> tuple[Matrix, UpperTriangular]:
    """Triangular-reduce one block: M0 = M @ T^t with is_tm_reduced(M0)."""
    A, T = _tm_reduce_array(M.field, M.array)
    return Matrix(M.field, A), UpperTriangular(Matrix(M.field, T))


# ---------------------------------------------------------------------------
# one chain: canonical rows, one per attained weight
# ---------------------------------------------------------------------------

def _one_chain_core(
    field: Field, arr: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[int]]:
    """Reduce rows over a single chain to canonical vectors.

    Row-eliminates duplicate weights until all nonzero rows have distinct
    chain weights (those weights are then exactly the nonzero weights
    attained by the row span), sorts nonzero rows by increasing weight
    with zero rows last, and applies one T sending row l to e_{w_l}.

    Returns (reduced, S, T, weights) with reduced = S @ arr @ T^t.
    """
    A = arr.astype(np.int64, copy=True)
    rows = A.shape[0]
    m = A.shape[1]
    S = np.eye(rows, dtype=np.int64)
    while True:
        w = chain_weight_array(A)
        nz = w[w > 0]
        if nz.size == 0:
            break
        vals, counts = np.unique(nz, return_counts=True)
        dup = vals[counts >= 2]
        if dup.size == 0:
            break
        t = int(dup.max())
        where = np.nonzero(w == t)[0]
        keeper, victims = int(where[0]), where[1:]
        lam = field.div(A[victims, t - 1], int(A[keeper, t - 1]))
        A[victims] = field.sub(A[victims], field.mul(lam[:, None], A[keeper][None, :]))
        S[victims] = field.sub(S[victims], field.mul(lam[:, None], S[keeper][None, :]))
    w = chain_weight_array(A)
    order = np.argsort(np.where(w == 0, m + 1, w), kind="stable")
    A, S = A[order], S[order]
    weights = [int(x) for x in w[order] if x > 0]
    T_inv = np.eye(m, dtype=np.int64)
    for l, wl in enumerate(weights):
        T_inv[:, wl - 1] = A[l]
    T = _invert_array(field, T_inv)
    A = field.matmul(A, T.T)
    return A, S, T, weights


def one_chain_standard_form(
    M: Matrix, space: CodeSpace | None = None
) -> tuple[Matrix, ReductionWitness, list[int]]:
    """Canonical generator rows over one chain, plus witness and weights.

    The nonzero rows of the result are e_{w_1}, .., e_{w_r} for the
    strictly increasing list of nonzero chain weights attained by the row
    space; zero rows sink to the bottom.
    """
    if space is None:
        space = CodeSpace(M.field, M.cols, 1)
    if space.n != 1:
        raise SpaceMismatch("one-chain standard form requires n = 1")
    if space.field != M.field:
        raise SpaceMismatch("matrix field differs from the space's field")
    if M.cols != space.dim:
        raise DimensionMismatch(f"row length {M.cols} != {space.dim}")
    A, S, T, weights = _one_chain_core(M.field, M.array)
    iso = Isometry(space, (0,), (UpperTriangular(Matrix(M.field, T)),))
    witness = ReductionWitness(Matrix(M.field, S), iso, space)
    return Matrix(M.field, A), witness, weights


# ---------------------------------------------------------------------------
# one block under a protected-row split
# ---------------------------------------------------------------------------

def _block_reduce_arrays(
    field: Field, arr: np.ndarray, s1: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduce one k x m block with the top s1 rows protected.

    Returns (out, S, T) with out = S @ arr @ T^t, S admissible for
    (s1, k - s1).  If the bottom rows are zero the whole block is
    triangular-reduced by column operations alone.  Otherwise the bottom
    rows become canonical vectors J, the top entries above J's pivots are
    cleared by adding bottom rows upward, and the top rows are jointly
    triangular-reduced on the columns away from J's pivots.
    """
    k, m = arr.shape
    if not arr[s1:].any():
        out, T = _tm_reduce_array(field, arr)
        return out, np.eye(k, dtype=np.int64), T
    bottom, S_b, T1, weights = _one_chain_core(field, arr[s1:])
    S = np.eye(k, dtype=np.int64)
    S[s1:, s1:] = S_b
    A = np.vstack([field.matmul(arr[:s1], T1.T), bottom])
    for l, wl in enumerate(weights):
        c = wl - 1
        pr = s1 + l
        coeffs = A[:s1, c].copy()
        if coeffs.any():
            A[:s1] = field.sub(A[:s1], field.mul(coeffs[:, None], A[pr][None, :]))
            S[:s1] = field.sub(S[:s1], field.mul(coeffs[:, None], S[pr][None, :]))
    pivot_cols = {wl - 1 for wl in weights}
    free_cols = [c for c in range(m) if c not in pivot_cols]
    top, T2 = _tm_reduce_array(field, A[:s1], active=free_cols)
    A[:s1] = top
    T = field.matmul(T2, T1)
    return A, S, T


def block_reduce(M: Matrix, split: BlockSplit) -> tuple[Matrix, ReductionWitness]:
    """Reduce a block under a protected-row split, with witness."""
    if split.k != M.rows:
        raise DimensionMismatch(f"split total {split.k} != row count {M.rows}")
    A, S, T = _block_reduce_arrays(M.field, M.array, split.s1)
    space = CodeSpace(M.field, M.cols, 1)
    iso = Isometry(space, (0,), (UpperTriangular(Matrix(M.field, T)),))
    witness = ReductionWitness(Matrix(M.field, S), iso, space)
    return Matrix(M.field, A), witness


# ---------------------------------------------------------------------------
# full NRT-triangular form
# ---------------------------------------------------------------------------

def nrt_triangular_form(G: Matrix, space: CodeSpace) -> tuple[Matrix, ReductionWitness]:
    """Reduce a generator matrix to NRT-triangular form with a witness.

    Stage i selects, among the unprocessed blocks, the one whose bottom
    rows have minimum rank (lowest position on ties), swaps it into place,
    reduces it under the current split, and stacks its new pivot rows
    directly under the protected rows.
    """
    if G.cols != space.dim:
        raise DimensionMismatch(f"column count {G.cols} != {space.dim}")
    if G.field != space.field:
        raise SpaceMismatch("matrix field differs from the space's field")
    field = space.field
    k, m, n = G.rows, space.m, space.n
    A = G.array.astype(np.int64, copy=True)
    S_total = np.eye(k, dtype=np.int64)
    orig_at = list(range(n))
    stage_T: list[np.ndarray] = []
    s1 = 0
    for i in range(n):
        ranks = [
            _rank_array(field, A[s1:, space.block_slice(p)]) for p in range(i, n)
        ]
        sel = i + int(np.argmin(ranks))
        if sel != i:
            ci, cs = space.block_slice(i), space.block_slice(sel)
            A[:, ci], A[:, cs] = A[:, cs].copy(), A[:, ci].copy()
            orig_at[i], orig_at[sel] = orig_at[sel], orig_at[i]
        cols = space.block_slice(i)
        B_out, S_step, T_step = _block_reduce_arrays(field, A[:, cols], s1)
        # admissible row transforms fix the already-processed blocks, whose
        # rows below s1 are zero; only unprocessed columns need updating
        rest = slice((i + 1) * m, n * m)
        A[:, rest] = field.matmul(S_step, A[:, rest])
        A[:, cols] = B_out
        S_total = field.matmul(S_step, S_total)
        stage_T.append(T_step)
        s1 += int(np.any(B_out[s1:] != 0, axis=1).sum())
    perm = [0] * n
    for position, original in enumerate(orig_at):
        perm[original] = position
    iso = Isometry(
        space,
        tuple(perm),
        tuple(UpperTriangular(Matrix(field, T)) for T in stage_T),
    )
    witness = ReductionWitness(Matrix(field, S_total), iso, space)
    return Matrix(field, A), witness


# ---------------------------------------------------------------------------
# the NRT-triangular predicate, with diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionCheck:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class TriangularReport:
    ok: bool
    conditions: tuple[ConditionCheck, ...]


def _trailing_zero_rows(block: np.ndarray) -> int:
    nonzero = np.any(block != 0, axis=1)
    hit = np.nonzero(nonzero)[0]
    return block.shape[0] - (int(hit[-1]) + 1 if hit.size else 0)


def _canonical_rows_increasing(rows: np.ndarray) -> tuple[bool, str]:
    """All rows canonical vectors with strictly increasing weights."""
    last = 0
    for idx, row in enumerate(rows):
        nz = np.nonzero(row)[0]
        if nz.size != 1 or row[nz[0]] != 1:
            return False, f"row {idx + 1} is not a canonical vector"
        w = int(nz[0]) + 1
        if w <= last:
            return False, f"row {idx + 1} breaks the increasing-weight order"
        last = w
    return True, "canonical rows in increasing weight order"


def _split_shape_ok(field: Field, block: np.ndarray, s1: int) -> tuple[bool, str]:
    """The [[A, B], [J, 0]] shape for a block with protected top rows."""
    bottom = block[s1:]
    if bottom.size == 0 or not bottom.any():
        return False, "no nonzero bottom row, split shape does not apply"
    w = int(chain_weight_array(bottom).max())
    J = bottom[:, :w]
    nonzero_rows = J[np.any(J != 0, axis=1)]
    ok, msg = _canonical_rows_increasing(nonzero_rows)
    if not ok:
        return False, f"pivot rows: {msg}"
    if not J[:, w - 1].any():
        return False, "last pivot column is zero"
    pivot_cols = [int(np.nonzero(r)[0][0]) for r in nonzero_rows]
    A = block[:s1, :w]
    if A.size and np.any(A[:, pivot_cols]):
        return False, "protected rows are nonzero above a pivot"
    okA, _ = _is_tm_reduced_array(A)
    if not okA:
        return False, "left protected part is not triangular-reduced"
    okB, _ = _is_tm_reduced_array(block[:s1, w:])
    if not okB:
        return False, "right protected part is not triangular-reduced"
    return True, f"split form with {len(pivot_cols)} pivot rows below row {s1}"


def check_nrt_triangular(G: Matrix, space: CodeSpace) -> TriangularReport:
    """Per-condition diagnostics for the NRT-triangular predicate."""
    if G.cols != space.dim:
        raise DimensionMismatch(f"column count {G.cols} != {space.dim}")
    if G.field != space.field:
        raise SpaceMismatch("matrix field differs from the space's field")
    arr = G.array
    k, n = G.rows, space.n
    blocks = [arr[:, space.block_slice(j)] for j in range(n)]
    z = [_trailing_zero_rows(b) for b in blocks]
    checks: list[ConditionCheck] = []

    echelon = all(z[i - 1] >= z[i] for i in range(1, n))
    checks.append(
        ConditionCheck(
            "block_echelon",
            echelon,
            f"trailing zero rows per block: {z}",
        )
    )

    first_nonzero = blocks[0][: k - z[0]]
    ok2, msg2 = _canonical_rows_increasing(first_nonzero)
    checks.append(ConditionCheck("block_1_canonical", ok2, msg2))

    for i in range(1, n):
        s1 = k - z[i - 1]
        ok_plain, _ = _is_tm_reduced_array(blocks[i])
        if ok_plain:
            checks.append(
                ConditionCheck(f"block_{i + 1}_reduced", True, "triangular-reduced")
            )
            continue
        ok_split, msg = _split_shape_ok(space.field, blocks[i], s1)
        checks.append(
            ConditionCheck(
                f"block_{i + 1}_reduced",
                ok_split,
                msg if ok_split else f"not triangular-reduced and {msg}",
            )
        )

    return TriangularReport(all(c.ok for c in checks), tuple(checks))


def is_nrt_triangular(G: Matrix, space: CodeSpace) -> bool:
    return check_nrt_triangular(G, space).ok
