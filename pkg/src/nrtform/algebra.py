"""Exact arithmetic in GF(q) and dense linear algebra over it.

Field elements are encoded as integers in [0, q).  For q = p^e with e > 1
the base-p digits of the encoding are the coefficients of a polynomial
over GF(p), least significant digit = constant term; multiplication is
done through discrete-log tables built from a primitive element.  Prime
fields use direct modular arithmetic.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    NotPrimePower,
    TooLarge,
)

MAX_FIELD_ORDER = 1 << 16


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients stored low degree first
# ---------------------------------------------------------------------------

def _factor(n: int) -> dict[int, int]:
    """Prime factorization by trial division (n <= 2^16 here)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _bits_mod(a: int, b: int) -> int:
    """Remainder of bit-encoded GF(2) polynomial a modulo b."""
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def _gf2_irreducible(f: int, e: int) -> bool:
    """Trial division of the bit-encoded degree-e polynomial f."""
    for d in range(1, e // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if _bits_mod(f, g) == 0:
                return False
    return True


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a modulo b over GF(p); b monic-led (last coeff nonzero)."""
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db:
        if a[-1] != 0:
            factor = (a[-1] * inv_lead) % p
            shift = len(a) - 1 - db
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - factor * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_irreducible(f: list[int], p: int) -> bool:
    e = len(f) - 1
    if p == 2:
        fb = sum(c << i for i, c in enumerate(f))
        return _gf2_irreducible(fb, e)
    for d in range(1, e // 2 + 1):
        for t in range(p**d):
            g = _digits(t, p, d) + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


def _digits(t: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(t % p)
        t //= p
    return out


def _find_modulus(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e over GF(p) with smallest digit encoding."""
    for t in range(p**e):
        f = _digits(t, p, e) + [1]
        if _poly_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

class Field:
    """GF(q), q = p^e <= 2^16.  Create through :func:`field_create`."""

    __slots__ = ("q", "p", "e", "modulus", "_exp", "_log", "_inv_table")

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] | None):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._inv_table: np.ndarray | None = None
        if e > 1:
            self._build_tables()

    # -- construction ------------------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        """Polynomial product of two encodings, reduced mod the modulus."""
        p, e = self.p, self.e
        if p == 2:
            mod_bits = sum(c << i for i, c in enumerate(self.modulus))
            out = 0
            while b:
                if b & 1:
                    out ^= a
                a <<= 1
                if a >> e:
                    a ^= mod_bits
                b >>= 1
            return out
        da, db = _digits(a, p, e), _digits(b, p, e)
        conv = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        rem = _poly_mod(conv, list(self.modulus), p)
        return sum(c * p**i for i, c in enumerate(rem))

    def _pow_raw(self, a: int, n: int) -> int:
        out, base = 1, a
        while n:
            if n & 1:
                out = self._mul_raw(out, base)
            base = self._mul_raw(base, base)
            n >>= 1
        return out

    def _build_tables(self) -> None:
        q = self.q
        primes = list(_factor(q - 1))
        gen = 0
        for g in range(2, q):
            if all(self._pow_raw(g, (q - 1) // r) != 1 for r in primes):
                gen = g
                break
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, gen)
        if v != 1:
            raise AssertionError("generator has wrong order")
        exp[q - 1 :] = exp[: q - 1]
        self._exp = exp
        self._log = log

    # -- element arithmetic (ints or int64 ndarrays) ------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, lambda x, y: (x + y) % self.p)

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, lambda x, y: (x - y) % self.p)

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a if not isinstance(a, np.ndarray) else a.copy()
        return self._digitwise(a, 0, lambda x, _: (-x) % self.p)

    def _digitwise(self, a, b, op):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pk = 1
        for _ in range(self.e):
            out += op((a // pk) % self.p, (b // pk) % self.p) * pk
            pk *= self.p
        return out

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        la = self._log[np.where(a == 0, 1, a)]
        lb = self._log[np.where(b == 0, 1, b)]
        return np.where(nz, self._exp[la + lb], 0)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise DivisionByZero("inverse of zero")
        if self.e == 1:
            if self._inv_table is None:
                tab = np.zeros(self.p, dtype=np.int64)
                tab[1:] = [pow(i, self.p - 2, self.p) for i in range(1, self.p)]
                self._inv_table = tab
            return self._inv_table[a]
        return self._exp[(self.q - 1) - self._log[a]]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Exact product of two 2-D int64 arrays of field elements."""
        if self.e == 1:
            p = self.p
            inner = A.shape[1]
            if (p - 1) * (p - 1) * max(inner, 1) < (1 << 53):
                C = A.astype(np.float64) @ B.astype(np.float64)
                return C.astype(np.int64) % p
            return (A @ B) % p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for j in range(A.shape[1]):
            out = self.add(out, self.mul(A[:, j : j + 1], B[j : j + 1, :]))
        return out

    def elements(self) -> range:
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    # -- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"


_field_cache: dict[int, Field] = {}


def field_create(q: int) -> Field:
    """Build GF(q) for a prime power q with 2 <= q <= 2^16."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise NotPrimePower(f"field order must be a prime power >= 2, got {q!r}")
    q = int(q)
    if q > MAX_FIELD_ORDER:
        raise TooLarge(f"field order {q} exceeds {MAX_FIELD_ORDER}")
    if q in _field_cache:
        return _field_cache[q]
    factors = _factor(q)
    if len(factors) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    (p, e), = factors.items()
    modulus = _find_modulus(p, e) if e > 1 else None
    field = Field(p, e, modulus)
    _field_cache[q] = field
    return field


_UNARY_OPS = {"inv", "neg"}


def field_arith(f: Field, a: int, b: int | None, op: str) -> int:
    """Scalar field operation; op is one of add/sub/mul/div/inv/neg."""
    if op not in {"add", "sub", "mul", "div", "inv", "neg"}:
        raise ValueError(f"unknown field operation {op!r}")
    for x in (a,) if op in _UNARY_OPS else (a, b):
        if not isinstance(x, (int, np.integer)) or not 0 <= x < f.q:
            raise ValueError(f"{x!r} is not an element of {f}")
    if op == "add":
        return int(f.add(a, b))
    if op == "sub":
        return int(f.sub(a, b))
    if op == "mul":
        return int(f.mul(a, b))
    if op == "div":
        return int(f.div(a, b))
    if op == "inv":
        return int(f.inv(a))
    return int(f.neg(a))


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix over a Field; rows are the working vectors."""

    __slots__ = ("field", "_a")

    def __init__(self, field: Field, data):
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D array, got ndim={a.ndim}")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise ValueError(f"entries must lie in [0, {field.q})")
        a.setflags(write=False)
        self.field = field
        self._a = a

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only int64 view of the entries."""
        return self._a

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._a]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self._a.T)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self._a.shape == other._a.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self) -> int:
        return hash((self.field, self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.to_lists()})"


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if A.field != B.field:
        raise FieldMismatch("matrix product over different fields")
    if A.cols != B.rows:
        raise DimensionMismatch(f"inner dimensions {A.cols} != {B.rows}")
    return Matrix(A.field, A.field.matmul(A.array, B.array))


def transpose(M: Matrix) -> Matrix:
    return M.transpose()


def canonical_vector(field: Field, i: int, length: int) -> Matrix:
    """1 x length row vector with a single 1 at 1-based position i."""
    if not 1 <= i <= length:
        raise DimensionMismatch(f"index {i} outside 1..{length}")
    row = np.zeros(length, dtype=np.int64)
    row[i - 1] = 1
    return Matrix(field, row)


def random_matrix(field: Field, rows: int, cols: int, seed: int) -> Matrix:
    """Uniform random matrix, fully determined by the seed."""
    rng = np.random.default_rng(seed)
    return Matrix(field, rng.integers(0, field.q, size=(rows, cols), dtype=np.int64))


class RrefResult(NamedTuple):
    R: Matrix
    rank: int
    S: Matrix


def _rref_arrays(field: Field, M: np.ndarray) -> tuple[np.ndarray, int, np.ndarray, list[int]]:
    R = M.astype(np.int64, copy=True)
    k = R.shape[0]
    S = np.eye(k, dtype=np.int64)
    r = 0
    pivots: list[int] = []
    for c in range(R.shape[1]):
        if r >= k:
            break
        hit = np.nonzero(R[r:, c])[0]
        if hit.size == 0:
            continue
        p = r + int(hit[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
            S[[r, p]] = S[[p, r]]
        piv_inv = int(field.inv(int(R[r, c])))
        R[r] = field.mul(R[r], piv_inv)
        S[r] = field.mul(S[r], piv_inv)
        coeffs = R[:, c].copy()
        coeffs[r] = 0
        nz = np.nonzero(coeffs)[0]
        if nz.size:
            R[nz] = field.sub(R[nz], field.mul(coeffs[nz, None], R[r][None, :]))
            S[nz] = field.sub(S[nz], field.mul(coeffs[nz, None], S[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, S, pivots


def rref(M: Matrix) -> RrefResult:
    """Reduced row echelon form with the invertible transform: R = S @ M."""
    R, rank, S, _ = _rref_arrays(M.field, M.array)
    return RrefResult(Matrix(M.field, R), rank, Matrix(M.field, S))


def matrix_rank(M: Matrix) -> int:
    return _rank_array(M.field, M.array)


def _rank_array(field: Field, M: np.ndarray) -> int:
    """Rank by plain elimination, no transform bookkeeping."""
    A = M.astype(np.int64, copy=True)
    k = A.shape[0]
    r = 0
    for c in range(A.shape[1]):
        if r >= k:
            break
        hit = np.nonzero(A[r:, c])[0]
        if hit.size == 0:
            continue
        p = r + int(hit[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        below = A[r + 1 :, c]
        nz = np.nonzero(below)[0]
        if nz.size:
            lam = field.div(below[nz], int(A[r, c]))
            A[r + 1 + nz] = field.sub(A[r + 1 + nz], field.mul(lam[:, None], A[r][None, :]))
        r += 1
    return r


def invert_matrix(M: Matrix) -> Matrix:
    """Inverse of a square matrix; raises ValueError if singular."""
    if M.rows != M.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    R, rank, S, _ = _rref_arrays(M.field, M.array)
    if rank != M.rows:
        raise ValueError("matrix is singular")
    return Matrix(M.field, S)


class UpperTriangular:
    """Invertible upper-triangular matrix, an element of the group Tm."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Matrix):
        if matrix.rows != matrix.cols:
            raise DimensionMismatch("upper-triangular matrices are square")
        a = matrix.array
        if a.size:
            if np.any(np.tril(a, -1)):
                raise ValueError("nonzero entry below the diagonal")
            if np.any(np.diagonal(a) == 0):
                raise ValueError("zero on the diagonal (not invertible)")
        self.matrix = matrix

    @classmethod
    def identity(cls, field: Field, m: int) -> "UpperTriangular":
        return cls(Matrix.identity(field, m))

    @property
    def size(self) -> int:
        return self.matrix.rows

    @property
    def field(self) -> Field:
        return self.matrix.field

    def apply_to_rows(self, M: Matrix) -> Matrix:
        """Send every row v of M to T @ v, i.e. compute M @ T^t."""
        if M.cols != self.size:
            raise DimensionMismatch(f"row length {M.cols} != {self.size}")
        return Matrix(M.field, M.field.matmul(M.array, self.matrix.array.T))

    def compose(self, other: "UpperTriangular") -> "UpperTriangular":
        return UpperTriangular(self.matrix @ other.matrix)

    def inverse(self) -> "UpperTriangular":
        return UpperTriangular(invert_matrix(self.matrix))

    def __eq__(self, other) -> bool:
        return isinstance(other, UpperTriangular) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"UpperTriangular({self.matrix.to_lists()})"
