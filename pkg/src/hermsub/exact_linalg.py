"""Dense exact linear algebra over flat finite fields.

Matrices hold packed field integers in an int64 numpy array.  Gauss-Jordan
elimination uses the field's operation tables; characteristic-2 addition is
a plain XOR, and F_2 itself has a bit-packed path (64 columns per word).
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .ff_tower import GF, FieldError


@dataclass(eq=False)
class MatrixF:
    field: GF
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64)
        if self.data.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if self.data.size and (self.data.min() < 0 or self.data.max() >= self.field.order):
            raise FieldError("matrix entry outside the declared field")

    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int) -> "MatrixF":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: GF, n: int) -> "MatrixF":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "MatrixF":
        return MatrixF(self.field, self.data.T.copy())

    def to_csv(self) -> str:
        buf = io.StringIO()
        np.savetxt(buf, self.data, fmt="%d", delimiter=",")
        return buf.getvalue()

    def __repr__(self):
        return f"MatrixF({self.rows}x{self.cols} over F_{self.field.order})"


# ---------------------------------------------------------------------------
# generic Gauss-Jordan


def _rref_generic(F: GF, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    R = A.copy()
    m, n = R.shape
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    char2 = F.p == 2
    row = 0
    pivots: list[int] = []
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(R[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        lead = R[row, col]
        if lead != 1:
            R[row, col:] = mul[inv[lead], R[row, col:]]
        others = np.flatnonzero(R[:, col])
        others = others[others != row]
        if others.size:
            prow = R[row, col:]
            if char2:
                prod = mul[R[others, col][:, None], prow[None, :]]
                R[others, col:] ^= prod
            else:
                prod = mul[neg[R[others, col]][:, None], prow[None, :]]
                R[others, col:] = add[R[others, col:], prod]
        pivots.append(col)
        row += 1
    return R, pivots


# ---------------------------------------------------------------------------
# F_2 bit-packed path


def pack_bits(A: np.ndarray) -> np.ndarray:
    """(m, n) 0/1 array -> (m, ceil(n/64)) uint64, column j at bit j%64 of word j//64."""
    m, n = A.shape
    nw = max(1, -(-n // 64))
    padded = np.zeros((m, nw * 64), dtype=np.uint8)
    padded[:, :n] = A
    b = np.packbits(padded.reshape(m, nw, 64), axis=2, bitorder="little")
    return np.ascontiguousarray(b).view("<u8").reshape(m, nw).astype(np.uint64)


def unpack_bits(W: np.ndarray, n: int) -> np.ndarray:
    m, nw = W.shape
    b = np.ascontiguousarray(W.astype("<u8")).view(np.uint8).reshape(m, nw, 8)
    bits = np.unpackbits(b, axis=2, bitorder="little").reshape(m, nw * 64)
    return bits[:, :n].astype(np.int64)


def _rref_gf2_packed(W: np.ndarray, n: int) -> tuple[np.ndarray, list[int]]:
    W = W.copy()
    m = W.shape[0]
    row = 0
    pivots: list[int] = []
    for col in range(n):
        if row == m:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1 << b)
        colbits = (W[:, w] & bit) != 0
        nz = np.flatnonzero(colbits[row:])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            W[[row, piv]] = W[[piv, row]]
            colbits[row], colbits[piv] = colbits[piv], colbits[row]
        colbits[row] = False
        if colbits.any():
            W[colbits] ^= W[row]
        pivots.append(col)
        row += 1
    return W, pivots


def rank_gf2_packed(W: np.ndarray, n: int) -> int:
    """Rank of a packed binary matrix (forward elimination only)."""
    W = W.copy()
    m = W.shape[0]
    row = 0
    for col in range(n):
        if row == m:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1 << b)
        sub = W[row:]
        colbits = (sub[:, w] & bit) != 0
        nz = np.flatnonzero(colbits)
        if nz.size == 0:
            continue
        piv = int(nz[0])
        prow = sub[piv].copy()
        if piv != 0:
            sub[piv] = sub[0]
            sub[0] = prow
            colbits[piv] = colbits[0]
        colbits[0] = False
        if colbits.any():
            sub[colbits] ^= prow
        row += 1
    return row


# ---------------------------------------------------------------------------
# public operations


def rref_rank(M: MatrixF, *, packed: bool | None = None) -> tuple[MatrixF, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns.

    Pivots are chosen deterministically: leftmost column, lowest row index.
    ``packed`` forces (True) or disables (False) the F_2 bitset path; by
    default it is used whenever the field is F_2.
    """
    F = M.field
    if packed is None:
        packed = F.order == 2
    if packed and F.order != 2:
        raise FieldError("bit-packed elimination needs F_2")
    if M.rows == 0 or M.cols == 0:
        return MatrixF(F, M.data.copy()), 0, []
    if packed:
        W, pivots = _rref_gf2_packed(pack_bits(M.data), M.cols)
        R = unpack_bits(W, M.cols)
    else:
        R, pivots = _rref_generic(F, M.data)
    return MatrixF(F, R), len(pivots), pivots


def rank(M: MatrixF) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.field.order == 2:
        return rank_gf2_packed(pack_bits(M.data), M.cols)
    return rref_rank(M)[1]


def nullspace_from_rref(R: MatrixF, pivots: list[int]) -> MatrixF:
    F = R.field
    n = R.cols
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((len(free), n), dtype=np.int64)
    if free:
        fidx = np.array(free)
        N[np.arange(len(free)), fidx] = 1
        if pivots:
            block = R.data[: len(pivots)][:, fidx]  # (rank, nfree)
            N[:, np.array(pivots)] = F.neg[block.T]
    return MatrixF(F, N)


def nullspace(M: MatrixF) -> MatrixF:
    """Basis (as rows) of the right kernel {v : M v^T = 0}."""
    R, _, pivots = rref_rank(M)
    return nullspace_from_rref(R, pivots)


def row_space_equal(A: MatrixF, B: MatrixF) -> bool:
    if A.field != B.field:
        raise FieldError("matrices over different fields")
    if A.cols != B.cols:
        raise ValueError(f"column counts differ: {A.cols} vs {B.cols}")
    Ra, ra, _ = rref_rank(A)
    Rb, rb, _ = rref_rank(B)
    return ra == rb and np.array_equal(Ra.data[:ra], Rb.data[:rb])


def matmul(A: MatrixF, B: MatrixF) -> MatrixF:
    """Matrix product; cost scales with the nonzeros of A."""
    F = A.field
    if A.cols != B.rows:
        raise ValueError("inner dimensions differ")
    C = np.zeros((A.rows, B.cols), dtype=np.int64)
    for j in range(A.cols):
        rows = np.flatnonzero(A.data[:, j])
        if rows.size == 0:
            continue
        prod = F.mul[A.data[rows, j][:, None], B.data[j][None, :]]
        if F.p == 2:
            C[rows] ^= prod
        else:
            C[rows] = F.add[C[rows], prod]
    return MatrixF(F, C)


def stack(*mats: MatrixF) -> MatrixF:
    F = mats[0].field
    return MatrixF(F, np.vstack([m.data for m in mats]))
