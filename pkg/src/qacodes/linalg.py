"""Dense linear algebra over a small finite field, on integer element codes.

Matrices are 2-d ``numpy`` integer arrays whose entries are the element
codes of a :class:`~qacodes.gf_arith.FieldSpec`; all arithmetic goes
through the field's lookup tables.
"""

from __future__ import annotations

import numpy as np

from .gf_arith import FieldSpec

# Target element count of one enumeration chunk (rows x word length).
CHUNK_ELEMS = 1 << 22


def rref(M, F: FieldSpec):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2 or R.size == 0:
        return R.reshape(0, R.shape[-1] if R.ndim == 2 else 0), []
    add, mul = F.add_table, F.mul_table
    inv, neg = F.inv_table, F.neg_table
    nrows, ncols = R.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = mul[inv[R[row, col]], R[row]]
        factors = neg[R[:, col]]
        factors[row] = 0
        # row_i <- row_i - R[i,col] * pivot_row, all rows at once
        R = add[R, mul[factors[:, None], R[row][None, :]]]
        pivots.append(col)
        row += 1
    return R[:row], pivots


def rank(M, F: FieldSpec) -> int:
    return len(rref(M, F)[1])


def matmul(a, b, F: FieldSpec):
    """Row vectors ``a`` (..., r) times matrix ``b`` (r, c)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(a.shape[:-1] + (b.shape[1],), dtype=np.int64)
    for i in range(b.shape[0]):
        out = F.add_table[out, F.mul_table[a[..., i, None], b[i]]]
    return out


def _bit_rows(M):
    return np.array([sum(1 << j for j, v in enumerate(row) if v) for row in M], dtype=np.uint64)


def _span_bits(rows):
    out = np.zeros(1, dtype=np.uint64)
    for r in rows:
        out = np.concatenate([out, out ^ r])
    return out


def _span_codes(M, F: FieldSpec):
    out = np.zeros((1, M.shape[1]), dtype=np.int64)
    for row in M:
        parts = [F.add_table[out, F.mul_table[c, row]] for c in range(F.q)]
        out = np.concatenate(parts)
    return out


def span_weights(M, F: FieldSpec, chunk_elems: int = CHUNK_ELEMS):
    """Yield Hamming weights of ``c @ M`` for every coefficient vector ``c``.

    Coefficient vectors are visited in mixed-radix order with row 0 as the
    least significant digit, i.e. message index ``sum(c_i * q**i)``.  Weights
    arrive as consecutive ``uint16`` chunks; concatenated they are indexed
    by message index.
    """
    M = np.asarray(M, dtype=np.int64)
    r, L = M.shape
    q = F.q
    if r == 0:
        yield np.zeros(1, dtype=np.uint16)
        return
    low = 0
    while low < r and q ** (low + 1) * max(L, 1) <= chunk_elems:
        low += 1
    low = max(low, 1)
    high_rows = M[low:]
    n_high = r - low

    if q == 2 and L <= 64:
        lo = _span_bits(_bit_rows(M[:low]))
        hi = _bit_rows(high_rows)
        for idx in range(2**n_high):
            h = np.uint64(0)
            for j in range(n_high):
                if idx >> j & 1:
                    h ^= hi[j]
            yield np.bitwise_count(lo ^ h).astype(np.uint16)
        return

    lo = _span_codes(M[:low], F)
    digits = [0] * n_high
    h = np.zeros(L, dtype=np.int64)
    for _ in range(q**n_high):
        yield np.count_nonzero(F.add_table[lo, h], axis=1).astype(np.uint16)
        # odometer increment of the high digits; h tracks the combination
        for j in range(n_high):
            h = F.add_table[h, high_rows[j]]
            digits[j] += 1
            if digits[j] < q:
                break
            digits[j] = 0  # wrapped: q additions of a row return h to its start


def all_weights(M, F: FieldSpec) -> np.ndarray:
    return np.concatenate(list(span_weights(M, F)))


def span_words(M, F: FieldSpec) -> np.ndarray:
    """Every word ``c @ M``, indexed by message index (small inputs only)."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return np.zeros((1, M.shape[1]), dtype=np.int64)
    return _span_codes(M, F)
