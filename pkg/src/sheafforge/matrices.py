"""Dense exact linear algebra over a Field with labelled columns.

Entries are integer encodings (see ``fields``). Over F_2 the row reduction
packs each row into a Python int and eliminates with XOR.
"""

from __future__ import annotations

import numpy as np

from .errors import FieldMismatch
from .fields import Field


# --- raw array kernels -------------------------------------------------------

def _pack_rows(A):
    m, n = A.shape
    if n == 0:
        return [0] * m
    packed = np.packbits(A.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def _unpack_rows(rows, n):
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    nbytes = (n + 7) // 8
    buf = np.frombuffer(b"".join(r.to_bytes(nbytes, "little") for r in rows), dtype=np.uint8)
    bits = np.unpackbits(buf.reshape(len(rows), nbytes), axis=1, bitorder="little")
    return bits[:, :n].astype(np.int64)


def _rref_gf2(A):
    m, n = A.shape
    rows = [r for r in _pack_rows(A) if r]
    pivots = []
    rank = 0
    for c in range(n):
        bit = 1 << c
        for i in range(rank, len(rows)):
            if rows[i] & bit:
                break
        else:
            continue
        rows[rank], rows[i] = rows[i], rows[rank]
        piv = rows[rank]
        for j in range(len(rows)):
            if j != rank and rows[j] & bit:
                rows[j] ^= piv
        pivots.append(c)
        rank += 1
        if rank == len(rows):
            break
    R = np.zeros((m, n), dtype=np.int64)
    if rank:
        R[:rank] = _unpack_rows(rows[:rank], n)
    return R, pivots


def gf2_rank(A) -> int:
    """Rank over F_2 of a 0/1 array (no reduced form is built)."""
    A = np.asarray(A)
    rows = [r for r in _pack_rows(A) if r]
    rank = 0
    basis = {}
    for r in rows:
        while r:
            low = r & -r
            if low in basis:
                r ^= basis[low]
            else:
                basis[low] = r
                rank += 1
                break
    return rank


def rref_array(field: Field, A):
    """Reduced row echelon form of an encoded array; returns (R, pivots)."""
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    m, n = A.shape
    if field.q == 2:
        return _rref_gf2(A)
    R = A
    pivots = []
    rank = 0
    for c in range(n):
        if rank == m:
            break
        nz = np.nonzero(R[rank:, c])[0]
        if nz.size == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            R[[rank, i]] = R[[i, rank]]
        lead = int(R[rank, c])
        if lead != 1:
            R[rank] = field.vmul(R[rank], field.inv(lead))
        others = np.nonzero(R[:, c])[0]
        others = others[others != rank]
        if others.size:
            factors = R[others, c]
            R[others] = field.vsub(R[others], field.vmul(factors[:, None], R[rank][None, :]))
        pivots.append(c)
        rank += 1
    return R, pivots


def rank_array(field: Field, A) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    if field.q == 2:
        return gf2_rank(A)
    return len(rref_array(field, A)[1])


def kernel_array(field: Field, A, n=None):
    """Basis (as rows) of the right kernel of A, one row per free column."""
    A = np.asarray(A, dtype=np.int64)
    if n is None:
        n = A.shape[1]
    if A.size == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_array(field, A)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for j, f in enumerate(free):
        K[j, f] = 1
        for i, pc in enumerate(pivots):
            K[j, pc] = field.neg(int(R[i, f]))
    return K


def row_basis(field: Field, A):
    """Nonzero rows of the rref: canonical basis of the row space."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, pivots = rref_array(field, A)
    return R[: len(pivots)]


def in_rowspace(field: Field, A, v) -> bool:
    A = np.asarray(A, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64).reshape(1, -1)
    if A.size == 0:
        return not np.any(v)
    return rank_array(field, np.vstack([A, v])) == rank_array(field, A)


def solve_array(field: Field, A, b):
    """Some x with A x = b, or None when inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    m, n = A.shape
    aug = np.hstack([A, b])
    R, pivots = rref_array(field, aug)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


# --- labelled matrices -------------------------------------------------------

class Matrix:
    """An m x |B| matrix over a Field whose columns carry opaque labels."""

    __slots__ = ("field", "data", "columns", "_index")

    def __init__(self, field: Field, data, columns=None):
        data = np.asarray(data, dtype=np.int64)
        if data.ndim == 1 and data.size == 0 and columns is not None:
            data = data.reshape(0, len(columns))
        if data.ndim != 2:
            raise ValueError("matrix data must be 2-d")
        if columns is None:
            columns = tuple(range(data.shape[1]))
        columns = tuple(columns)
        if len(columns) != data.shape[1]:
            raise ValueError(f"{len(columns)} labels for {data.shape[1]} columns")
        index = {c: j for j, c in enumerate(columns)}
        if len(index) != len(columns):
            raise ValueError("column labels must be distinct")
        if data.size and (data.min() < 0 or data.max() >= field.q):
            raise ValueError(f"entries outside {field}")
        self.field = field
        self.data = data
        self.data.setflags(write=False)
        self.columns = columns
        self._index = index

    @classmethod
    def zeros(cls, field, m, columns):
        columns = tuple(columns)
        return cls(field, np.zeros((m, len(columns)), dtype=np.int64), columns)

    @classmethod
    def identity(cls, field, columns):
        columns = tuple(columns)
        return cls(field, np.eye(len(columns), dtype=np.int64), columns)

    @property
    def shape(self):
        return self.data.shape

    @property
    def nrows(self):
        return self.data.shape[0]

    @property
    def ncols(self):
        return self.data.shape[1]

    def col_index(self, label):
        return self._index[label]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.columns == other.columns and np.array_equal(self.data, other.data))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.data.tolist()}, columns={list(self.columns)})"

    def to_dict(self):
        return {"rows": self.data.tolist(), "columns": [_label_json(c) for c in self.columns]}

    @classmethod
    def from_dict(cls, field, d):
        rows = d["rows"]
        cols = d.get("columns")
        if cols is not None:
            cols = [_label_from_json(c) for c in cols]
            data = np.array(rows, dtype=np.int64).reshape(len(rows), len(cols))
        else:
            data = np.array(rows, dtype=np.int64)
        return cls(field, data, cols)

    def with_data(self, data):
        return Matrix(self.field, data, self.columns)

    def matmul(self, other: "Matrix") -> "Matrix":
        """self @ other where other's rows are indexed by self's columns (positionally)."""
        _same_field(self, other)
        return Matrix(self.field, self.field.matmul(self.data, other.data), other.columns)

    def transpose(self, columns=None) -> "Matrix":
        return Matrix(self.field, self.data.T.copy(), columns)


def _same_field(*ms):
    f = ms[0].field
    for m in ms[1:]:
        if m.field != f:
            raise FieldMismatch(f"{f} vs {m.field}")


def _label_json(c):
    if isinstance(c, tuple):
        return [_label_json(x) for x in c]
    if isinstance(c, (np.integer,)):
        return int(c)
    return c


def _label_from_json(c):
    if isinstance(c, list):
        return tuple(_label_from_json(x) for x in c)
    return c


def rref(M: Matrix):
    R, pivots = rref_array(M.field, M.data)
    return Matrix(M.field, R, M.columns), len(pivots), pivots


def rank(M: Matrix) -> int:
    return rank_array(M.field, M.data)


def kernel_basis(M: Matrix) -> Matrix:
    return Matrix(M.field, kernel_array(M.field, M.data, M.ncols), M.columns)


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    _same_field(A, B)
    f = A.field
    a, b = A.data, B.data
    out = f.vmul(a[:, None, :, None], b[None, :, None, :])
    out = out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    cols = [(x, y) for x in A.columns for y in B.columns]
    return Matrix(f, out, cols)


def stack(Ms, column_universe) -> Matrix:
    """Concatenate rows, zero-padding each matrix into the universe's columns."""
    universe = tuple(column_universe)
    if not Ms:
        raise ValueError("stack needs at least one matrix (field unknown)")
    _same_field(*Ms)
    pos = {c: j for j, c in enumerate(universe)}
    total = sum(M.nrows for M in Ms)
    out = np.zeros((total, len(universe)), dtype=np.int64)
    r = 0
    for M in Ms:
        try:
            idx = [pos[c] for c in M.columns]
        except KeyError as e:
            raise KeyError(f"label {e.args[0]!r} outside the column universe") from None
        if M.nrows:
            out[r:r + M.nrows, idx] = M.data
        r += M.nrows
    return Matrix(Ms[0].field, out, universe)


def restrict_columns(M: Matrix, J) -> Matrix:
    J = tuple(J)
    try:
        idx = [M.col_index(c) for c in J]
    except KeyError as e:
        raise KeyError(f"unknown column label {e.args[0]!r}") from None
    return Matrix(M.field, M.data[:, idx], J)


def reorder_columns(M: Matrix, order) -> Matrix:
    order = tuple(order)
    if set(order) != set(M.columns) or len(order) != len(M.columns):
        raise ValueError("reorder needs a permutation of the column labels")
    return restrict_columns(M, order)


def inverse_array(field: Field, A):
    """Inverse of a square nonsingular array."""
    A = np.asarray(A, dtype=np.int64)
    k = A.shape[0]
    if A.shape != (k, k):
        raise ValueError("inverse needs a square matrix")
    R, pivots = rref_array(field, np.hstack([A, np.eye(k, dtype=np.int64)]))
    if pivots[:k] != list(range(k)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, k:]
