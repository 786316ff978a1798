"""Linear codes, group-action quotients and group-algebra quantum codes."""

from __future__ import annotations

import math
from itertools import combinations, product as iproduct

import numpy as np

from .errors import BudgetExceeded, FieldMismatch
from .fields import Field
from .groups import FiniteGroup, PermutationAction
from .matrices import Matrix, kernel_array, rank_array, restrict_columns, row_basis

DISTANCE_BUDGET = 1 << 24
CHUNK = 1 << 14
INF = math.inf


def _messages(q, k, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, k), dtype=np.int64)
    for j in range(k - 1, -1, -1):
        out[:, j] = idx % q
        idx //= q
    return out


def iter_span(field: Field, G, budget=DISTANCE_BUDGET, chunk=CHUNK):
    """Yield every vector of the row span of G (rows independent) in chunks."""
    G = np.asarray(G, dtype=np.int64)
    k = G.shape[0]
    total = field.q ** k
    if total > budget:
        raise BudgetExceeded("codeword enumeration", total, budget)
    for s in range(0, total, chunk):
        msgs = _messages(field.q, k, s, min(total, s + chunk))
        if k == 0:
            yield np.zeros((msgs.shape[0], G.shape[1]), dtype=np.int64)
        else:
            yield field.matmul(msgs, G)


def min_weight_outside(field: Field, A_gen, B_par=None, budget=DISTANCE_BUDGET):
    """Minimum weight over span(A_gen) minus ker(B_par) (minus {0} if B_par is None)."""
    A_gen = np.asarray(A_gen, dtype=np.int64)
    best = INF
    for words in iter_span(field, A_gen, budget):
        if B_par is None or np.asarray(B_par).shape[0] == 0:
            keep = np.any(words != 0, axis=1) if B_par is None else np.zeros(len(words), bool)
        else:
            keep = np.any(field.matmul(words, np.asarray(B_par).T) != 0, axis=1)
        if keep.any():
            w = int(np.count_nonzero(words[keep], axis=1).min())
            best = min(best, w)
    return best


def _as_rows(M, n):
    M = np.asarray(M, dtype=np.int64)
    if n == 0:
        # reshape(-1, 0) is ambiguous; an empty index set carries no rows of interest
        return np.zeros((M.shape[0] if M.ndim == 2 else 0, 0), dtype=np.int64)
    return M.reshape(-1, n)


class LinearCode:
    """A subspace of F^S described by a parity-check and/or generator matrix."""

    def __init__(self, field: Field, index, H=None, G=None):
        self.field = field
        self.index = tuple(index)
        if len(set(self.index)) != len(self.index):
            raise ValueError("index labels must be distinct")
        n = len(self.index)
        self._H = None if H is None else _as_rows(H, n)
        self._G = None if G is None else row_basis(field, _as_rows(G, n))
        if self._H is None and self._G is None:
            raise ValueError("need a parity-check or a generator matrix")

    # -- matrices --

    @property
    def n(self):
        return len(self.index)

    @property
    def H(self):
        if self._H is None:
            self._H = kernel_array(self.field, self._G, self.n)
        return self._H

    @property
    def G(self):
        if self._G is None:
            self._G = row_basis(self.field, kernel_array(self.field, self._H, self.n))
        return self._G

    def parity_matrix(self) -> Matrix:
        return Matrix(self.field, self.H, self.index)

    def generator_matrix(self) -> Matrix:
        return Matrix(self.field, self.G, self.index)

    @property
    def k(self) -> int:
        return self.G.shape[0]

    @property
    def dim(self) -> int:
        return self.k

    def __repr__(self):
        return f"LinearCode([{self.n},{self.k}] over {self.field!r})"

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        if self.H.shape[0] == 0:
            return True
        return not np.any(self.field.matmul(self.H, v.reshape(-1, 1)))

    def reindex(self, order) -> "LinearCode":
        """Same code with columns permuted into ``order``."""
        order = tuple(order)
        pos = {x: i for i, x in enumerate(self.index)}
        if set(order) != set(pos) or len(order) != self.n:
            raise ValueError("reindex needs a permutation of the index")
        idx = [pos[x] for x in order]
        return LinearCode(self.field, order, G=self.G[:, idx])

    def relabel(self, mapping) -> "LinearCode":
        return LinearCode(self.field, [mapping[x] for x in self.index], G=self.G)

    def __eq__(self, other):
        if not isinstance(other, LinearCode) or other.field != self.field:
            return False
        if set(other.index) != set(self.index) or other.n != self.n:
            return False
        o = other.reindex(self.index)
        return o.k == self.k and np.array_equal(o.G, self.G)

    def __hash__(self):
        return hash((self.field, self.index, self.G.tobytes()))

    def is_subcode_of(self, other: "LinearCode") -> bool:
        o = other.reindex(self.index) if other.index != self.index else other
        if o.H.shape[0] == 0 or self.k == 0:
            return True
        return not np.any(self.field.matmul(self.G, o.H.T))

    def to_dict(self):
        from .posets import label_to_json
        return {"field": self.field.to_dict(), "index": [label_to_json(x) for x in self.index],
                "generator": self.G.tolist()}


def code_from_parity(H: Matrix) -> LinearCode:
    return LinearCode(H.field, H.columns, H=H.data)


def code_from_generator(G: Matrix) -> LinearCode:
    return LinearCode(G.field, G.columns, G=G.data)


def full_code(field, index) -> LinearCode:
    index = tuple(index)
    return LinearCode(field, index, H=np.zeros((0, len(index)), dtype=np.int64))


def zero_code(field, index) -> LinearCode:
    index = tuple(index)
    return LinearCode(field, index, G=np.zeros((0, len(index)), dtype=np.int64))


def repetition_code(field, index) -> LinearCode:
    index = tuple(index)
    return LinearCode(field, index, G=np.ones((1, len(index)), dtype=np.int64))


def dual(C: LinearCode) -> LinearCode:
    return LinearCode(C.field, C.index, H=C.G, G=C.H)


def min_distance(C: LinearCode, budget=DISTANCE_BUDGET):
    """Exact minimum distance by sweeping the message space (inf for the zero code)."""
    if C.k == 0:
        return INF
    return min_weight_outside(C.field, C.G, None, budget)


def is_information_set(C: LinearCode, I) -> bool:
    I = tuple(I)
    if len(I) != C.k:
        return False
    if C.k == 0:
        return True
    return rank_array(C.field, restrict_columns(C.generator_matrix(), I).data) == C.k


def is_mds(C: LinearCode) -> bool:
    """Every k-subset of coordinates is an information set."""
    G = C.G
    return all(rank_array(C.field, G[:, list(J)]) == C.k for J in combinations(range(C.n), C.k))


def puncture(C: LinearCode, J) -> LinearCode:
    J = tuple(J)
    M = restrict_columns(C.generator_matrix(), J)
    return LinearCode(C.field, J, G=M.data)


def _kron_arrays(field, mats):
    out = np.ones((1, 1), dtype=np.int64)
    for M in mats:
        M = np.asarray(M, dtype=np.int64)
        out = field.vmul(out[:, None, :, None], M[None, :, None, :]).reshape(
            out.shape[0] * M.shape[0], out.shape[1] * M.shape[1])
    return out


def tensor_index(*indices):
    return tuple(iproduct(*indices))


def tensor(*codes: LinearCode) -> LinearCode:
    """Tensor product code on the product index set (flat tuples)."""
    if not codes:
        raise ValueError("tensor needs at least one code")
    F = codes[0].field
    for C in codes[1:]:
        if C.field != F:
            raise FieldMismatch(f"{F} vs {C.field}")
    blocks = []
    for i, C in enumerate(codes):
        if C.H.shape[0] == 0:
            continue
        mats = [np.eye(D.n, dtype=np.int64) for D in codes]
        mats[i] = C.H
        blocks.append(_kron_arrays(F, mats))
    n = int(np.prod([C.n for C in codes]))
    H = np.vstack(blocks) if blocks else np.zeros((0, n), dtype=np.int64)
    Gm = _kron_arrays(F, [C.G for C in codes]) if all(C.k for C in codes) else np.zeros((0, n), np.int64)
    return LinearCode(F, tensor_index(*[C.index for C in codes]), H=H, G=Gm)


# --- group actions on the index set -----------------------------------------

def _orbit_matrix(C: LinearCode, action: PermutationAction):
    if set(action.labels) != set(C.index):
        raise ValueError("action must permute the code's index set")
    orbits = action.orbits()
    opos = {x: j for j, orb in enumerate(orbits) for x in orb}
    R = np.zeros((C.n, len(orbits)), dtype=np.int64)
    for i, x in enumerate(C.index):
        R[i, opos[x]] = 1
    return orbits, R


def quotient_code(C: LinearCode, action: PermutationAction) -> LinearCode:
    """C/G: vectors on orbits whose repetition back to S lies in C."""
    orbits, R = _orbit_matrix(C, action)
    return LinearCode(C.field, orbits, H=C.field.matmul(C.H, R) if C.H.shape[0] else
                      np.zeros((0, len(orbits)), dtype=np.int64))


def _perm_matrix_on(C, action, g):
    P = np.zeros((C.n, C.n), dtype=np.int64)
    pos = {x: i for i, x in enumerate(C.index)}
    for x in C.index:
        P[pos[g[x]], pos[x]] = 1
    return P


def invariants_code(C: LinearCode, action: PermutationAction) -> LinearCode:
    """Codewords fixed by every group element."""
    if set(action.labels) != set(C.index):
        raise ValueError("action must permute the code's index set")
    F = C.field
    rows = [C.H]
    gens = [{action.labels[i]: action.labels[p[i]] for i in range(len(p))}
            for p in action.generators]
    for g in gens:
        P = _perm_matrix_on(C, action, g)
        rows.append(F.vsub(P, np.eye(C.n, dtype=np.int64)))
    return LinearCode(F, C.index, H=np.vstack(rows))


def coinvariants_code(C: LinearCode, action: PermutationAction) -> LinearCode:
    """Image of C under the orbit-sum map."""
    orbits, R = _orbit_matrix(C, action)
    G = C.field.matmul(C.G, R) if C.k else np.zeros((0, len(orbits)), dtype=np.int64)
    return LinearCode(C.field, orbits, G=G)


def is_invariant(C: LinearCode, action: PermutationAction) -> bool:
    gens = [{action.labels[i]: action.labels[p[i]] for i in range(len(p))}
            for p in action.generators]
    for g in gens:
        P = _perm_matrix_on(C, action, g)
        moved = C.field.matmul(C.G, P.T) if C.k else C.G
        if C.k and C.H.shape[0] and np.any(C.field.matmul(moved, C.H.T)):
            return False
    return True


def diagonal_action(actX: PermutationAction, actY: PermutationAction, index) -> PermutationAction:
    """g.(x, y) = (g.x, g.y) with generators paired by position."""
    if len(actX.generators) != len(actY.generators):
        raise ValueError("actions must list corresponding generators")
    gens = []
    for gx, gy in zip(actX.generators, actY.generators):
        mx = {actX.labels[i]: actX.labels[gx[i]] for i in range(len(gx))}
        my = {actY.labels[i]: actY.labels[gy[i]] for i in range(len(gy))}
        gens.append({(x, y): (mx[x], my[y]) for x, y in index})
    return PermutationAction(index, gens)


def balanced_product_codes(A: LinearCode, actA: PermutationAction, B: LinearCode,
                           actB: PermutationAction) -> LinearCode:
    """(A tensor B)/G for the diagonal action."""
    if not is_invariant(A, actA) or not is_invariant(B, actB):
        raise ValueError("balanced product needs G-invariant codes")
    T = tensor(A, B)
    return quotient_code(T, diagonal_action(actA, actB, T.index))


# --- group algebra -----------------------------------------------------------

class GroupAlgebraMatrix:
    """Matrix over F[G]; coeffs[i, j, g] is the coefficient of g in entry (i, j)."""

    def __init__(self, group: FiniteGroup, field: Field, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.ndim != 3 or coeffs.shape[2] != group.order:
            raise ValueError("coefficient array must have shape (m, n, |G|)")
        if coeffs.size and (coeffs.min() < 0 or coeffs.max() >= field.q):
            raise ValueError("coefficients outside the field")
        self.group = group
        self.field = field
        self.coeffs = coeffs

    @property
    def shape(self):
        return self.coeffs.shape[:2]

    @classmethod
    def from_entries(cls, group, field, entries):
        """entries: nested lists of dicts {group element: coefficient}."""
        m = len(entries)
        n = len(entries[0]) if m else 0
        c = np.zeros((m, n, group.order), dtype=np.int64)
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                for g, a in e.items():
                    c[i, j, int(g)] = field.add(int(c[i, j, int(g)]), field.from_int(a) if field.t == 1 else int(a))
        return cls(group, field, c)

    @classmethod
    def from_field_matrix(cls, group, field, M):
        M = np.asarray(M, dtype=np.int64)
        c = np.zeros(M.shape + (group.order,), dtype=np.int64)
        c[:, :, 0] = M
        return cls(group, field, c)

    def transpose(self) -> "GroupAlgebraMatrix":
        return GroupAlgebraMatrix(self.group, self.field, self.coeffs.transpose(1, 0, 2).copy())

    def antipode(self) -> "GroupAlgebraMatrix":
        """Entrywise g -> g^-1, no transposition."""
        inv = [self.group.inv(g) for g in range(self.group.order)]
        c = np.zeros_like(self.coeffs)
        c[:, :, inv] = self.coeffs
        return GroupAlgebraMatrix(self.group, self.field, c)

    def conjugate_transpose(self):
        return self.antipode().transpose()

    def augmentation(self) -> Matrix:
        """Entrywise sum of coefficients."""
        F = self.field
        out = np.zeros(self.shape, dtype=np.int64)
        for g in range(self.group.order):
            out = F.vadd(out, self.coeffs[:, :, g])
        return Matrix(F, out)

    def __eq__(self, other):
        return (isinstance(other, GroupAlgebraMatrix) and self.group == other.group
                and self.field == other.field and np.array_equal(self.coeffs, other.coeffs))


def left_mult_matrix(group: FiniteGroup, field: Field, a) -> np.ndarray:
    """L[h, g] = a_{h g^-1}: column g is the coefficient vector of a*g."""
    n = group.order
    L = np.zeros((n, n), dtype=np.int64)
    for g in range(n):
        for x in range(n):
            L[group.mul(x, g), g] = a[x]
    return L


def right_mult_matrix(group: FiniteGroup, field: Field, b) -> np.ndarray:
    """R[h, g] = b_{g^-1 h}: column g is the coefficient vector of g*b."""
    n = group.order
    R = np.zeros((n, n), dtype=np.int64)
    for g in range(n):
        for x in range(n):
            R[group.mul(g, x), g] = b[x]
    return R


def group_algebra_lift(M: GroupAlgebraMatrix) -> Matrix:
    """Expand each entry a into the |G| x |G| block whose row g holds g*a.

    Rows and columns are ordered (index, group element), row-major. The lift
    is multiplicative: lift(A) lift(B) = lift(AB).
    """
    G, F = M.group, M.field
    m, n = M.shape
    k = G.order
    out = np.zeros((m * k, n * k), dtype=np.int64)
    for i in range(m):
        for j in range(n):
            a = M.coeffs[i, j]
            if not a.any():
                continue
            # block[g, h] = a_{g^-1 h}
            out[i * k:(i + 1) * k, j * k:(j + 1) * k] = right_mult_matrix(G, F, a).T
    return Matrix(F, out, [(j, h) for j in range(n) for h in range(k)])


def ga_matmul(A: GroupAlgebraMatrix, B: GroupAlgebraMatrix) -> GroupAlgebraMatrix:
    G, F = A.group, A.field
    m, n = A.shape
    n2, p = B.shape
    if n != n2:
        raise ValueError("shape mismatch")
    out = np.zeros((m, p, G.order), dtype=np.int64)
    for i in range(m):
        for j in range(p):
            acc = out[i, j]
            for l in range(n):
                a, b = A.coeffs[i, l], B.coeffs[l, j]
                for x in np.nonzero(a)[0]:
                    for y in np.nonzero(b)[0]:
                        z = G.mul(int(x), int(y))
                        acc[z] = F.add(int(acc[z]), F.mul(int(a[x]), int(b[y])))
    return GroupAlgebraMatrix(G, F, out)


class CssCode:
    """Quotient A/B of nested codes on a common index set."""

    def __init__(self, A: LinearCode, B: LinearCode, check=True):
        if A.field != B.field:
            raise FieldMismatch("CSS parts over different fields")
        if tuple(A.index) != tuple(B.index):
            B = B.reindex(A.index)
        if check and not B.is_subcode_of(A):
            raise ValueError("B is not contained in A")
        self.A = A
        self.B = B
        self.field = A.field
        self.index = A.index
        self._dx = self._dz = None

    @property
    def n(self):
        return len(self.index)

    @property
    def k(self):
        return self.A.k - self.B.k

    def d_X(self, budget=DISTANCE_BUDGET):
        if self._dx is None:
            self._dx = INF if self.k == 0 else min_weight_outside(self.field, self.A.G, self.B.H, budget)
        return self._dx

    def d_Z(self, budget=DISTANCE_BUDGET):
        if self._dz is None:
            # B^perp minus A^perp: enumerate span(H_B), drop the words lying in span(H_A)
            self._dz = INF if self.k == 0 else min_weight_outside(
                self.field, row_basis(self.field, self.B.H), self.A.G, budget)
        return self._dz

    def distance(self, budget=DISTANCE_BUDGET):
        return min(self.d_X(budget), self.d_Z(budget))

    def params(self, with_distance=True, budget=DISTANCE_BUDGET):
        out = {"n": self.n, "k": self.k}
        if with_distance:
            out["d_X"] = self.d_X(budget)
            out["d_Z"] = self.d_Z(budget)
            out["d"] = min(out["d_X"], out["d_Z"])
        return out

    def __repr__(self):
        return f"CssCode(n={self.n}, k={self.k})"


def lp_code(A: GroupAlgebraMatrix, B: GroupAlgebraMatrix, transpose_b: bool = False) -> CssCode:
    """Pairs (u, v) with A u = v B^T modulo (w B^T, A w).

    With ``transpose_b`` the second matrix enters untransposed: A u = v B.
    Transposition here is plain (no antipode).
    """
    if A.group != B.group or A.field != B.field:
        raise FieldMismatch("LP inputs must share group and field")
    if transpose_b:
        B = B.transpose()
    G, F = A.group, A.field
    k = G.order
    ma, na = A.shape
    mb, nb = B.shape
    nu, nv, nw = na * mb, ma * nb, na * nb
    ncols = (nu + nv) * k

    def u_col(kk, j, g):
        return ((kk * mb + j) * k) + g

    def v_col(i, l, g):
        return (nu + i * nb + l) * k + g

    L = {}
    Rm = {}

    def lm(a):
        key = a.tobytes()
        if key not in L:
            L[key] = left_mult_matrix(G, F, a)
        return L[key]

    def rm(b):
        key = b.tobytes()
        if key not in Rm:
            Rm[key] = right_mult_matrix(G, F, b)
        return Rm[key]

    # parity checks of A_css: (A u - v B^T)_{ij}, one block of k rows per (i, j)
    H = np.zeros((ma * mb * k, ncols), dtype=np.int64)
    for i in range(ma):
        for j in range(mb):
            r0 = (i * mb + j) * k
            for kk in range(na):
                a = A.coeffs[i, kk]
                if a.any():
                    H[r0:r0 + k, u_col(kk, j, 0):u_col(kk, j, 0) + k] = lm(a)
            for l in range(nb):
                b = B.coeffs[j, l]
                if b.any():
                    blk = F.vneg(rm(b))
                    c0 = v_col(i, l, 0)
                    H[r0:r0 + k, c0:c0 + k] = F.vadd(H[r0:r0 + k, c0:c0 + k], blk)
    # degenerate vectors: w -> (w B^T, A w), one generator per coordinate of w
    Gd = np.zeros((nw * k, ncols), dtype=np.int64)
    for kk in range(na):
        for l in range(nb):
            for g in range(k):
                row = (kk * nb + l) * k + g
                for j in range(mb):
                    b = B.coeffs[j, l]
                    if b.any():
                        Gd[row, u_col(kk, j, 0):u_col(kk, j, 0) + k] = rm(b)[:, g]
                for i in range(ma):
                    a = A.coeffs[i, kk]
                    if a.any():
                        Gd[row, v_col(i, l, 0):v_col(i, l, 0) + k] = lm(a)[:, g]
    index = [("u", kk, j, g) for kk in range(na) for j in range(mb) for g in range(k)] + \
            [("v", i, l, g) for i in range(ma) for l in range(nb) for g in range(k)]
    Acode = LinearCode(F, index, H=H)
    Bcode = LinearCode(F, index, G=Gd)
    return CssCode(Acode, Bcode)


def hp_code(A: Matrix, B: Matrix, transpose_b: bool = False) -> CssCode:
    """Hypergraph product: the lifted product over the trivial group."""
    if A.field != B.field:
        raise FieldMismatch("HP inputs over different fields")
    T = FiniteGroup([[0]])
    return lp_code(GroupAlgebraMatrix.from_field_matrix(T, A.field, A.data),
                   GroupAlgebraMatrix.from_field_matrix(T, B.field, B.data), transpose_b)


def gb_code(group: FiniteGroup, field: Field, a, b) -> CssCode:
    """Generalized bicycle code LP(a, b) for group-algebra elements given as coefficient vectors."""
    a = np.asarray(a, dtype=np.int64).reshape(1, 1, group.order)
    b = np.asarray(b, dtype=np.int64).reshape(1, 1, group.order)
    return lp_code(GroupAlgebraMatrix(group, field, a), GroupAlgebraMatrix(group, field, b))


def zemor_parity(group: FiniteGroup, field: Field, S, h) -> GroupAlgebraMatrix:
    """2m x Delta matrix: top block h, bottom block h with column j scaled by s_j."""
    h = np.asarray(h, dtype=np.int64)
    m, delta = h.shape
    if len(S) != delta:
        raise ValueError(f"{len(S)} generators for {delta} columns")
    c = np.zeros((2 * m, delta, group.order), dtype=np.int64)
    for i in range(m):
        for j in range(delta):
            c[i, j, 0] = h[i, j]
            c[m + i, j, int(S[j])] = h[i, j]
    return GroupAlgebraMatrix(group, field, c)
