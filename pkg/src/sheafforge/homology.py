"""Cochain complexes of sheaf codes in characteristic 2 and the CSS codes they carry.

C^i is the direct sum of the local codes F_sigma over sigma of grade i, each
written in a chosen basis. The coboundary sends c_sigma to the sum of its
restrictions to the elements covering sigma. No signs are needed in
characteristic 2.
"""

from __future__ import annotations

import numpy as np

from .codes import CssCode, LinearCode, dual
from .matrices import inverse_array, rank_array, rref_array
from .sheaves import SheafCode, dual_sheaf_T, stack_parity


def check_cell_poset(X):
    """Every interval of length two must contain exactly two middle elements."""
    for s in X.elements:
        g = X.grade(s)
        for t in X.elements:
            if X.grade(t) == g + 2 and X.leq(s, t):
                mids = X.between(s, t)
                if len(mids) != 2:
                    raise ValueError(f"interval [{s!r}, {t!r}] has {len(mids)} middle elements")


class CochainComplex:
    """Coboundary matrices of a sheaf code over a field of characteristic 2.

    ``delta(i)`` maps column vectors of C^i to C^{i+1}.
    """

    def __init__(self, F: SheafCode, basis_mode: str = "intrinsic", check=True):
        if F.field.p != 2:
            raise ValueError("cochain complexes are only supported in characteristic 2")
        if basis_mode not in ("intrinsic", "global_generator"):
            raise ValueError(f"unknown basis mode {basis_mode!r}")
        if check:
            check_cell_poset(F.X)
        self.F = F
        self.field = F.field
        self.basis_mode = basis_mode
        self.X = F.X
        self._basis = {}
        glob = F.global_code() if basis_mode == "global_generator" else None
        for s in self.X.elements:
            if basis_mode == "intrinsic":
                B = F.local[s].G
            else:
                pos = {x: i for i, x in enumerate(glob.index)}
                Gs = glob.G[:, [pos[x] for x in self.X.X(s)]]
                B = _first_independent_rows(self.field, Gs)
            if B.shape[0]:
                _, piv = rref_array(self.field, B)
                inv = inverse_array(self.field, B[:, piv])
            else:
                piv, inv = [], np.zeros((0, 0), dtype=np.int64)
            self._basis[s] = (B, piv, inv)
        self._delta = {}

    def grades(self):
        return self.X.grades()

    def basis(self, s):
        return self._basis[s][0]

    def local_dim(self, s) -> int:
        return self._basis[s][0].shape[0]

    def cells(self, i):
        return self.X.level(i)

    def dim(self, i) -> int:
        return sum(self.local_dim(s) for s in self.cells(i))

    def labels(self, i):
        return [(s, j) for s in self.cells(i) for j in range(self.local_dim(s))]

    def coords(self, s, v):
        """Coordinates of vectors (rows of v) on X_s in the basis at s."""
        B, piv, inv = self._basis[s]
        v = np.asarray(v, dtype=np.int64).reshape(-1, B.shape[1])
        if not piv:
            return np.zeros((v.shape[0], 0), dtype=np.int64)
        c = self.field.matmul(v[:, piv], inv)
        if np.any(self.field.matmul(c, B) != v):
            raise ValueError(f"vector does not lie in the local space at {s!r}")
        return c

    def delta(self, i):
        if i in self._delta:
            return self._delta[i]
        X = self.X
        src, dst = self.cells(i), self.cells(i + 1)
        col0, row0 = {}, {}
        off = 0
        for s in src:
            col0[s] = off
            off += self.local_dim(s)
        ncols = off
        off = 0
        for t in dst:
            row0[t] = off
            off += self.local_dim(t)
        D = np.zeros((off, ncols), dtype=np.int64)
        dst_set = set(dst)
        for s in src:
            B = self.basis(s)
            if B.shape[0] == 0:
                continue
            xs = X.X(s)
            for t in X.upper_covers(s):
                if t not in dst_set or self.local_dim(t) == 0:
                    continue
                pos = [xs.index(x) for x in X.X(t)]
                c = self.coords(t, B[:, pos])
                blk = D[row0[t]:row0[t] + c.shape[1], col0[s]:col0[s] + c.shape[0]]
                D[row0[t]:row0[t] + c.shape[1], col0[s]:col0[s] + c.shape[0]] = \
                    self.field.vadd(blk, c.T)
        self._delta[i] = D
        return D

    def rank_delta(self, i) -> int:
        D = self.delta(i)
        return rank_array(self.field, D) if D.size else 0


def _first_independent_rows(field, G):
    rows = []
    r = 0
    for i in range(G.shape[0]):
        cand = rows + [G[i]]
        rk = rank_array(field, np.array(cand))
        if rk > r:
            rows.append(G[i])
            r = rk
    if not rows:
        return np.zeros((0, G.shape[1]), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def cochain_complex(F: SheafCode, basis_mode: str = "intrinsic") -> CochainComplex:
    return CochainComplex(F, basis_mode)


def cohomology_dim(K: CochainComplex, i: int) -> int:
    return K.dim(i) - K.rank_delta(i) - K.rank_delta(i - 1)


def css_from_cohomology(K: CochainComplex, i: int) -> CssCode:
    """H^i as the CSS code ker(delta_i) / im(delta_{i-1}) on the coordinates of C^i."""
    labels = K.labels(i)
    F = K.field
    Di = K.delta(i)
    Dprev = K.delta(i - 1)
    A = LinearCode(F, labels, H=Di if Di.shape[0] else np.zeros((0, len(labels)), dtype=np.int64))
    B = LinearCode(F, labels, G=Dprev.T if Dprev.size else np.zeros((0, len(labels)), dtype=np.int64))
    return CssCode(A, B)


def three_coloring(X):
    """A proper 3-colouring of the vertices (grade-0 elements) of a simplicial complex, or None."""
    verts = list(X.level(0))
    adj = {v: set() for v in verts}
    for e in X.level(1):
        lows = X.lower_covers(e)
        for a in lows:
            for b in lows:
                if a != b:
                    adj[a].add(b)
    color = {}

    def go(k):
        if k == len(verts):
            return True
        v = verts[k]
        for c in range(3):
            if all(color.get(u) != c for u in adj[v]):
                color[v] = c
                if go(k + 1):
                    return True
                del color[v]
        return False

    return dict(color) if go(0) else None


def tanner_color_code(F: SheafCode, dual_sheaf: SheafCode = None) -> CssCode:
    """Q(F) = C_X / C_Z^perp with C_X^perp spanned by the F_v and C_Z^perp by the dual F_v.

    Orthogonality of the two stabilizer spaces is checked explicitly.
    """
    X = F.X
    if X.dim != 2:
        raise ValueError("Tanner color codes need a 2-dimensional complex")
    if three_coloring(X) is None:
        raise ValueError("complex is not 3-partite")
    T = dual_sheaf if dual_sheaf is not None else dual_sheaf_T(F)
    field = F.field
    cols = X.maximal

    def span(sheaf):
        blocks = []
        for v in X.level(0):
            C = sheaf.local[v]
            if C.k:
                M = np.zeros((C.k, len(cols)), dtype=np.int64)
                pos = {x: i for i, x in enumerate(cols)}
                M[:, [pos[x] for x in C.index]] = C.G
                blocks.append(M)
        return np.vstack(blocks) if blocks else np.zeros((0, len(cols)), dtype=np.int64)

    SX = span(F)
    SZ = span(T)
    if SX.size and SZ.size and np.any(field.matmul(SX, SZ.T)):
        raise ValueError("stabilizers are not orthogonal")
    A = dual(LinearCode(field, cols, G=SX))
    B = LinearCode(field, cols, G=SZ)
    return CssCode(A, B)


def euler_characteristic(K: CochainComplex):
    """(sum (-1)^i dim C^i, sum (-1)^i dim H^i) over all grades."""
    chi_c = chi_h = 0
    for i in K.grades():
        sgn = -1 if i % 2 else 1
        chi_c += sgn * K.dim(i)
        chi_h += sgn * cohomology_dim(K, i)
    return chi_c, chi_h
