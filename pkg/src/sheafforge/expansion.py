"""Block norms on cochains, coboundary expansion and the Cheeger constant.

All minimisations are exhaustive: C^i is enumerated in full and the coset
distance |c + B^i| is the minimum block norm over each coset, so every value
is an exact rational.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .codes import CHUNK, _messages, iter_span
from .errors import BudgetExceeded
from .homology import CochainComplex
from .matrices import kernel_array, row_basis
from .sheaves import SheafCode, dual_sheaf_T

EXPANSION_BUDGET = 1 << 20
CHEEGER_MAX_VERTICES = 20


class CochainVector:
    """A cochain of degree i: one local codeword c_sigma in F_sigma per sigma in X(i).

    Stored as coordinates in the complex's bases; ``from_local`` checks membership.
    """

    def __init__(self, K: CochainComplex, degree: int, coords):
        self.K = K
        self.degree = degree
        coords = np.asarray(coords, dtype=np.int64).reshape(-1)
        if coords.size != K.dim(degree):
            raise ValueError(f"expected {K.dim(degree)} coordinates, got {coords.size}")
        self.coords = coords

    @classmethod
    def from_local(cls, K: CochainComplex, degree: int, words: dict):
        parts = []
        for s in K.cells(degree):
            w = words.get(s)
            if w is None:
                parts.append(np.zeros(K.local_dim(s), dtype=np.int64))
            else:
                parts.append(K.coords(s, w)[0])
        coords = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        return cls(K, degree, coords)

    def blocks(self):
        out = {}
        off = 0
        for s in self.K.cells(self.degree):
            k = self.K.local_dim(s)
            out[s] = self.coords[off:off + k]
            off += k
        return out

    def local(self, s):
        """The codeword c_sigma on X_sigma."""
        c = self.blocks()[s]
        return self.K.field.matmul(c[None, :], self.K.basis(s))[0] if c.size else \
            np.zeros(len(self.K.X.X(s)), dtype=np.int64)

    def support(self):
        return [s for s, c in self.blocks().items() if np.any(c)]


def level_weights(X, i):
    """Integer weights |X_sigma| for sigma in X(i) and their total."""
    w = np.array([len(X.X(s)) for s in X.level(i)], dtype=np.int64)
    return w, int(w.sum())


def block_norm(c: CochainVector) -> int:
    return len(c.support())


def normalized_norm(c: CochainVector) -> Fraction:
    X = c.K.X
    total = sum(len(X.X(s)) for s in X.level(c.degree))
    if total == 0:
        return Fraction(0)
    return Fraction(sum(len(X.X(s)) for s in c.support()), total)


@dataclass
class ExpansionResult:
    degree: int
    value: object
    witness: tuple = None
    normalized: bool = False
    small_set: object = None
    coboundary_norm: object = None
    coset_norm: object = None

    @property
    def is_infinite(self):
        return self.value == math.inf

    def to_dict(self):
        def r(x):
            if x is None:
                return None
            if x == math.inf:
                return "inf"
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else str(x)
        return {
            "degree": self.degree,
            "value": r(self.value),
            "witness": list(self.witness) if self.witness is not None else None,
            "normalized": self.normalized,
            "small_set": r(self.small_set),
            "coboundary_norm": r(self.coboundary_norm),
            "coset_norm": r(self.coset_norm),
        }


def _complex(F) -> CochainComplex:
    return F if isinstance(F, CochainComplex) else CochainComplex(F)


def _block_slices(K, i):
    out = []
    off = 0
    for s in K.cells(i):
        k = K.local_dim(s)
        out.append((off, off + k))
        off += k
    return out


def _weighted_support(vectors, slices, weights):
    if not slices:
        return np.zeros(vectors.shape[0], dtype=np.int64)
    nz = np.zeros((vectors.shape[0], len(slices)), dtype=bool)
    for j, (a, b) in enumerate(slices):
        if b > a:
            nz[:, j] = np.any(vectors[:, a:b] != 0, axis=1)
    return nz.astype(np.int64) @ weights


def _key(field, vectors, M):
    if M.shape[0] == 0:
        return np.zeros(vectors.shape[0], dtype=np.int64)
    s = field.matmul(vectors, M.T)
    powers = field.q ** np.arange(M.shape[0], dtype=np.int64)
    return s @ powers


def eta(F, i: int, normalized: bool = False, small_set_a=None,
        budget: int = EXPANSION_BUDGET, jobs: int = 1) -> ExpansionResult:
    """i-th coboundary expansion min |delta c| / |c + B^i| over c outside B^i.

    With ``small_set_a`` only cochains with norm at most a are considered.
    Ties are broken by the lexicographically first coordinate vector.
    """
    K = _complex(F)
    field = K.field
    q = field.q
    X = K.X
    d = K.dim(i)
    empty = ExpansionResult(i, math.inf, None, normalized, small_set_a)
    if d == 0:
        return empty
    total = q ** d
    if total > budget:
        raise BudgetExceeded(f"cochain enumeration in degree {i}", total, budget)
    Dprev = K.delta(i - 1)
    Bgen = row_basis(field, Dprev.T) if Dprev.size else np.zeros((0, d), dtype=np.int64)
    if q ** Bgen.shape[0] > budget:
        raise BudgetExceeded(f"coboundary enumeration in degree {i}", q ** Bgen.shape[0], budget)
    M = kernel_array(field, Bgen, d) if Bgen.shape[0] else np.eye(d, dtype=np.int64)
    D = K.delta(i)

    sl_i, sl_n = _block_slices(K, i), _block_slices(K, i + 1)
    if normalized:
        w_i, S_i = level_weights(X, i)
        w_n, S_n = level_weights(X, i + 1)
    else:
        w_i, S_i = np.ones(len(sl_i), dtype=np.int64), 1
        w_n, S_n = np.ones(len(sl_n), dtype=np.int64), 1

    def work(start):
        c = _messages(q, d, start, min(total, start + CHUNK))
        nc = _weighted_support(c, sl_i, w_i)
        if D.shape[0]:
            nd = _weighted_support(field.matmul(c, D.T), sl_n, w_n)
        else:
            nd = np.zeros(c.shape[0], dtype=np.int64)
        return nc, nd, _key(field, c, M)

    starts = range(0, total, CHUNK)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    norm_c = np.concatenate([p[0] for p in parts])
    norm_d = np.concatenate([p[1] for p in parts])
    keys = np.concatenate([p[2] for p in parts])

    uniq, inv = np.unique(keys, return_inverse=True)
    coset_min = np.full(uniq.size, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(coset_min, inv, norm_c)
    cmin = coset_min[inv]

    mask = keys != 0
    if small_set_a is not None:
        a = Fraction(small_set_a)
        # norm_c / S_i <= a
        mask &= norm_c * a.denominator <= a.numerator * S_i
    if not mask.any():
        return empty
    # ratio (nd / S_n) / (cmin / S_i); integer operands keep float division exact enough
    ratio = np.full(total, np.inf)
    ratio[mask] = (norm_d[mask] * S_i) / (cmin[mask] * S_n)
    j = int(np.argmin(ratio))
    witness = tuple(int(x) for x in _messages(q, d, j, j + 1)[0])
    num = Fraction(int(norm_d[j]), S_n)
    den = Fraction(int(cmin[j]), S_i)
    res = ExpansionResult(i, num / den, witness, normalized, small_set_a, num, den)
    _recheck(K, res, Bgen, budget)
    return res


def _recheck(K, res: ExpansionResult, Bgen, budget):
    """Recompute the ratio at the witness from local codewords and an explicit coset sweep."""
    X = K.X
    i = res.degree
    c = CochainVector(K, i, res.witness)
    images = {}
    for s in c.support():
        cs = c.local(s)
        xs = X.X(s)
        for t in X.upper_covers(s):
            if X.grade(t) != i + 1:
                continue
            part = cs[[xs.index(x) for x in X.X(t)]]
            prev = images.get(t)
            images[t] = part if prev is None else K.field.vadd(prev, part)
    dsupp = [t for t, v in images.items() if np.any(v)]
    sl = _block_slices(K, i)
    if res.normalized:
        w, S = level_weights(X, i)
    else:
        w, S = np.ones(len(sl), dtype=np.int64), 1
    best = min(int(_weighted_support(K.field.vadd(words, c.coords[None, :]), sl, w).min())
               for words in iter_span(K.field, Bgen, budget))
    best = Fraction(best, S)
    if res.normalized:
        dval = Fraction(sum(len(X.X(t)) for t in dsupp), level_weights(X, i + 1)[1] or 1)
    else:
        dval = Fraction(len(dsupp))
    if dval != res.coboundary_norm or best != res.coset_norm:
        raise RuntimeError(f"witness recomputation disagrees in degree {i}")


def expansion_degrees(X):
    """Degrees i with both X(i) and X(i+1) nonempty."""
    gs = set(X.grades())
    return [i for i in sorted(gs) if i + 1 in gs]


def eta_all(F, normalized: bool = False, budget: int = EXPANSION_BUDGET, jobs: int = 1):
    K = _complex(F)
    return {i: eta(K, i, normalized, None, budget, jobs) for i in expansion_degrees(K.X)}


def eta_min(F, normalized: bool = False, budget: int = EXPANSION_BUDGET, jobs: int = 1):
    """min over degrees of eta^i; inf when every domain is empty."""
    vals = [r.value for r in eta_all(F, normalized, budget, jobs).values()]
    return min(vals, default=math.inf)


def two_way_check(F: SheafCode, threshold, normalized: bool = False,
                  budget: int = EXPANSION_BUDGET) -> bool:
    """Both F and its dual sheaf are threshold-expanders."""
    t = Fraction(threshold)
    if eta_min(F, normalized, budget) < t:
        return False
    return eta_min(dual_sheaf_T(F), normalized, budget) >= t


def cheeger(vertices, edges, max_vertices: int = CHEEGER_MAX_VERTICES) -> Fraction:
    """min over nonempty proper S of |E(S, S^c)| / min(|S|, |S^c|), exhaustively."""
    vertices = list(vertices)
    n = len(vertices)
    if n > max_vertices:
        raise BudgetExceeded("cheeger subsets", 2 ** n, 2 ** max_vertices)
    if n < 2:
        raise ValueError("Cheeger constant needs at least two vertices")
    pos = {v: j for j, v in enumerate(vertices)}
    E = [(pos[u], pos[v]) for u, v in edges]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in E:
        parent[find(u)] = find(v)
    if len({find(x) for x in range(n)}) > 1:
        raise ValueError("graph is disconnected")
    best = None
    for size in range(1, n // 2 + 1):
        for S in combinations(range(n), size):
            m = 0
            for x in S:
                m |= 1 << x
            cut = sum(1 for u, v in E if (m >> u & 1) != (m >> v & 1))
            val = Fraction(cut, size)
            if best is None or val < best:
                best = val
    return best
