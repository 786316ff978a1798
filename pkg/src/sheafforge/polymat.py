"""Matrices over F_p[v]: evaluation, rank over F_p(v), kernel generators.

Polynomials are sparse elements of a sympy polynomial ring over GF(p);
variables carry user labels and are renamed ``x0, x1, ...`` internally.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np
from sympy import GF
from sympy.polys.rings import ring

from .errors import BudgetExceeded
from .fields import Field, get_field
from .matrices import Matrix, rank_array, rref_array

MINOR_BUDGET = 10**5


class PolyRing:
    """F_p[v] for an ordered tuple of variable labels."""

    def __init__(self, p: int, variables):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("variable labels must be distinct")
        self.p = int(p)
        self.variables = variables
        self.index = {v: i for i, v in enumerate(variables)}
        names = [f"x{i}" for i in range(len(variables))] or ["x0"]
        self.R, *gens = ring(names, GF(self.p))
        self.gens = gens[: len(variables)]

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.p, self.variables) == (other.p, other.variables)

    def __hash__(self):
        return hash((self.p, self.variables))

    def __repr__(self):
        return f"PolyRing(F_{self.p}, {len(self.variables)} vars)"

    def var(self, label):
        return self.gens[self.index[label]]

    def const(self, c):
        return self.R(int(c) % self.p)

    @property
    def zero(self):
        return self.R.zero

    @property
    def one(self):
        return self.R.one

    def coeff_int(self, c) -> int:
        return int(c) % self.p

    def poly_to_json(self, f):
        out = []
        for monom, c in sorted(f.terms()):
            exps = {self.variables[i]: int(e) for i, e in enumerate(monom) if e and i < len(self.variables)}
            out.append({"exponents": exps, "coeff": self.coeff_int(c)})
        return out

    def poly_from_json(self, terms):
        f = self.R.zero
        for t in terms:
            m = self.const(t["coeff"])
            for v, e in t.get("exponents", {}).items():
                m = m * self.var(v) ** int(e)
            f = f + m
        return f


def degree(f) -> int:
    if f == 0:
        return 0
    return max(sum(m) for m in f.monoms())


class PolyMatrix:
    """An m x |B| matrix with entries in a PolyRing and labelled columns."""

    def __init__(self, pring: PolyRing, entries, columns=None):
        entries = [list(r) for r in entries]
        n = len(entries[0]) if entries else (len(columns) if columns is not None else 0)
        if any(len(r) != n for r in entries):
            raise ValueError("ragged polynomial matrix")
        if columns is None:
            columns = tuple(range(n))
        columns = tuple(columns)
        if len(columns) != n:
            raise ValueError("column label count mismatch")
        R = pring.R
        self.ring = pring
        self.entries = [[e if getattr(e, "ring", None) is R else R(e) for e in r] for r in entries]
        self.columns = columns

    @property
    def shape(self):
        return (len(self.entries), len(self.columns))

    def degree(self) -> int:
        return max((degree(e) for r in self.entries for e in r), default=0)

    def variables_used(self):
        used = set()
        for r in self.entries:
            for e in r:
                for m in e.monoms():
                    used.update(i for i, x in enumerate(m) if x)
        return {self.ring.variables[i] for i in used}

    def is_zero(self):
        return all(e == 0 for r in self.entries for e in r)

    def transpose_entries(self):
        return [list(c) for c in zip(*self.entries)]

    def matmul_T(self, other: "PolyMatrix"):
        """self @ other^T as nested lists (columns matched positionally)."""
        zero = self.ring.zero
        out = []
        for a in self.entries:
            row = []
            for b in other.entries:
                s = zero
                for x, y in zip(a, b):
                    if x and y:
                        s = s + x * y
                row.append(s)
            out.append(row)
        return out

    def to_dict(self):
        return {"variables": list(self.ring.variables),
                "rows": [[self.ring.poly_to_json(e) for e in r] for r in self.entries],
                "columns": list(self.columns)}

    @classmethod
    def from_constant(cls, pring: PolyRing, M: Matrix):
        if M.field.t != 1 or M.field.p != pring.p:
            raise ValueError("constant matrix must be over the prime field")
        return cls(pring, [[pring.const(x) for x in r] for r in M.data.tolist()], M.columns)


# --- evaluation --------------------------------------------------------------

class Evaluator:
    """Evaluate polynomials of one ring at a fixed point of GF(p^t)."""

    def __init__(self, pring: PolyRing, field: Field, point):
        if field.p != pring.p:
            raise ValueError(f"characteristic mismatch: F_{pring.p}[v] vs {field}")
        self.field = field
        self.point = point
        self._pow = {}

    def _power(self, i, e):
        key = (i, e)
        if key not in self._pow:
            self._pow[key] = self.field.pow(int(self.point[i]), e)
        return self._pow[key]

    def __call__(self, f) -> int:
        F = self.field
        acc = 0
        for monom, c in f.terms():
            term = int(c) % F.p
            for i, e in enumerate(monom):
                if e and term:
                    term = F.mul(term, self._power(i, e))
            acc = F.add(acc, term)
        return acc


def _point_from_assignment(pring, field, assignment, needed):
    point = [0] * len(pring.variables)
    for v in needed:
        if v not in assignment:
            raise KeyError(f"no value for variable {v!r}")
    for v, val in assignment.items():
        if v in pring.index:
            x = val.value if hasattr(val, "value") else int(val)
            if getattr(val, "field", field) != field:
                raise ValueError("assignment value from a different field")
            point[pring.index[v]] = field.check(x)
    return point


def instantiate(M: PolyMatrix, field: Field, assignment) -> Matrix:
    """Substitute values (dict label -> encoding or FieldElement) into M."""
    if field.p != M.ring.p:
        raise ValueError(f"characteristic mismatch: F_{M.ring.p}[v] vs {field}")
    point = _point_from_assignment(M.ring, field, assignment, M.variables_used())
    return instantiate_at(M, field, point)


def instantiate_at(M: PolyMatrix, field: Field, point) -> Matrix:
    ev = Evaluator(M.ring, field, point)
    data = np.array([[ev(e) for e in r] for r in M.entries], dtype=np.int64).reshape(M.shape)
    return Matrix(field, data, M.columns)


def random_point(pring: PolyRing, field: Field, rng):
    return [int(x) for x in field.random(rng, len(pring.variables))]


def trial_rng(seed: int, trial: int):
    return np.random.default_rng([int(seed), int(trial)])


# --- exact rank over F_p(v) --------------------------------------------------

def _bareiss(rows, ncols, one, want_det=False):
    """Fraction-free elimination; returns (rank, last pivot, sign)."""
    A = [list(r) for r in rows]
    m = len(A)
    prev = one
    r = 0
    sign = 1
    for c in range(ncols):
        if r == m:
            break
        best = None
        for i in range(r, m):
            if A[i][c]:
                size = len(A[i][c])
                if best is None or size < best[1]:
                    best = (i, size)
        if best is None:
            if want_det:
                return r, A[r - 1][ncols - 1] if r else one, 0
            continue
        i = best[0]
        if i != r:
            A[r], A[i] = A[i], A[r]
            sign = -sign
        piv = A[r][c]
        for i in range(r + 1, m):
            a_ic = A[i][c]
            row_i, row_r = A[i], A[r]
            for j in range(c + 1, ncols):
                val = piv * row_i[j]
                if a_ic and row_r[j]:
                    val = val - a_ic * row_r[j]
                row_i[j] = val.exquo(prev) if val else val
            row_i[c] = piv.ring.zero
        prev = piv
        r += 1
    return r, prev, sign


def bareiss_rank(M: PolyMatrix) -> int:
    """Rank over F_p(v); duplicate and zero rows are dropped first."""
    seen = set()
    rows = []
    for r in M.entries:
        key = tuple(r)
        if any(r) and key not in seen:
            seen.add(key)
            rows.append(r)
    n = M.shape[1]
    if not rows or n == 0:
        return 0
    if n < len(rows):
        rows = [list(c) for c in zip(*rows)]
        n = len(rows[0])
    return _bareiss(rows, n, M.ring.one)[0]


def det(pring: PolyRing, rows):
    """Determinant of a square list-of-lists over F_p[v]."""
    k = len(rows)
    if k == 0:
        return pring.one
    r, last, sign = _bareiss(rows, k, pring.one, want_det=True)
    if r < k or sign == 0:
        return pring.zero
    return last if sign == 1 else -last


def rank_over_fraction_field(entries, pring: PolyRing) -> int:
    if not entries or not entries[0]:
        return 0
    return bareiss_rank(PolyMatrix(pring, entries))


# --- rank reports ------------------------------------------------------------

def sampling_field(p: int, field_bits: int) -> Field:
    return get_field(p, field_bits)


def poly_rank_report(M: PolyMatrix, mode="probabilistic", trials=4, field_bits=16, seed=0):
    if mode == "exact":
        return {"rank": bareiss_rank(M), "mode": "exact"}
    if mode != "probabilistic":
        raise ValueError(f"unknown rank mode {mode!r}")
    field = sampling_field(M.ring.p, field_bits)
    m, n = M.shape
    need = M.degree() * min(m, n)
    if field.q <= need:
        raise ValueError(f"sampling field of size {field.q} must exceed deg*min(m,n) = {need}")
    ranks = []
    for tr in range(trials):
        pt = random_point(M.ring, field, trial_rng(seed, tr))
        ranks.append(rank_array(field, instantiate_at(M, field, pt).data))
    return {"rank": max(ranks, default=0), "mode": "probabilistic", "trials": trials,
            "field_bits": field_bits, "seed": seed, "per_trial": ranks}


def poly_rank(M: PolyMatrix, mode="probabilistic", trials=4, field_bits=16, seed=0) -> int:
    return poly_rank_report(M, mode, trials, field_bits, seed)["rank"]


# --- kernel generators -------------------------------------------------------

def _minor_rows(pring, H, rows, cols):
    return [[H.entries[i][j] for j in cols] for i in rows]


def _generator_from_minor(H: PolyMatrix, rows, cols, dM):
    """Rows det(M) * pi^-1([-P^T, I]) for the nonsingular minor on (rows, cols)."""
    pring = H.ring
    n = H.shape[1]
    free = [f for f in range(n) if f not in set(cols)]
    base = _minor_rows(pring, H, rows, cols)
    out = []
    for f in free:
        g = [pring.zero] * n
        g[f] = dM
        for j, cj in enumerate(cols):
            replaced = [list(r) for r in base]
            for i, ri in enumerate(rows):
                replaced[i][j] = H.entries[ri][f]
            g[cj] = -det(pring, replaced)
        out.append(g)
    return out


def lemma1_generator(H: PolyMatrix, budget: int = MINOR_BUDGET) -> PolyMatrix:
    """Polynomial generator of ker H over F_p(v), combining all nonsingular maximal minors."""
    pring = H.ring
    m, n = H.shape
    r = bareiss_rank(H)
    if r == 0:
        return PolyMatrix(pring, [[pring.one if i == j else pring.zero for j in range(n)]
                                  for i in range(n)], H.columns)
    count = comb(n, r) * comb(m, r)
    if count > budget:
        raise BudgetExceeded("kernel generator minor enumeration", count, budget)
    seen = set()
    out = []
    for rows in combinations(range(m), r):
        for cols in combinations(range(n), r):
            dM = det(pring, _minor_rows(pring, H, rows, cols))
            if dM == 0:
                continue
            for g in _generator_from_minor(H, rows, cols, dM):
                key = tuple(g)
                if key not in seen and any(g):
                    seen.add(key)
                    out.append(g)
    if not out:
        out = [[pring.zero] * n]
    return PolyMatrix(pring, out, H.columns)


def kernel_generator(H: PolyMatrix, seed=0, field_bits=20, attempts=8) -> PolyMatrix:
    """Polynomial kernel generator from a single nonsingular maximal minor.

    The minor is located at a random point and confirmed symbolically, so the
    rows always lie in ker H; their span equals ker H over F_p(v).
    """
    pring = H.ring
    m, n = H.shape
    r = bareiss_rank(H)
    if r == 0:
        return PolyMatrix(pring, [[pring.one if i == j else pring.zero for j in range(n)]
                                  for i in range(n)], H.columns)
    field = sampling_field(pring.p, field_bits)
    for a in range(attempts):
        pt = random_point(pring, field, trial_rng(seed, a))
        A = instantiate_at(H, field, pt).data
        if rank_array(field, A) < r:
            continue
        _, row_piv = rref_array(field, A.T)
        rows = row_piv[:r]
        _, cols = rref_array(field, A[rows])
        dM = det(pring, _minor_rows(pring, H, rows, cols))
        if dM != 0:
            return PolyMatrix(pring, _generator_from_minor(H, rows, cols, dM), H.columns)
    for rows in combinations(range(m), r):
        for cols in combinations(range(n), r):
            dM = det(pring, _minor_rows(pring, H, rows, cols))
            if dM != 0:
                return PolyMatrix(pring, _generator_from_minor(H, rows, cols, dM), H.columns)
    raise AssertionError("no nonsingular maximal minor found")
