"""Extendability of open sets, maximally extendable codes and generic sheaf codes.

An open set U is extendable when every local section on U is the restriction
of a global codeword. With H_U the stacked local checks on X_U and G_U the
global generator restricted to X_U, this happens exactly when
rk G_U + rk H_U = |X_U|.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

import numpy as np

from .codes import LinearCode
from .errors import BudgetExceeded, HierarchyError
from .fields import Field, get_field
from .matrices import rank_array
from .polymat import (MINOR_BUDGET, PolyMatrix, PolyRing, bareiss_rank, instantiate_at,
                      kernel_generator, random_point, trial_rng)
from .posets import (OPEN_SET_CAP, GradedPoset, OpenSet, complete_multipartite_flag,
                     default_space, enumerate_open_sets)
from .sheaves import SheafCode

DEFAULT_TRIALS = 3


def default_bits(p: int) -> int:
    """Largest t with p^t <= 2^16, so the sampling field gets log tables."""
    t = 1
    while p ** (t + 1) <= 1 << 16:
        t += 1
    return t


@dataclass
class ExtendabilityReport:
    open_set: OpenSet
    n_U: int
    rank_G: int
    rank_H: int
    mode: str
    trials: int = 0
    seed: int = 0
    verdict: bool = dc_field(init=False)

    def __post_init__(self):
        self.verdict = self.rank_G + self.rank_H == self.n_U

    def to_dict(self):
        from .posets import label_to_json
        out = {"open_set": [label_to_json(x) for x in self.open_set.sorted()],
               "n_U": self.n_U, "rank_G": self.rank_G, "rank_H": self.rank_H,
               "verdict": self.verdict, "mode": self.mode}
        if self.mode == "probabilistic":
            out.update(trials=self.trials, seed=self.seed)
        return out


class GenericSheafCode:
    """Sheaf code over F_p(v) given by polynomial parity checks H_sigma.

    Ranks are computed probabilistically (max over a few random points of a
    large extension field, points fixed by ``seed``) or exactly by
    fraction-free elimination.
    """

    def __init__(self, X: GradedPoset, pring: PolyRing, local_H, validate="auto",
                 trials=DEFAULT_TRIALS, field_bits=None, seed=0,
                 budget=MINOR_BUDGET):
        self.X = X
        self.ring = pring
        self.p = pring.p
        self.trials = trials
        self.field_bits = field_bits or default_bits(pring.p)
        self.seed = seed
        self.H = {}
        for s in X.elements:
            if s not in local_H:
                raise ValueError(f"no parity check at {s!r}")
            M = local_H[s]
            xs = X.X(s)
            if tuple(M.columns) != xs:
                if set(M.columns) != set(xs):
                    raise ValueError(f"parity check at {s!r} is not indexed by X_sigma")
                pos = {c: i for i, c in enumerate(M.columns)}
                M = PolyMatrix(pring, [[r[pos[c]] for c in xs] for r in M.entries], xs)
            self.H[s] = M
        self.d = max((M.degree() for M in self.H.values()), default=0)
        self._points = None
        self._inst = {}
        self._rank_cache = {}
        self.hierarchy_mode = None
        if validate:
            self.validate(validate, budget)

    # -- validation --

    def validate(self, mode="auto", budget=MINOR_BUDGET):
        for s in self.X.maximal:
            if not self.H[s].is_zero():
                raise ValueError(f"parity check at maximal element {s!r} must vanish")
        if mode == "auto":
            big = max((comb(M.shape[1], min(M.shape)) * comb(M.shape[0], min(M.shape))
                       for M in self.H.values()), default=0)
            mode = "symbolic" if big <= budget else "probabilistic"
        for s, t in self.X.covers:
            Hs, Ht = self.H[s], self.H[t]
            if Ht.is_zero():
                continue
            if mode == "symbolic":
                K = kernel_generator(Hs, seed=self.seed)
                pos = [Hs.columns.index(c) for c in Ht.columns]
                R = PolyMatrix(self.ring, [[r[j] for j in pos] for r in K.entries], Ht.columns)
                if any(e != 0 for row in Ht.matmul_T(R) for e in row):
                    raise HierarchyError(s, t)
            else:
                from .matrices import kernel_array
                field = self.sampling_field
                pos = [Hs.columns.index(c) for c in Ht.columns]
                for tr in range(self.trials):
                    A = self.instance_matrix(s, tr)
                    B = self.instance_matrix(t, tr)
                    K = kernel_array(field, A, A.shape[1])[:, pos]
                    if K.size and B.size and np.any(field.matmul(K, B.T)):
                        raise HierarchyError(s, t)
        self.hierarchy_mode = mode
        return self

    # -- instantiation --

    @property
    def sampling_field(self) -> Field:
        return get_field(self.p, self.field_bits)

    def trial_point(self, tr):
        if self._points is None:
            self._points = [random_point(self.ring, self.sampling_field, trial_rng(self.seed, k))
                            for k in range(self.trials)]
        return self._points[tr]

    def instance_matrix(self, s, tr):
        key = (s, tr)
        if key not in self._inst:
            self._inst[key] = instantiate_at(self.H[s], self.sampling_field, self.trial_point(tr)).data
        return self._inst[key]

    def instantiate(self, field: Field, point) -> SheafCode:
        """F[a] as a concrete sheaf; hierarchy is validated (HierarchyError if it fails)."""
        local = {}
        for s in self.X.elements:
            M = instantiate_at(self.H[s], field, point)
            local[s] = LinearCode(field, self.X.X(s), H=M.data)
        return SheafCode(self.X, field, local)

    # -- ranks --

    def _stack_poly(self, sigmas, columns):
        pos = {c: i for i, c in enumerate(columns)}
        rows = []
        zero = self.ring.zero
        for s in sigmas:
            M = self.H[s]
            idx = [pos[c] for c in M.columns]
            for r in M.entries:
                if any(r):
                    row = [zero] * len(columns)
                    for j, e in zip(idx, r):
                        row[j] = e
                    rows.append(row)
        return PolyMatrix(self.ring, rows, columns)

    def _stack_inst(self, sigmas, columns, tr):
        pos = {c: i for i, c in enumerate(columns)}
        blocks = []
        for s in sigmas:
            A = self.instance_matrix(s, tr)
            if A.shape[0] == 0:
                continue
            B = np.zeros((A.shape[0], len(columns)), dtype=np.int64)
            B[:, [pos[c] for c in self.H[s].columns]] = A
            blocks.append(B)
        if not blocks:
            return np.zeros((0, len(columns)), dtype=np.int64)
        return np.vstack(blocks)

    def rank(self, sigmas, columns, mode="probabilistic") -> int:
        """Rank over F_p(v) of the stacked checks of ``sigmas`` on ``columns``."""
        sigmas = tuple(sigmas)
        columns = tuple(columns)
        key = (mode, frozenset(sigmas), columns)
        if key in self._rank_cache:
            return self._rank_cache[key]
        if not columns:
            r = 0
        elif mode == "exact":
            r = bareiss_rank(self._stack_poly(sigmas, columns))
        elif mode == "probabilistic":
            r = max(rank_array(self.sampling_field, self._stack_inst(sigmas, columns, tr))
                    for tr in range(self.trials))
        else:
            raise ValueError(f"unknown rank mode {mode!r}")
        self._rank_cache[key] = r
        return r

    def global_rank(self, mode="probabilistic") -> int:
        return self.rank(self.X.elements, self.X.maximal, mode)

    def dim(self, mode="probabilistic") -> int:
        return len(self.X.maximal) - self.global_rank(mode)

    def restricted_global_rank(self, columns, mode="probabilistic") -> int:
        """Rank of the global parity check restricted to ``columns``."""
        cols = tuple(columns)
        allowed = set(cols)
        # only the columns of H_X in ``cols`` are kept; sigmas contribute through their rows
        key = (mode, "restricted", cols)
        if key in self._rank_cache:
            return self._rank_cache[key]
        X = self.X
        if mode == "exact":
            full = self._stack_poly(X.elements, X.maximal)
            idx = [i for i, c in enumerate(X.maximal) if c in allowed]
            r = bareiss_rank(PolyMatrix(self.ring, [[row[i] for i in idx] for row in full.entries], cols)) \
                if idx else 0
        else:
            idx = [i for i, c in enumerate(X.maximal) if c in allowed]
            r = 0
            if idx:
                r = max(rank_array(self.sampling_field,
                                   self._stack_inst(X.elements, X.maximal, tr)[:, idx])
                        for tr in range(self.trials))
        self._rank_cache[key] = r
        return r

    def q_bound(self) -> int:
        n = len(self.X)
        return self.d * n * n * 2 ** n


def q_bound(Fbar: GenericSheafCode) -> int:
    """Theoretical field-size constant d |X|^2 2^|X|."""
    return Fbar.q_bound()


# --- extendability -----------------------------------------------------------

class _ConcreteRanks:
    """Rank helpers for a concrete sheaf, with the global generator computed once."""

    def __init__(self, F: SheafCode):
        self.F = F
        glob = F.global_code()
        self.G = glob.G
        self.pos = {x: i for i, x in enumerate(glob.index)}
        self._g = {}

    def rank_G(self, cols):
        key = cols
        if key not in self._g:
            self._g[key] = rank_array(self.F.field, self.G[:, [self.pos[c] for c in cols]]) \
                if cols and self.G.shape[0] else 0
        return self._g[key]

    def rank_H(self, U, cols):
        if not cols:
            return 0
        return rank_array(self.F.field, self.F.stacked_parity(U.sorted(), cols))


def _helper(F):
    h = getattr(F, "_ext_helper", None)
    if h is None:
        h = _ConcreteRanks(F)
        F._ext_helper = h
    return h


def is_extendable(F, U, mode="probabilistic") -> ExtendabilityReport:
    """Rank criterion for an open set U (OpenSet or iterable of elements)."""
    if not isinstance(U, OpenSet):
        U = OpenSet(F.X, U)
    cols = U.X_U
    n_U = len(cols)
    if isinstance(F, GenericSheafCode):
        rH = F.rank(U.sorted(), cols, mode)
        comp = tuple(x for x in F.X.maximal if x not in set(cols))
        rG = n_U - F.global_rank(mode) + F.restricted_global_rank(comp, mode)
        return ExtendabilityReport(U, n_U, rG, rH, mode,
                                   F.trials if mode == "probabilistic" else 0, F.seed)
    h = _helper(F)
    return ExtendabilityReport(U, n_U, h.rank_G(cols), h.rank_H(U, cols), "exact")


def extendable_family(F, cap=OPEN_SET_CAP, mode="probabilistic"):
    """All extendable open sets, in enumeration order."""
    return [U for U in enumerate_open_sets(F.X, cap) if is_extendable(F, U, mode).verdict]


def is_me(candidate: SheafCode, reference, cap=OPEN_SET_CAP, mode="probabilistic"):
    """True iff every open set extendable in ``reference`` is extendable in ``candidate``.

    Returns (verdict, witness) with witness the first failing open set or None.
    """
    if set(candidate.X.elements) != set(reference.X.elements):
        raise ValueError("codes live on different posets")
    for U in enumerate_open_sets(reference.X, cap):
        if is_extendable(reference, U, mode).verdict:
            Uc = OpenSet(candidate.X, U.members)
            if not is_extendable(candidate, Uc).verdict:
                return False, U
    return True, None


# --- generic codes -----------------------------------------------------------

def generic_tensor_code(ns, ks, p: int = 2, **kwargs) -> GenericSheafCode:
    """Generic code for the class of tensor products of [n_i, k_i] codes.

    Component i has the all-variable (n_i - k_i) x n_i parity check with
    variables ``v{i}_{r}_{c}``; the poset is the product of default spaces.
    """
    ns, ks = tuple(ns), tuple(ks)
    if len(ns) != len(ks) or not ns:
        raise ValueError("need matching, nonempty n and k lists")
    for n, k in zip(ns, ks):
        if not 0 <= k <= n:
            raise ValueError(f"bad dimensions [{n},{k}]")
    names = [f"v{i}_{r}_{c}" for i, (n, k) in enumerate(zip(ns, ks))
             for r in range(n - k) for c in range(n)]
    pring = PolyRing(p, names)
    comp = [[[pring.var(f"v{i}_{r}_{c}") for c in range(n)] for r in range(n - k)]
            for i, (n, k) in enumerate(zip(ns, ks))]
    X = complete_multipartite_flag(*ns)
    zero, one = pring.zero, pring.one
    local = {}
    for s in X.elements:
        xs = X.X(s)
        rows = []
        # a local row for component i fixes every other coordinate of the flag
        for i, si in enumerate(s):
            if si != "*":
                continue
            others = sorted({tuple(x[j] for j in range(len(s)) if j != i) for x in xs})
            colpos = {x: j for j, x in enumerate(xs)}
            for fixed in others:
                for hrow in comp[i]:
                    row = [zero] * len(xs)
                    for c in range(ns[i]):
                        x = fixed[:i] + (c,) + fixed[i:]
                        row[colpos[x]] = hrow[c]
                    rows.append(row)
        local[s] = PolyMatrix(pring, rows, xs)
    if len(ns) == 1:
        # a single component lives on the plain default space
        X = default_space(range(ns[0]))
        local = {s[0]: PolyMatrix(pring, M.entries, [c[0] for c in M.columns])
                 for s, M in local.items()}
    kwargs.setdefault("validate", "probabilistic")
    return GenericSheafCode(X, pring, local, **kwargs)


def generic_code(n: int, k: int, p: int = 2, **kwargs) -> GenericSheafCode:
    """Generic [n, k] code on the default space."""
    return generic_tensor_code((n,), (k,), p, **kwargs)


@dataclass
class SampleResult:
    instance: SheafCode
    proper: bool
    point: list
    field: Field
    seed: int
    hierarchy_ok: bool = True


def sample_instance(Fbar: GenericSheafCode, field_bits: int, seed: int, field: Field = None,
                    mode="probabilistic"):
    """Instantiate at a uniform random point of GF(p^t); returns (sheaf, proper)."""
    if field is None:
        field = get_field(Fbar.p, field_bits)
    point = random_point(Fbar.ring, field, np.random.default_rng(seed))
    res = instance_at(Fbar, field, point, mode)
    res.seed = seed
    return res


def instance_at(Fbar: GenericSheafCode, field: Field, point, mode="probabilistic") -> SampleResult:
    hierarchy_ok = True
    try:
        inst = Fbar.instantiate(field, point)
    except HierarchyError:
        hierarchy_ok = False
        local = {s: LinearCode(field, Fbar.X.X(s), H=instantiate_at(Fbar.H[s], field, point).data)
                 for s in Fbar.X.elements}
        inst = SheafCode(Fbar.X, field, local, validate=False)
    proper = hierarchy_ok and inst.global_code().k == Fbar.dim(mode)
    return SampleResult(inst, proper, list(point), field, 0, hierarchy_ok)


def me_certify(Fbar: GenericSheafCode, sample, cap=OPEN_SET_CAP, mode="probabilistic"):
    """Certify an instance as maximally extendable for its generic code.

    ``sample`` is a SampleResult (or a SheafCode, whose properness is then
    recomputed). Returns (certified, report).
    """
    if isinstance(sample, SheafCode):
        inst = sample
        proper = inst.validated and inst.global_code().k == Fbar.dim(mode)
        field = inst.field
    else:
        inst, proper, field = sample.instance, sample.proper, sample.field
    report = {"proper": proper, "generic_dim": Fbar.dim(mode),
              "instance_dim": inst.global_code().k, "mode": mode,
              "trials": Fbar.trials, "seed": Fbar.seed,
              "q_bound": Fbar.q_bound(), "failure_bound": Fraction(Fbar.q_bound(), field.q)}
    if not proper:
        report.update(certified=False, witness=None, reason="improper instance")
        return False, report
    generic_family = 0
    for U in enumerate_open_sets(Fbar.X, cap):
        if is_extendable(Fbar, U, mode).verdict:
            generic_family += 1
            if not is_extendable(inst, OpenSet(inst.X, U.members)).verdict:
                report.update(certified=False, witness=U, generic_family=generic_family)
                return False, report
    report.update(certified=True, witness=None, generic_family=generic_family)
    return True, report


def is_mr(candidate: SheafCode, reference, cap=OPEN_SET_CAP, mode="probabilistic"):
    """Maximal recoverability on erasure patterns of maximal elements.

    Every subset E of X_* whose complement contains an information set of the
    reference must do so for the candidate too (compared via rank of G on E^c).
    """
    X = candidate.X
    n = len(X.maximal)
    if n > cap:
        raise BudgetExceeded("erasure-pattern enumeration", n, cap)
    h = _helper(candidate)
    k_c = candidate.global_code().k
    k_r = reference.dim(mode) if isinstance(reference, GenericSheafCode) else reference.global_code().k
    for m in range(1 << n):
        keep = tuple(x for i, x in enumerate(X.maximal) if m >> i & 1)
        if isinstance(reference, GenericSheafCode):
            comp = tuple(x for x in X.maximal if x not in set(keep))
            r_ref = len(keep) - reference.global_rank(mode) + reference.restricted_global_rank(comp, mode)
        else:
            r_ref = _helper(reference).rank_G(keep)
        if r_ref == k_r and h.rank_G(keep) < k_c:
            return False, keep
    return True, None
