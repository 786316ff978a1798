"""Sheaf codes on graded posets and the operations between them.

A sheaf code assigns to every element sigma a local code F_sigma on the
coordinates X_sigma, such that restricting a local codeword at sigma to
X_tau (tau above sigma) lands in F_tau. Local codes are held as LinearCode
objects indexed by X_sigma in element order.
"""

from __future__ import annotations

import numpy as np

from .codes import (LinearCode, full_code, puncture, quotient_code, repetition_code, tensor,
                    zero_code, dual, diagonal_action)
from .errors import FieldMismatch, HierarchyError
from .fields import Field
from .groups import PermutationAction
from .matrices import row_basis
from .posets import (GradedPoset, OpenSet, PosetMorphism, check_action, poset_product,
                     poset_quotient, upper_closure)


def _restrict_rows(G, src_index, dst_index):
    pos = {x: i for i, x in enumerate(src_index)}
    return G[:, [pos[x] for x in dst_index]]


class SheafCode:
    """A graded poset with a hierarchical family of local codes."""

    def __init__(self, X: GradedPoset, field: Field, local, validate=True, level1=None):
        self.X = X
        self.field = field
        self.local = {}
        for s in X.elements:
            if s not in local:
                raise ValueError(f"no local code at {s!r}")
            C = local[s]
            if C.field != field:
                raise FieldMismatch(f"local code at {s!r} is over {C.field}")
            xs = X.X(s)
            if set(C.index) != set(xs) or len(C.index) != len(xs):
                raise ValueError(f"local code at {s!r} is not indexed by X_sigma")
            if C.index != xs:
                C = C.reindex(xs)
            self.local[s] = LinearCode(field, xs, H=row_basis(field, C.H))
        self.level1 = level1
        self.validated = False
        if validate:
            self.validate()

    def validate(self):
        X = self.X
        for s in X.maximal:
            if self.local[s].k != 1:
                raise ValueError(f"local code at maximal element {s!r} must be the full space F")
        for s, t in X.covers:
            Cs, Ct = self.local[s], self.local[t]
            if Cs.k == 0 or Ct.H.shape[0] == 0:
                continue
            restricted = _restrict_rows(Cs.G, Cs.index, Ct.index)
            if np.any(self.field.matmul(restricted, Ct.H.T)):
                raise HierarchyError(s, t)
        self.validated = True
        return self

    def __repr__(self):
        return f"SheafCode({self.X!r} over {self.field!r})"

    def __getitem__(self, s) -> LinearCode:
        return self.local[s]

    def local_dim(self, s) -> int:
        return self.local[s].k

    def same_local_codes(self, other: "SheafCode") -> bool:
        if set(self.X.elements) != set(other.X.elements) or self.field != other.field:
            return False
        return all(self.local[s] == other.local[s] for s in self.X.elements)

    __eq__ = same_local_codes
    __hash__ = object.__hash__

    def global_code(self) -> LinearCode:
        return local_sections(self, OpenSet(self.X, self.X.elements))

    def stacked_parity(self, sigmas, columns):
        """Local parity checks of ``sigmas`` zero-padded onto ``columns``."""
        return stack_parity([self.local[s] for s in sigmas], columns)

    def restrict(self, c, src, dst):
        """Restrict a vector on X_src to X_dst (src below dst)."""
        return _restrict_rows(np.asarray(c).reshape(1, -1), self.X.X(src), self.X.X(dst))[0]


def stack_parity(codes, columns):
    pos = {x: i for i, x in enumerate(columns)}
    blocks = []
    for C in codes:
        H = C.H
        if H.shape[0] == 0:
            continue
        B = np.zeros((H.shape[0], len(columns)), dtype=np.int64)
        B[:, [pos[x] for x in C.index]] = H
        blocks.append(B)
    if not blocks:
        return np.zeros((0, len(columns)), dtype=np.int64)
    return np.vstack(blocks)


def sheaf_new(X: GradedPoset, local_codes, field: Field = None) -> SheafCode:
    if field is None:
        field = next(iter(local_codes.values())).field
    return SheafCode(X, field, local_codes)


def constant_sheaf(X: GradedPoset, field: Field) -> SheafCode:
    return SheafCode(X, field, {s: repetition_code(field, X.X(s)) for s in X.elements})


def default_sheaf(X: GradedPoset, C: LinearCode) -> SheafCode:
    """Sheaf on a default space: the code C at the bottom, F at every point."""
    bottom = [s for s in X.elements if X.lower_covers(s) == () and s not in X.maximal]
    if len(bottom) != 1:
        raise ValueError("expected a default space with a single bottom element")
    local = {s: full_code(C.field, X.X(s)) for s in X.maximal}
    local[bottom[0]] = C
    return SheafCode(X, C.field, local, level1={bottom[0]: C})


def level1_elements(X: GradedPoset):
    return tuple(s for s in X.level(X.dim - 1) if s not in X.maximal)


def tanner_completion(X: GradedPoset, level1_codes, field: Field = None) -> SheafCode:
    """Deeper local codes are joint kernels of the level-1 codes above them."""
    lv1 = level1_elements(X)
    missing = [s for s in lv1 if s not in level1_codes]
    if missing:
        raise ValueError(f"missing level-1 code at {missing[0]!r}")
    if field is None:
        field = level1_codes[lv1[0]].field if lv1 else None
    if field is None:
        raise ValueError("field required when there are no level-1 elements")
    lv1_codes = {}
    for s in lv1:
        C = level1_codes[s]
        xs = X.X(s)
        if set(C.index) != set(xs):
            raise ValueError(f"level-1 code at {s!r} is not indexed by X_sigma")
        lv1_codes[s] = C.reindex(xs) if C.index != xs else C
    lv1_set = set(lv1)
    local = {}
    for s in X.elements:
        if s in X.maximal:
            local[s] = full_code(field, X.X(s))
        elif s in lv1_set:
            local[s] = lv1_codes[s]
        else:
            above = [t for t in X.elements if t in lv1_set and X.leq(s, t)]
            local[s] = LinearCode(field, X.X(s), H=stack_parity([lv1_codes[t] for t in above], X.X(s)))
    return SheafCode(X, field, local, level1=dict(lv1_codes))


def local_sections(F: SheafCode, U) -> LinearCode:
    """Vectors on X_U whose restriction to each X_sigma (sigma in U) lies in F_sigma."""
    if not isinstance(U, OpenSet):
        U = OpenSet(F.X, U)
    cols = U.X_U
    return LinearCode(F.field, cols, H=F.stacked_parity(U.sorted(), cols))


def restriction_sheaf(F: SheafCode, U) -> SheafCode:
    if not isinstance(U, OpenSet):
        U = OpenSet(F.X, U)
    Y = F.X.subposet(U.members)
    lv1 = None
    if F.level1 is not None:
        lv1 = {s: c for s, c in F.level1.items() if s in U.members}
    return SheafCode(Y, F.field, {s: F.local[s] for s in Y.elements}, level1=lv1)


def union_sheaf(X: GradedPoset, parts) -> SheafCode:
    """Sum of sheaves F_i living on open subposets covering X."""
    parts = list(parts)
    if not parts:
        raise ValueError("union needs at least one sheaf")
    field = parts[0].field
    covered = set()
    for P in parts:
        if P.field != field:
            raise FieldMismatch("union parts over different fields")
        if not set(P.X.elements) <= set(X.elements) or not X.is_upper(P.X.elements):
            raise ValueError("each part must live on an open subset of X")
        covered |= set(P.X.elements)
    if covered != set(X.elements):
        raise ValueError("parts do not cover X")
    local = {}
    for s in X.elements:
        xs = X.X(s)
        gens = [P.local[s].reindex(xs).G for P in parts if s in P.X.index]
        local[s] = LinearCode(field, xs, G=np.vstack(gens))
    return SheafCode(X, field, local)


def disjoint_union_poset(*posets: GradedPoset) -> GradedPoset:
    els, covers, grading = [], [], {}
    for i, P in enumerate(posets):
        els += [(i, x) for x in P.elements]
        covers += [((i, a), (i, b)) for a, b in P.covers]
        grading.update({(i, x): g for x, g in P.grading.items()})
    return GradedPoset(els, covers, grading)


def product_sheaf(A: SheafCode, B: SheafCode) -> SheafCode:
    """Local codes A_sigma tensor B_tau on the product poset."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    P = poset_product(A.X, B.X)
    local = {(s, t): tensor(A.local[s], B.local[t]) for s, t in P.elements}
    lv1 = None
    if A.level1 is not None and B.level1 is not None:
        lv1 = {s: local[s] for s in level1_elements(P)}
    return SheafCode(P, A.field, local, level1=lv1)


def pullback(phi: PosetMorphism, B: SheafCode) -> SheafCode:
    """(phi^* B)_sigma = {b o phi on X_sigma : b in B_phi(sigma)}."""
    X, Y = phi.source, phi.target
    if Y != B.X and set(Y.elements) != set(B.X.elements):
        raise ValueError("morphism target is not the sheaf's poset")
    local = {}
    for s in X.elements:
        ys = B.X.X(phi(s))
        pos = {y: i for i, y in enumerate(ys)}
        cols = []
        for x in X.X(s):
            y = phi(x)
            if y not in pos:
                raise ValueError(f"phi({x!r}) = {y!r} is not above phi({s!r})")
            cols.append(pos[y])
        Gb = B.local[phi(s)].G
        local[s] = LinearCode(B.field, X.X(s), G=Gb[:, cols])
    return SheafCode(X, B.field, local)


def pushforward(phi: PosetMorphism, A: SheafCode) -> SheafCode:
    """(phi_* A)_sigma = {b on Y_sigma : b o phi lies in A(phi^-1(Y_>=sigma))}."""
    X, Y = phi.source, phi.target
    F = A.field
    local = {}
    for s in Y.elements:
        W = OpenSet(X, phi.preimage(Y.up_set(s)))
        sec = local_sections(A, W)
        ys = Y.X(s)
        ypos = {y: i for i, y in enumerate(ys)}
        P = np.zeros((sec.n, len(ys)), dtype=np.int64)
        for i, x in enumerate(sec.index):
            y = phi(x)
            if y not in ypos:
                raise ValueError(f"phi({x!r}) is not a maximal element above {s!r}")
            P[i, ypos[y]] = 1
        H = F.matmul(sec.H, P) if sec.H.shape[0] else np.zeros((0, len(ys)), dtype=np.int64)
        local[s] = LinearCode(F, ys, H=H)
    return SheafCode(Y, F, local)


def check_equivariant(F: SheafCode, action: PermutationAction):
    """Every g maps F_sigma onto F_{g.sigma}: (g.c)[g.x] = c[x]."""
    check_action(F.X, action)
    for g in action.elements():
        for s in F.X.elements:
            C, D = F.local[s], F.local[g[s]]
            if C.k == 0 or D.H.shape[0] == 0:
                continue
            moved = np.zeros((C.k, D.n), dtype=np.int64)
            dpos = {x: i for i, x in enumerate(D.index)}
            for i, x in enumerate(C.index):
                moved[:, dpos[g[x]]] = C.G[:, i]
            if np.any(F.field.matmul(moved, D.H.T)):
                raise ValueError(f"sheaf is not equivariant at {s!r}")


def quotient_sheaf(F: SheafCode, action: PermutationAction):
    """Sheaf on X/G whose local code at an orbit S is F(W_S)/G, W_S the open set generated by S."""
    check_equivariant(F, action)
    Q, proj = poset_quotient(F.X, action)
    local = {}
    for S in Q.elements:
        W = upper_closure(F.X, S)
        sec = local_sections(F, W)
        sub = action.restrict(sec.index)
        qc = quotient_code(sec, sub)
        # orbits of X_W are exactly the maximal orbits above S
        local[S] = qc.relabel({orb: proj(orb[0]) for orb in qc.index})
    return SheafCode(Q, F.field, local), proj


def balanced_product_sheaf(A: SheafCode, actA: PermutationAction, B: SheafCode,
                           actB: PermutationAction):
    P = product_sheaf(A, B)
    act = diagonal_action(actA, actB, P.X.elements)
    return quotient_sheaf(P, act)


def is_tanner(F: SheafCode) -> bool:
    lv1 = {s: F.local[s] for s in level1_elements(F.X)}
    return tanner_completion(F.X, lv1, F.field).same_local_codes(F)


def dual_sheaf_T(F: SheafCode) -> SheafCode:
    """Dualise the level-1 codes and complete again."""
    lv1 = {s: F.local[s] for s in level1_elements(F.X)}
    if F.level1 is None and not tanner_completion(F.X, lv1, F.field).same_local_codes(F):
        raise ValueError("dual sheaf needs a Tanner sheaf")
    return tanner_completion(F.X, {s: dual(c) for s, c in lv1.items()}, F.field)


def flag_product_code(flag, codes) -> SheafCode:
    """Tensor code of the components, punctured to X_sigma at every flag sigma.

    ``flag`` is the (poset, levels, regularity) triple returned by the flag
    complex constructors; component i is indexed by levels[i].
    """
    X, levels, regularity = flag
    if regularity is None:
        raise ValueError("flag complex is not regular")
    if len(codes) != len(levels):
        raise ValueError(f"{len(codes)} components for {len(levels)} levels")
    field = codes[0].field
    comps = []
    for C, lv in zip(codes, levels):
        if set(C.index) != set(lv):
            raise ValueError("component code is not indexed by its level set")
        comps.append(C.reindex(lv))
    T = tensor(*comps)
    local = {}
    for s in X.elements:
        local[s] = puncture(T, X.X(s))
    return SheafCode(X, field, local)


def zero_sheaf(X: GradedPoset, field: Field) -> SheafCode:
    """All non-maximal local codes zero (the smallest admissible sheaf)."""
    local = {s: (full_code(field, X.X(s)) if s in X.maximal else zero_code(field, X.X(s)))
             for s in X.elements}
    return SheafCode(X, field, local)
