"""Independent oracles and random instance generators shared by the tests.

The oracles here deliberately avoid the library's rank shortcuts: they
enumerate vectors and compare sets.
"""

import itertools

import numpy as np

from sheafforge import codes as C
from sheafforge import posets as P
from sheafforge import sheaves as S
from sheafforge.groups import PermutationAction
from sheafforge.matrices import kernel_array, rank_array, row_basis


def span_set(field, G):
    """Every vector of the row span of G, as a set of tuples (enumerated with itertools)."""
    G = np.asarray(G, dtype=np.int64)
    n = G.shape[1]
    out = {tuple([0] * n)}
    for coeffs in itertools.product(range(field.q), repeat=G.shape[0]):
        v = np.zeros(n, dtype=np.int64)
        for a, row in zip(coeffs, G):
            v = field.vadd(v, field.vmul(np.full(n, a, dtype=np.int64), row))
        out.add(tuple(int(x) for x in v))
    return out


def brute_min_distance(code):
    best = None
    for v in span_set(code.field, code.G):
        w = sum(1 for x in v if x)
        if w and (best is None or w < best):
            best = w
    return best


def local_sections_oracle(F, U):
    """Vectors on X_U whose restriction to every X_sigma (sigma in U) lies in F_sigma.

    Returns (columns, generator rows) computed as an intersection of preimages.
    """
    X = F.X
    cols = list(X.X_U(U))
    pos = {x: i for i, x in enumerate(cols)}
    rows = []
    for s in U:
        code = F.local[s]
        if code.H.shape[0] == 0:
            continue
        blk = np.zeros((code.H.shape[0], len(cols)), dtype=np.int64)
        for j, x in enumerate(code.index):
            blk[:, pos[x]] = code.H[:, j]
        rows.append(blk)
    if not rows:
        return cols, np.eye(len(cols), dtype=np.int64)
    return cols, kernel_array(F.field, np.vstack(rows), len(cols))


def extendable_oracle(F, U):
    """Every local section on U is the restriction of some global section (by enumeration)."""
    cols, Gu = local_sections_oracle(F, U)
    glob = F.global_code()
    gpos = {x: i for i, x in enumerate(glob.index)}
    sel = [gpos[x] for x in cols]
    restricted = {tuple(v[i] for i in sel) for v in span_set(F.field, glob.G)}
    return span_set(F.field, Gu) <= restricted


def random_subspace(field, n, k, rng):
    """A random subspace of F^n of dimension at most k (rows of a generator)."""
    if k == 0 or n == 0:
        return np.zeros((0, n), dtype=np.int64)
    return row_basis(field, rng.integers(0, field.q, (k, n)))


def random_sheaf(X, field, rng, keep=0.7):
    """A random sheaf code on X, built top-down.

    Each F_sigma is a random subcode of the words on X_sigma whose
    restrictions lie in the codes already chosen at its upper covers.
    """
    local = {}
    for s in sorted(X.elements, key=lambda s: -X.grade(s)):
        xs = X.X(s)
        if s in X.maximal:
            local[s] = C.full_code(field, xs)
            continue
        pos = {x: i for i, x in enumerate(xs)}
        rows = []
        for t in X.upper_covers(s):
            code = local[t]
            if code.H.shape[0]:
                blk = np.zeros((code.H.shape[0], len(xs)), dtype=np.int64)
                for j, x in enumerate(code.index):
                    blk[:, pos[x]] = code.H[:, j]
                rows.append(blk)
        amb = kernel_array(field, np.vstack(rows), len(xs)) if rows else np.eye(len(xs), dtype=np.int64)
        k = amb.shape[0]
        if k and rng.random() < keep:
            m = int(rng.integers(0, k + 1))
            G = field.matmul(rng.integers(0, field.q, (m, k)), amb) if m else \
                np.zeros((0, len(xs)), dtype=np.int64)
        else:
            G = amb
        local[s] = C.LinearCode(field, xs, G=G)
    return S.SheafCode(X, field, local)


def random_tanner_sheaf(X, field, rng):
    lv = {}
    for s in S.level1_elements(X):
        xs = X.X(s)
        k = int(rng.integers(0, len(xs) + 1))
        lv[s] = C.LinearCode(field, xs, G=random_subspace(field, len(xs), k, rng))
    return S.tanner_completion(X, lv, field)


def small_posets():
    """A fixed menu of small coded spaces, each with |X_*| <= 12."""
    return [
        P.default_space(range(4)),
        P.default_space(range(6)),
        P.poset_product(P.default_space(range(3)), P.default_space(range(3))),
        P.poset_product(P.default_space(range(2)), P.default_space(range(4))),
        P.cycle_poset(4),
        P.cycle_poset(6),
        P.torus(2),
        P.graph_complex(range(4), [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
        P.simplicial_complex([(0, 1, 2), (1, 2, 3)]),
        P.chain(3),
    ]


def cell_posets():
    """The cell posets among ``small_posets`` (every length-2 interval has two middles)."""
    return small_posets()[:-1]


def cyclic_shift_action(labels_per_orbit):
    """Cyclic action rotating each listed tuple of labels by one step."""
    labels = [x for orb in labels_per_orbit for x in orb]
    g = {}
    for orb in labels_per_orbit:
        for i, x in enumerate(orb):
            g[x] = orb[(i + 1) % len(orb)]
    return PermutationAction(labels, [g])


def random_invariant_code(field, action, rng, nvec=None):
    """Span of the orbits of a few random vectors: a G-invariant code."""
    n = len(action.labels)
    nvec = nvec if nvec is not None else int(rng.integers(1, 3))
    rows = []
    for _ in range(nvec):
        v = rng.integers(0, field.q, n)
        for g in action.elements():
            w = np.zeros(n, dtype=np.int64)
            for i, x in enumerate(action.labels):
                w[action.pos[g[x]]] = v[i]
            rows.append(w)
    G = row_basis(field, np.array(rows))
    return C.LinearCode(field, action.labels, G=G if G.size else np.zeros((0, n), dtype=np.int64))


def rank(field, A):
    return rank_array(field, A)
