"""Finite graded posets used as coded spaces.

Open sets of the Alexandrov topology are the upper sets. Every element
sigma carries X_sigma, the maximal elements above it; those index the
coordinates of the local code at sigma.
"""

from __future__ import annotations

from itertools import product as iproduct

import numpy as np

from .fields import Field
from .groups import PermutationAction

OPEN_SET_CAP = 24
STAR = "*"


def label_to_json(x):
    if isinstance(x, tuple):
        return [label_to_json(y) for y in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


def label_from_json(x):
    if isinstance(x, list):
        return tuple(label_from_json(y) for y in x)
    return x


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GradedPoset:
    """Poset given by its Hasse diagram and a grading compatible with covers."""

    def __init__(self, elements, covers, grading):
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        if len(index) != len(elements):
            raise ValueError("duplicate element labels")
        for x in elements:
            if x not in grading:
                raise ValueError(f"element {x!r} has no grade")
        extra = set(grading) - set(index)
        if extra:
            raise ValueError(f"grades given for unknown labels {sorted(map(repr, extra))}")
        n = len(elements)
        up = [[] for _ in range(n)]
        down = [[] for _ in range(n)]
        cover_set = []
        for a, b in covers:
            if a not in index or b not in index:
                raise ValueError(f"cover ({a!r}, {b!r}) uses an unknown label")
            if grading[b] != grading[a] + 1:
                raise ValueError(f"grading violated on cover {a!r} < {b!r}")
            i, j = index[a], index[b]
            if j in up[i]:
                continue
            up[i].append(j)
            down[j].append(i)
            cover_set.append((a, b))
        self.elements = elements
        self.index = index
        self.grading = {x: int(grading[x]) for x in elements}
        self.covers = tuple(cover_set)
        self._up = up
        self._down = down
        order = sorted(range(n), key=lambda i: -self.grading[elements[i]])
        upmask = [0] * n
        for i in order:
            m = 1 << i
            for j in up[i]:
                m |= upmask[j]
            upmask[i] = m
        self._upmask = upmask
        downmask = [0] * n
        for i in reversed(order):
            m = 1 << i
            for j in down[i]:
                m |= downmask[j]
            downmask[i] = m
        self._downmask = downmask
        self.maximal = tuple(elements[i] for i in range(n) if not up[i])
        self._maxmask = sum(1 << i for i in range(n) if not up[i])
        self._xs = {x: tuple(elements[j] for j in _bits(upmask[i] & self._maxmask))
                    for i, x in enumerate(elements)}

    # -- basic queries --

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        return (isinstance(other, GradedPoset) and self.elements == other.elements
                and set(self.covers) == set(other.covers) and self.grading == other.grading)

    def __hash__(self):
        return hash((self.elements, frozenset(self.covers)))

    def __repr__(self):
        return f"GradedPoset({len(self.elements)} elements, {len(self.maximal)} maximal)"

    def grade(self, x) -> int:
        return self.grading[x]

    @property
    def dim(self) -> int:
        return max(self.grading.values(), default=0)

    @property
    def min_grade(self) -> int:
        return min(self.grading.values(), default=0)

    def grades(self):
        return sorted(set(self.grading.values()))

    def level(self, i):
        return tuple(x for x in self.elements if self.grading[x] == i)

    def upper_covers(self, x):
        return tuple(self.elements[j] for j in self._up[self.index[x]])

    def lower_covers(self, x):
        return tuple(self.elements[j] for j in self._down[self.index[x]])

    def leq(self, a, b) -> bool:
        return bool(self._upmask[self.index[a]] >> self.index[b] & 1)

    def up_set(self, x) -> frozenset:
        return frozenset(self.elements[j] for j in _bits(self._upmask[self.index[x]]))

    def down_set(self, x) -> frozenset:
        return frozenset(self.elements[j] for j in _bits(self._downmask[self.index[x]]))

    def X(self, x):
        """Maximal elements above x, in element order."""
        return self._xs[x]

    def mask(self, subset) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.index[x]
        return m

    def from_mask(self, mask):
        return frozenset(self.elements[j] for j in _bits(mask))

    def X_U(self, U):
        """Union of X_sigma over sigma in U, in element order."""
        m = 0
        for x in U:
            m |= self._upmask[self.index[x]]
        m &= self._maxmask
        return tuple(self.elements[j] for j in _bits(m))

    def is_upper(self, U) -> bool:
        m = self.mask(U)
        return all((self._upmask[i] & ~m) == 0 for i in _bits(m))

    def between(self, a, b):
        """Elements strictly between a and b."""
        m = self._upmask[self.index[a]] & self._downmask[self.index[b]]
        m &= ~((1 << self.index[a]) | (1 << self.index[b]))
        return [self.elements[j] for j in _bits(m)]

    def subposet(self, subset) -> "GradedPoset":
        """Induced subposet; intended for upper and lower sets, where covers are inherited."""
        s = set(subset)
        els = [x for x in self.elements if x in s]
        return GradedPoset(els, [(a, b) for a, b in self.covers if a in s and b in s],
                           {x: self.grading[x] for x in els})

    def regrade(self, shift: int) -> "GradedPoset":
        return GradedPoset(self.elements, self.covers,
                           {x: g + shift for x, g in self.grading.items()})

    def to_dict(self):
        return {"elements": [label_to_json(x) for x in self.elements],
                "covers": [[label_to_json(a), label_to_json(b)] for a, b in self.covers],
                "grading": [[label_to_json(x), self.grading[x]] for x in self.elements]}

    @classmethod
    def from_dict(cls, d):
        els = [label_from_json(x) for x in d["elements"]]
        g = d["grading"]
        if isinstance(g, dict):
            grading = {label_from_json(k): v for k, v in g.items()}
            # JSON object keys are strings; accept them for non-string labels too
            by_str = {str(x): x for x in els}
            grading = {by_str.get(k, k) if k not in set(els) else k: v for k, v in grading.items()}
        else:
            grading = {label_from_json(k): v for k, v in g}
        covers = [(label_from_json(a), label_from_json(b)) for a, b in d["covers"]]
        return cls(els, covers, grading)


def poset_from_hasse(elements, covers, grading) -> GradedPoset:
    return GradedPoset(elements, covers, grading)


class OpenSet:
    """An upper set of a GradedPoset."""

    __slots__ = ("poset", "members", "mask")

    def __init__(self, poset: GradedPoset, members):
        members = frozenset(members)
        for x in members:
            if x not in poset:
                raise KeyError(f"{x!r} is not an element of the poset")
        if not poset.is_upper(members):
            raise ValueError("set is not upward closed")
        self.poset = poset
        self.members = members
        self.mask = poset.mask(members)

    def __iter__(self):
        return (x for x in self.poset.elements if x in self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def __eq__(self, other):
        if isinstance(other, OpenSet):
            return self.members == other.members
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"OpenSet({sorted(map(repr, self.members))})"

    def sorted(self):
        return tuple(self)

    @property
    def X_U(self):
        return self.poset.X_U(self.members)

    def minimal(self):
        return tuple(x for x in self if not any(y in self.members for y in self.poset.lower_covers(x)))


def upper_closure(X: GradedPoset, seeds) -> OpenSet:
    m = 0
    for s in seeds:
        if s not in X:
            raise KeyError(f"{s!r} is not an element of the poset")
        m |= X._upmask[X.index[s]]
    return OpenSet(X, X.from_mask(m))


def enumerate_open_sets(X: GradedPoset, cap: int = OPEN_SET_CAP):
    """Yield every upper set exactly once, deciding elements from the top down."""
    if len(X) > cap:
        from .errors import BudgetExceeded
        raise BudgetExceeded("open-set enumeration", len(X), cap)
    order = sorted(range(len(X)), key=lambda i: (-X.grading[X.elements[i]], i))
    upcov = [sum(1 << j for j in X._up[i]) for i in range(len(X))]

    def rec(k, mask):
        if k == len(order):
            yield OpenSet(X, X.from_mask(mask))
            return
        i = order[k]
        yield from rec(k + 1, mask)
        if upcov[i] & ~mask == 0:
            yield from rec(k + 1, mask | (1 << i))

    yield from rec(0, 0)


def count_open_sets(X: GradedPoset) -> int:
    """Number of upper sets, counted independently as the number of antichains."""
    n = len(X)
    comparable = [X._upmask[i] | X._downmask[i] for i in range(n)]
    memo = {0: 1}

    def f(mask):
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        r = f(mask & ~(1 << i)) + f(mask & ~comparable[i])
        memo[mask] = r
        return r

    return f((1 << n) - 1)


class PosetMorphism:
    """Order- and grade-preserving map between graded posets."""

    def __init__(self, source: GradedPoset, target: GradedPoset, mapping):
        mapping = dict(mapping)
        for x in source.elements:
            if x not in mapping:
                raise ValueError(f"morphism undefined on {x!r}")
            y = mapping[x]
            if y not in target:
                raise ValueError(f"image {y!r} not in target")
            if target.grade(y) != source.grade(x):
                raise ValueError(f"grade not preserved at {x!r}")
        for a, b in source.covers:
            if not target.leq(mapping[a], mapping[b]):
                raise ValueError(f"order not preserved on {a!r} < {b!r}")
        self.source = source
        self.target = target
        self.mapping = mapping

    def __call__(self, x):
        return self.mapping[x]

    def preimage(self, ys):
        ys = set(ys)
        return [x for x in self.source.elements if self.mapping[x] in ys]

    def is_surjective(self):
        return set(self.mapping.values()) == set(self.target.elements)


def poset_product(*posets: GradedPoset) -> GradedPoset:
    """Componentwise order on tuples; grading adds."""
    if not posets:
        return GradedPoset([()], [], {(): 0})
    elements = list(iproduct(*[P.elements for P in posets]))
    grading = {e: sum(P.grade(x) for P, x in zip(posets, e)) for e in elements}
    covers = []
    for e in elements:
        for k, P in enumerate(posets):
            for y in P.upper_covers(e[k]):
                covers.append((e, e[:k] + (y,) + e[k + 1:]))
    return GradedPoset(elements, covers, grading)


def check_action(X: GradedPoset, action: PermutationAction):
    if set(action.labels) != set(X.elements):
        raise ValueError("action must permute all poset elements")
    cover_set = set(X.covers)
    for g in action.elements():
        for x in X.elements:
            if X.grade(g[x]) != X.grade(x):
                raise ValueError(f"action does not preserve grading at {x!r}")
        for a, b in X.covers:
            if (g[a], g[b]) not in cover_set:
                raise ValueError(f"action does not preserve order on {a!r} < {b!r}")


def poset_quotient(X: GradedPoset, action: PermutationAction):
    """Orbit poset X/G and the projection x -> orbit(x)."""
    check_action(X, action)
    omap = action.orbit_map()
    orbits = []
    for x in X.elements:
        if omap[x] not in orbits:
            orbits.append(omap[x])
    covers = []
    seen = set()
    for a, b in X.covers:
        c = (omap[a], omap[b])
        if c not in seen:
            seen.add(c)
            covers.append(c)
    Q = GradedPoset(orbits, covers, {o: X.grade(o[0]) for o in orbits})
    for o in orbits:
        for o2 in orbits:
            if o != o2 and Q.leq(o, o2) and Q.leq(o2, o):
                raise AssertionError("quotient order is not antisymmetric")
    return Q, PosetMorphism(X, Q, omap)


# --- named constructors ------------------------------------------------------

def default_space(S) -> GradedPoset:
    """S together with a bottom element '*' below every point."""
    S = list(S)
    if STAR in S:
        raise ValueError("'*' is reserved for the bottom element")
    grading = {STAR: -1}
    grading.update({s: 0 for s in S})
    return GradedPoset([STAR] + S, [(STAR, s) for s in S], grading)


def single_point(label="pt") -> GradedPoset:
    return GradedPoset([label], [], {label: 0})


def chain(n: int) -> GradedPoset:
    els = [f"c{i}" for i in range(n)]
    return GradedPoset(els, list(zip(els, els[1:])), {x: i for i, x in enumerate(els)})


def cycle_poset(l: int) -> GradedPoset:
    """Cell poset of the l-cycle: vertices v_i (grade 0) below edges e_i = {v_i, v_i+1}."""
    if l < 2:
        raise ValueError("cycle length must be at least 2")
    vs = [f"v{i}" for i in range(l)]
    es = [f"e{i}" for i in range(l)]
    covers = [(vs[i], es[i]) for i in range(l)] + [(vs[(i + 1) % l], es[i]) for i in range(l)]
    grading = {v: 0 for v in vs}
    grading.update({e: 1 for e in es})
    return GradedPoset(vs + es, covers, grading)


def torus(l: int) -> GradedPoset:
    """Cell poset of the l x l torus, C_l x C_l."""
    return poset_product(cycle_poset(l), cycle_poset(l))


def complete_multipartite_flag(*ns) -> GradedPoset:
    """Flag complex of K_{n_1..n_D}: tuples with one entry per part, '*' meaning unchosen."""
    if not ns or any(n < 1 for n in ns):
        raise ValueError("part sizes must be positive")
    return poset_product(*[default_space(range(n)) for n in ns])


def graph_poset(vertices, edges, offset: int = 0) -> GradedPoset:
    """Vertices below incident edges; ``edges`` maps edge label -> (u, v), multi-edges allowed."""
    vertices = list(vertices)
    if isinstance(edges, dict):
        items = list(edges.items())
    else:
        items = [(i, tuple(e)) for i, e in enumerate(edges)]
    covers = []
    for lab, (u, v) in items:
        covers.append((u, lab))
        if v != u:
            covers.append((v, lab))
    grading = {v: offset for v in vertices}
    grading.update({lab: offset + 1 for lab, _ in items})
    return GradedPoset(vertices + [lab for lab, _ in items], covers, grading)


def simplicial_complex(facets, empty_face: bool = False) -> GradedPoset:
    """Face poset of the complex generated by ``facets``; simplices are sorted tuples."""
    faces = set()
    for f in facets:
        f = tuple(sorted(set(f)))
        n = len(f)
        for m in range(1, 1 << n):
            faces.add(tuple(f[i] for i in range(n) if m >> i & 1))
    if empty_face:
        faces.add(())
    faces = sorted(faces, key=lambda s: (len(s), s))
    fs = set(faces)
    covers = []
    for s in faces:
        for i in range(len(s)):
            t = s[:i] + s[i + 1:]
            if t in fs:
                covers.append((t, s))
    return GradedPoset(faces, covers, {s: len(s) - 1 for s in faces})


def graph_complex(vertices, edges, empty_face: bool = False) -> GradedPoset:
    """A simple graph as a 1-dimensional simplicial complex."""
    used = {v for e in edges for v in e}
    facets = [tuple(e) for e in edges] + [(v,) for v in vertices if v not in used]
    return simplicial_complex(facets, empty_face)


def order_complex(X: GradedPoset, empty_face: bool = False) -> GradedPoset:
    """Simplicial complex of nonempty chains of X (chains listed bottom-up)."""
    chains = []

    def extend(ch):
        chains.append(tuple(ch))
        last = ch[-1]
        for y in X.elements:
            if y != last and X.leq(last, y):
                extend(ch + [y])

    for x in X.elements:
        extend([x])
    key = {x: i for i, x in enumerate(X.elements)}
    facets = [c for c in chains]
    faces = {tuple(sorted(c, key=key.get)) for c in facets}
    faces = sorted(faces, key=lambda s: (len(s), [key[x] for x in s]))
    if empty_face:
        faces = [()] + faces
    fs = set(faces)
    covers = []
    for s in faces:
        for i in range(len(s)):
            t = s[:i] + s[i + 1:]
            if t in fs:
                covers.append((t, s))
    return GradedPoset(faces, covers, {s: len(s) - 1 for s in faces})


def flag_complex_from_poset(V: GradedPoset):
    """Flag complex of a graded poset with D levels, as a subposet of the product of default spaces.

    Returns (poset, levels, regularity) where levels[i] lists V's elements of
    the i-th grade and regularity is the tuple (n_1..n_D) if every flag
    missing only level i extends in exactly n_i ways, else None.
    """
    grades = V.grades()
    levels = [V.level(g) for g in grades]
    D = len(levels)
    flags = []
    for combo in iproduct(*[(STAR,) + lv for lv in levels]):
        chosen = [x for x in combo if x != STAR]
        if all(V.leq(a, b) for a, b in zip(chosen, chosen[1:])):
            flags.append(combo)
    fset = set(flags)
    grading = {f: sum(0 if x != STAR else -1 for x in f) for f in flags}
    covers = []
    for f in flags:
        for k in range(D):
            if f[k] == STAR:
                for x in levels[k]:
                    g = f[:k] + (x,) + f[k + 1:]
                    if g in fset:
                        covers.append((f, g))
    P = GradedPoset(flags, covers, grading)
    reg = []
    for k in range(D):
        counts = set()
        for f in flags:
            if f[k] == STAR and all(f[j] != STAR for j in range(D) if j != k):
                counts.add(sum(1 for x in levels[k] if f[:k] + (x,) + f[k + 1:] in fset))
        reg.append(counts.pop() if len(counts) == 1 else None)
    regularity = tuple(reg) if all(r is not None for r in reg) else None
    return P, levels, regularity


def _projective_points(F: Field):
    pts = []
    for v in iproduct(range(F.q), repeat=3):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def a1_flag_complex(q: int):
    """Points versus lines of the projective plane over F_q, as a flag complex.

    Returns the same triple as ``flag_complex_from_poset``. Points are labelled
    p0.., lines l0.. (a line is stored through its normal vector).
    """
    from sympy import factorint
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, t), = f.items()
    F = Field(p, t)
    pts = _projective_points(F)

    def dot(a, b):
        s = 0
        for x, y in zip(a, b):
            s = F.add(s, F.mul(x, y))
        return s

    P = [f"p{i}" for i in range(len(pts))]
    L = [f"l{i}" for i in range(len(pts))]
    covers = [(P[i], L[j]) for i, a in enumerate(pts) for j, b in enumerate(pts) if dot(a, b) == 0]
    grading = {x: 0 for x in P}
    grading.update({x: 1 for x in L})
    V = GradedPoset(P + L, covers, grading)
    return flag_complex_from_poset(V)
