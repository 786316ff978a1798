"""Finite groups by multiplication table and permutation actions on labels."""

from __future__ import annotations

import numpy as np

MAX_ORDER = 64


class FiniteGroup:
    """Group on elements 0..n-1 with identity 0 and table[g][h] = g*h."""

    def __init__(self, table):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n < 1:
            raise ValueError("multiplication table must be square and nonempty")
        if n > MAX_ORDER:
            raise ValueError(f"group order {n} exceeds cap {MAX_ORDER}")
        rng = np.arange(n)
        if not all(np.array_equal(np.sort(r), rng) for r in table) or \
                not all(np.array_equal(np.sort(c), rng) for c in table.T):
            raise ValueError("table is not a Latin square")
        if not (np.array_equal(table[0], rng) and np.array_equal(table[:, 0], rng)):
            raise ValueError("element 0 must be the identity")
        for g in range(n):
            for h in range(n):
                if not np.array_equal(table[table[g, h]], table[g][table[h]]):
                    raise ValueError("table is not associative")
        self.table = table
        self.table.setflags(write=False)
        self.order = n
        self._inv = [int(np.nonzero(table[g] == 0)[0][0]) for g in range(n)]

    def mul(self, g, h) -> int:
        return int(self.table[g, h])

    def inv(self, g) -> int:
        return self._inv[g]

    def elements(self):
        return range(self.order)

    def is_abelian(self):
        return np.array_equal(self.table, self.table.T)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def to_dict(self):
        return {"order": self.order, "table": self.table.tolist()}

    @classmethod
    def from_dict(cls, d):
        g = cls(d["table"])
        if g.order != d.get("order", g.order):
            raise ValueError("order does not match the table")
        return g


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n with generator 1 (element k stands for x^k)."""
    r = np.arange(n)
    return FiniteGroup((r[:, None] + r[None, :]) % n)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    n, m = G.order, H.order
    t = np.zeros((n * m, n * m), dtype=np.int64)
    for a in range(n * m):
        for b in range(n * m):
            t[a, b] = G.mul(a // m, b // m) * m + H.mul(a % m, b % m)
    return FiniteGroup(t)


def dihedral_group(n: int) -> FiniteGroup:
    """D_n of order 2n; element r^k s^e encoded as k + n*e."""
    def mul(a, b):
        k1, e1 = a % n, a // n
        k2, e2 = b % n, b // n
        k = (k1 + (k2 if e1 == 0 else -k2)) % n
        return k + n * ((e1 + e2) % 2)
    return FiniteGroup([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)])


class PermutationAction:
    """A group generated by permutations of a finite label set.

    Generators are dicts label -> label. The full group is closed under
    composition; ``elements`` lists every permutation as a dict.
    """

    def __init__(self, labels, generators, max_order=MAX_ORDER):
        self.labels = tuple(labels)
        pos = {x: i for i, x in enumerate(self.labels)}
        if len(pos) != len(self.labels):
            raise ValueError("duplicate labels")
        self.pos = pos
        gens = []
        for g in generators:
            if set(g) != set(pos) or set(g.values()) != set(pos):
                raise ValueError("generator is not a permutation of the label set")
            gens.append(tuple(pos[g[x]] for x in self.labels))
        n = len(self.labels)
        ident = tuple(range(n))
        seen = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for p in frontier:
                for s in gens:
                    q = tuple(s[p[i]] for i in range(n))
                    if q not in seen:
                        seen.add(q)
                        new.append(q)
                        if len(seen) > max_order:
                            raise ValueError(f"generated group exceeds order cap {max_order}")
            frontier = new
        self._perms = sorted(seen)
        self.generators = gens

    @classmethod
    def from_group(cls, G: FiniteGroup, labels, act):
        """Action of G given by act(g, label) -> label."""
        gens = [{x: act(g, x) for x in labels} for g in range(G.order)]
        return cls(labels, gens)

    @property
    def order(self):
        return len(self._perms)

    def elements(self):
        return [{self.labels[i]: self.labels[p[i]] for i in range(len(p))} for p in self._perms]

    def index_perms(self):
        return list(self._perms)

    def is_trivial(self):
        return self.order == 1

    def orbits(self):
        """Orbits as tuples sorted by label position, ordered by first member."""
        n = len(self.labels)
        seen = [False] * n
        out = []
        for i in range(n):
            if seen[i]:
                continue
            orb = sorted({p[i] for p in self._perms})
            for j in orb:
                seen[j] = True
            out.append(tuple(self.labels[j] for j in orb))
        return out

    def orbit_map(self):
        return {x: orb for orb in self.orbits() for x in orb}

    def restrict(self, labels):
        """The same action on an invariant subset of labels."""
        labels = tuple(labels)
        s = set(labels)
        gens = []
        for g in self.generators:
            d = {self.labels[i]: self.labels[g[i]] for i in range(len(g)) if self.labels[i] in s}
            if set(d.values()) != s:
                raise ValueError("label subset is not invariant")
            gens.append(d)
        return PermutationAction(labels, gens)

    def permutation_matrix(self, perm_index):
        """P with (P c)[g.x] = c[x], i.e. column x has a one at row g.x."""
        p = self._perms[perm_index]
        n = len(p)
        P = np.zeros((n, n), dtype=np.int64)
        P[list(p), list(range(n))] = 1
        return P
