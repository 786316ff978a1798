import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sheafforge import codes as C
from sheafforge.errors import BudgetExceeded, FieldMismatch
from sheafforge.fields import get_field
from sheafforge.groups import PermutationAction, cyclic_group, dihedral_group
from sheafforge.matrices import Matrix

import helpers as h

F2 = get_field(2)
HAMMING_H = [[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]]


def random_code(field, n, rng):
    k = int(rng.integers(0, n + 1))
    return C.LinearCode(field, range(n), G=h.random_subspace(field, n, k, rng))


def test_hamming_and_steane():
    ham = C.LinearCode(F2, range(7), H=HAMMING_H)
    assert (ham.n, ham.k, C.min_distance(ham)) == (7, 4, 3)
    steane = C.CssCode(ham, C.dual(ham))
    assert steane.params() == {"n": 7, "k": 1, "d_X": 3, "d_Z": 3, "d": 3}
    with pytest.raises(ValueError):
        C.CssCode(C.dual(ham), ham)


@settings(max_examples=30)
@given(st.sampled_from([(2, 1), (3, 1), (2, 2)]), st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_distance_and_duality(pt, n, seed):
    field = get_field(*pt)
    code = random_code(field, n, np.random.default_rng(seed))
    d = C.min_distance(code)
    assert d == (h.brute_min_distance(code) or math.inf)
    D = C.dual(code)
    assert D.k == n - code.k
    assert C.dual(D) == code
    words = h.span_set(field, code.G)
    assert all(code.contains(w) for w in words)
    assert len(words) == field.q ** code.k


def test_tensor_against_matrix_oracle():
    rng = np.random.default_rng(0)
    for _ in range(8):
        A, B = random_code(F2, 3, rng), random_code(F2, 3, rng)
        T = C.tensor(A, B)
        # codewords are 3x3 arrays with every column in A and every row in B
        oracle = set()
        for bits in itertools.product(range(2), repeat=9):
            M = np.array(bits).reshape(3, 3)
            if all(A.contains(M[:, j]) for j in range(3)) and all(B.contains(M[i]) for i in range(3)):
                oracle.add(bits)
        assert h.span_set(F2, T.G) == oracle
        assert T.k == A.k * B.k
    with pytest.raises(FieldMismatch):
        C.tensor(A, C.full_code(get_field(3), range(2)))


def test_reed_solomon_is_mds():
    F = get_field(2, 3)
    pts = list(range(1, 8))
    for k in (1, 2, 3):
        G = np.array([[F.pow(a, e) for a in pts] for e in range(k)])
        rs = C.LinearCode(F, pts, G=G)
        assert C.is_mds(rs)
        assert C.min_distance(rs) == 7 - k + 1
        assert C.is_information_set(rs, pts[:k])
    ham = C.LinearCode(F2, range(7), H=HAMMING_H)
    assert not C.is_mds(ham)
    assert not C.is_information_set(ham, [0, 1, 2])


def test_puncture_reindex_relabel():
    ham = C.LinearCode(F2, "abcdefg", H=HAMMING_H)
    P = C.puncture(ham, "gfe")
    assert P.index == ("g", "f", "e") and P.k == 3
    R = ham.reindex("gfedcba")
    assert R == ham
    L = ham.relabel({x: x.upper() for x in "abcdefg"})
    assert L.index == tuple("ABCDEFG")
    assert C.repetition_code(F2, "ab").is_subcode_of(C.full_code(F2, "ab"))
    assert C.zero_code(F2, "ab").k == 0
    assert C.min_distance(C.zero_code(F2, "ab")) == math.inf
    with pytest.raises(BudgetExceeded):
        C.min_distance(C.full_code(F2, range(10)), budget=100)


def quotient_oracle(code, action):
    orbits = action.orbits()
    out = set()
    for v in itertools.product(range(code.field.q), repeat=len(orbits)):
        lift = np.zeros(code.n, dtype=np.int64)
        for val, orb in zip(v, orbits):
            for x in orb:
                lift[code.index.index(x)] = val
        if code.contains(lift):
            out.add(v)
    return out


def test_quotient_invariants_coinvariants():
    rng = np.random.default_rng(5)
    for _ in range(10):
        act = h.cyclic_shift_action([(0, 1, 2), (3, 4), (5,)])
        code = h.random_invariant_code(F2, act, rng)
        assert C.is_invariant(code, act)
        Q = C.quotient_code(code, act)
        assert h.span_set(F2, Q.G) == quotient_oracle(code, act)
        inv = C.invariants_code(code, act)
        fixed = {w for w in h.span_set(F2, code.G)
                 if all(w[code.index.index(g[x])] == w[code.index.index(x)]
                        for g in act.elements() for x in code.index)}
        assert h.span_set(F2, inv.G) == fixed
        co = C.coinvariants_code(code, act)
        assert co.index == tuple(act.orbits())


def test_min_orbit_bound_fails_for_non_free_action():
    # Z4 rotating four coordinates and fixing the fifth
    act = h.cyclic_shift_action([(0, 1, 2, 3), (4,)])
    rep = C.repetition_code(F2, range(5))
    Q = C.quotient_code(rep, act)
    assert C.min_distance(rep) == 5
    assert C.min_distance(Q) == 2
    assert C.min_distance(Q) < C.min_distance(rep) / 1  # smallest orbit has size 1
    assert C.min_distance(Q) >= C.min_distance(rep) / 4  # largest orbit has size 4


@settings(max_examples=25)
@given(st.integers(0, 2**31 - 1))
def test_max_orbit_bound(seed):
    rng = np.random.default_rng(seed)
    act = h.cyclic_shift_action([(0, 1, 2, 3), (4, 5), (6,)])
    code = h.random_invariant_code(F2, act, rng)
    Q = C.quotient_code(code, act)
    if Q.k:
        assert C.min_distance(Q) * 4 >= C.min_distance(code)


def test_balanced_product_requires_invariance():
    act = h.cyclic_shift_action([(0, 1)])
    A = C.LinearCode(F2, (0, 1), G=[[1, 0]])
    with pytest.raises(ValueError):
        C.balanced_product_codes(A, act, A, act)
    R = C.repetition_code(F2, (0, 1))
    bp = C.balanced_product_codes(R, act, R, act)
    assert bp.n == 2 and bp.k == 1


def test_group_algebra_lift_is_multiplicative():
    G = dihedral_group(3)
    F = get_field(3)
    rng = np.random.default_rng(2)
    A = C.GroupAlgebraMatrix(G, F, rng.integers(0, 3, (2, 3, 6)))
    B = C.GroupAlgebraMatrix(G, F, rng.integers(0, 3, (3, 2, 6)))
    lhs = F.matmul(C.group_algebra_lift(A).data, C.group_algebra_lift(B).data)
    assert np.array_equal(lhs, C.group_algebra_lift(C.ga_matmul(A, B)).data)
    assert A.antipode().antipode() == A
    assert A.transpose().transpose() == A
    aug = A.augmentation().data
    assert np.array_equal(aug, A.coeffs.sum(axis=2) % 3)


def test_hp_parameters_formula():
    rng = np.random.default_rng(8)
    for _ in range(5):
        H1 = Matrix(F2, rng.integers(0, 2, (2, 3)))
        H2 = Matrix(F2, rng.integers(0, 2, (2, 4)))
        Q = C.hp_code(H1, H2)
        assert Q.n == 3 * 2 + 2 * 4
        # k = k1 k2^T + k1^T k2 with k = n - rank H, k^T = m - rank H
        r1, r2 = h.rank(F2, H1.data), h.rank(F2, H2.data)
        k1, k1t = 3 - r1, 2 - r1
        k2, k2t = 4 - r2, 2 - r2
        assert Q.k == k1 * k2t + k1t * k2


def test_gb_code_cyclic():
    G = cyclic_group(4)
    # a = 1 + x, b = 1 + x^3 in F2[Z4]
    Q = C.gb_code(G, F2, [1, 1, 0, 0], [1, 0, 0, 1])
    assert Q.n == 8
    assert Q.k == 2


def test_zemor_parity_shape():
    G = cyclic_group(5)
    M = C.zemor_parity(G, F2, [1, 2, 3], np.array([[1, 1, 0], [0, 1, 1]]))
    assert M.shape == (4, 3)
    assert M.coeffs[2, 1, 2] == 1
    with pytest.raises(ValueError):
        C.zemor_parity(G, F2, [1, 2], np.ones((1, 3), dtype=int))


def test_small_code_examples():
    F2 = get_field(2)
    full = C.code_from_parity(Matrix(F2, np.zeros((1, 3), dtype=int)))
    assert full.k == 3
    rep = C.code_from_generator(Matrix(F2, [[1, 1, 1]]))
    assert rep == C.repetition_code(F2, range(3))
    assert C.dual(full).k == 0
    ham = C.LinearCode(F2, range(7), H=HAMMING_H)
    simplex = C.dual(ham)
    assert (simplex.n, simplex.k, C.min_distance(simplex)) == (7, 3, 4)
    assert C.is_mds(C.repetition_code(F2, range(2)))
    GF4 = get_field(2, 2)
    rs = C.LinearCode(GF4, range(4), G=[[1, 1, 1, 1], [0, 1, 2, 3]])
    assert C.is_mds(rs) and C.min_distance(rs) == 3
    assert C.puncture(ham, range(7)) == ham
    assert C.puncture(C.repetition_code(F2, range(3)), [0, 1]) == C.repetition_code(F2, [0, 1])


def test_tensor_examples():
    F2 = get_field(2)
    r2 = C.repetition_code(F2, range(2))
    T = C.tensor(r2, r2)
    assert (T.n, T.k, C.min_distance(T)) == (4, 1, 4)
    par = C.LinearCode(F2, range(3), H=[[1, 1, 1]])
    assert C.tensor(par, C.repetition_code(F2, range(3))).k == 2


def test_quotient_examples():
    F2 = get_field(2)
    ham = C.LinearCode(F2, range(7), H=HAMMING_H)
    triv = PermutationAction(range(7), [])
    Q = C.quotient_code(ham, triv)
    assert (Q.n, Q.k) == (7, 4)
    rep4 = C.repetition_code(F2, range(4))
    Q = C.quotient_code(rep4, PermutationAction(range(4), [{0: 1, 1: 0, 2: 3, 3: 2}]))
    assert (Q.n, Q.k, C.min_distance(Q)) == (2, 1, 2)


def test_balanced_product_examples():
    F2 = get_field(2)
    A = C.LinearCode(F2, range(3), H=[[1, 1, 0]])
    B = C.LinearCode(F2, range(2), H=[[1, 1]])
    bp = C.balanced_product_codes(A, PermutationAction(range(3), []), B, PermutationAction(range(2), []))
    T = C.tensor(A, B)
    assert (bp.n, bp.k) == (T.n, T.k)
    # regular action on both full codes: the quotient is the full space on |G| orbits
    Z3 = cyclic_group(3)
    reg = PermutationAction.from_group(Z3, range(3), lambda g, x: Z3.mul(g, x))
    full = C.full_code(F2, range(3))
    bp = C.balanced_product_codes(full, reg, full, reg)
    assert (bp.n, bp.k) == (3, 3)


def test_lift_examples():
    F2 = get_field(2)
    Z2, Z4 = cyclic_group(2), cyclic_group(4)
    one = C.GroupAlgebraMatrix.from_field_matrix(Z4, F2, [[1]])
    assert np.array_equal(C.group_algebra_lift(one).data, np.eye(4, dtype=int))
    s = C.GroupAlgebraMatrix(Z2, F2, np.ones((1, 1, 2), dtype=int))
    assert np.array_equal(C.group_algebra_lift(s).data, np.ones((2, 2), dtype=int))
    a = C.GroupAlgebraMatrix(Z4, F2, np.array([[[1, 1, 0, 0]]]))
    assert C.group_algebra_lift(a).data[0].tolist() == [1, 1, 0, 0]


def test_gb_examples():
    F2 = get_field(2)
    from sheafforge.groups import FiniteGroup
    Q = C.gb_code(FiniteGroup([[0]]), F2, [1], [1])
    assert Q.k == 0
    Q = C.gb_code(cyclic_group(4), F2, [1, 1, 0, 0], [1, 0, 1, 0])
    p = Q.params()
    assert p["d_X"] == p["d_Z"]


def test_zemor_examples():
    F2 = get_field(2)
    Z2 = cyclic_group(2)
    M = C.zemor_parity(Z2, F2, [0], [[1]])
    assert M.shape == (2, 1)
    assert M.coeffs[:, 0, :].tolist() == [[1, 0], [1, 0]]
    M = C.zemor_parity(Z2, F2, [0, 1], np.eye(2, dtype=int))
    # bottom block: column j carries the generator s_j
    assert M.coeffs[2, 0].tolist() == [1, 0] and M.coeffs[3, 1].tolist() == [0, 1]
    assert M.coeffs[0, 0].tolist() == [1, 0] and M.coeffs[1, 1].tolist() == [1, 0]
    assert not M.coeffs[0, 1].any() and not M.coeffs[2, 1].any()


@settings(max_examples=40)
@given(st.sampled_from([(2, 1), (3, 1), (2, 2)]), st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_singleton_bound(pt, n, seed):
    code = random_code(get_field(*pt), n, np.random.default_rng(seed))
    if code.k == 0:
        return
    d = C.min_distance(code)
    assert d <= code.n - code.k + 1
    assert (d == code.n - code.k + 1) == C.is_mds(code)


@settings(max_examples=25)
@given(st.integers(2, 4), st.integers(1, 2), st.integers(2, 3), st.integers(0, 2**31 - 1))
def test_augmentation_is_parity_check_of_quotient(order, m, ncols, seed):
    """For C = ker lift(H) and the free left action of a cyclic group, C/G = ker eps(H)."""
    F2 = get_field(2)
    G = cyclic_group(order)
    rng = np.random.default_rng(seed)
    Hm = C.GroupAlgebraMatrix(G, F2, rng.integers(0, 2, (m, ncols, order)))
    L = C.group_algebra_lift(Hm)
    code = C.code_from_parity(L)
    act = PermutationAction.from_group(G, L.columns, lambda g, x: (x[0], G.mul(g, x[1])))
    Q = C.quotient_code(code, act)
    expected = C.LinearCode(F2, range(ncols), H=Hm.augmentation().data)
    assert Q.k == expected.k
    # orbit (j, G) corresponds to column j
    assert [orb[0][0] for orb in Q.index] == list(range(ncols))
    assert all(expected.contains(v) for v in Q.G)
