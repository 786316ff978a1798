import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sheafforge import codes as C
from sheafforge import homology as Hm
from sheafforge import posets as P
from sheafforge import sheaves as S
from sheafforge.fields import get_field

import helpers as h

F2 = get_field(2)


@pytest.mark.parametrize("l,d", [(2, 2), (3, 3)])
def test_toric_code(l, d):
    K = Hm.CochainComplex(S.constant_sheaf(P.torus(l), F2))
    assert [Hm.cohomology_dim(K, i) for i in K.grades()] == [1, 2, 1]
    Q = Hm.css_from_cohomology(K, 1)
    assert Q.params() == {"n": 2 * l * l, "k": 2, "d_X": d, "d_Z": d, "d": d}
    assert Hm.euler_characteristic(K) == (0, 0)


@pytest.mark.parametrize("l", [3, 4, 5])
def test_cycle_cohomology(l):
    K = Hm.CochainComplex(S.constant_sheaf(P.cycle_poset(l), F2))
    assert Hm.cohomology_dim(K, 0) == 1 and Hm.cohomology_dim(K, 1) == 1


def test_graph_h0_counts_components():
    X = P.graph_complex(range(6), [(0, 1), (1, 2), (3, 4)])
    K = Hm.CochainComplex(S.constant_sheaf(X, F2))
    # components {0,1,2}, {3,4}, {5}
    assert Hm.cohomology_dim(K, 0) == 3
    chi_c, chi_h = Hm.euler_characteristic(K)
    assert chi_c == chi_h == 6 - 3


def test_contractible_triangle():
    X = P.simplicial_complex([(0, 1, 2)])
    K = Hm.CochainComplex(S.constant_sheaf(X, F2))
    assert [Hm.cohomology_dim(K, i) for i in K.grades()] == [1, 0, 0]


def test_zero_sheaf_cohomology_is_top_degree():
    X = P.torus(2)
    K = Hm.CochainComplex(S.zero_sheaf(X, F2))
    assert [K.dim(i) for i in K.grades()] == [0, 0, 4]
    assert Hm.cohomology_dim(K, 2) == 4


@settings(max_examples=25)
@given(st.integers(0, 2**31 - 1), st.sampled_from([(2, 1), (2, 2)]))
def test_delta_squares_to_zero_and_euler(seed, pt):
    f = get_field(*pt)
    rng = np.random.default_rng(seed)
    cells = h.cell_posets()
    F = h.random_sheaf(cells[int(rng.integers(len(cells)))], f, rng)
    for mode in ("intrinsic", "global_generator"):
        K = Hm.CochainComplex(F, mode)
        for i in K.grades():
            D1, D0 = K.delta(i), K.delta(i - 1)
            if D1.size and D0.size:
                assert not np.any(f.matmul(D1, D0))
        chi_c, chi_h = Hm.euler_characteristic(K)
        assert chi_c == chi_h


def test_global_generator_basis_sits_inside_local_code():
    rng = np.random.default_rng(4)
    F = h.random_sheaf(P.torus(2), F2, rng)
    K = Hm.CochainComplex(F, "global_generator")
    for s in F.X.elements:
        B = K.basis(s)
        assert all(F.local[s].contains(r) for r in B)
    # H^0 is the global code in either basis
    assert Hm.cohomology_dim(Hm.CochainComplex(F), 0) == F.global_code().k


def test_coordinates_reject_non_members():
    F = S.constant_sheaf(P.cycle_poset(3), F2)
    K = Hm.CochainComplex(F)
    with pytest.raises(ValueError):
        K.coords("v0", [1, 0])
    assert K.coords("v0", [1, 1]).tolist() == [[1]]


def test_rejections():
    with pytest.raises(ValueError):
        Hm.CochainComplex(S.constant_sheaf(P.cycle_poset(3), get_field(3)))
    with pytest.raises(ValueError):
        Hm.CochainComplex(S.constant_sheaf(P.chain(3), F2))
    with pytest.raises(ValueError):
        Hm.CochainComplex(S.constant_sheaf(P.cycle_poset(3), F2), basis_mode="other")


def _octahedron():
    # K_{2,2,2} as a 2-complex: triangles pick one vertex from each part
    parts = [("a0", "a1"), ("b0", "b1"), ("c0", "c1")]
    facets = [(a, b, c) for a in parts[0] for b in parts[1] for c in parts[2]]
    return P.simplicial_complex(facets)


def test_three_coloring():
    X = _octahedron()
    col = Hm.three_coloring(X)
    assert col is not None
    for e in X.level(1):
        u, v = X.lower_covers(e)
        assert col[u] != col[v]
    K4 = P.simplicial_complex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert Hm.three_coloring(K4) is None


def test_tanner_color_codes():
    X = _octahedron()
    rng = np.random.default_rng(0)
    for _ in range(5):
        F = h.random_tanner_sheaf(X, F2, rng)
        Q = Hm.tanner_color_code(F)
        assert Q.n == 8
        assert Q.B.is_subcode_of(Q.A)
    single = P.simplicial_complex([(0, 1, 2)])
    F = h.random_tanner_sheaf(single, F2, rng)
    assert Hm.tanner_color_code(F).n == 1


def test_tanner_color_code_checks_orthogonality():
    X = _octahedron()
    lv = {s: C.LinearCode(F2, X.X(s), G=[[1, 0]]) for s in S.level1_elements(X)}
    F = S.tanner_completion(X, lv)
    with pytest.raises(ValueError):
        Hm.tanner_color_code(F, dual_sheaf=F)
    with pytest.raises(ValueError):
        Hm.tanner_color_code(S.constant_sheaf(P.cycle_poset(3), F2))


def test_single_edge_and_torus_dimensions():
    X = P.graph_complex([0, 1], [(0, 1)])
    assert [len(X.level(i)) for i in X.grades()] == [2, 1]
    K = Hm.CochainComplex(S.constant_sheaf(X, F2))
    assert [K.dim(i) for i in K.grades()] == [2, 1]
    assert [Hm.cohomology_dim(K, i) for i in K.grades()] == [1, 0]
    K = Hm.CochainComplex(S.constant_sheaf(P.torus(2), F2))
    assert [K.dim(i) for i in K.grades()] == [4, 8, 4]


def test_delta_squares_to_zero_on_tanner_sheaves():
    rng = np.random.default_rng(50)
    cells = h.cell_posets()
    for k in range(50):
        X = cells[k % len(cells)]
        F = h.random_tanner_sheaf(X, get_field(2, 1 + k % 2), rng)
        K = Hm.CochainComplex(F)
        for i in K.grades():
            D1, D0 = K.delta(i), K.delta(i - 1)
            if D1.size and D0.size:
                assert not np.any(F.field.matmul(D1, D0))


@pytest.mark.parametrize("idx", range(len(h.cell_posets())))
def test_zero_sheaf_vanishes_below_top_degree(idx):
    X = h.cell_posets()[idx]
    K = Hm.CochainComplex(S.zero_sheaf(X, F2))
    top = max(K.grades())
    for i in K.grades():
        if i < top:
            assert Hm.cohomology_dim(K, i) == 0
    assert Hm.cohomology_dim(K, top) == len(X.maximal)


def test_empty_degree_gives_empty_code():
    K = Hm.CochainComplex(S.constant_sheaf(P.torus(2), F2))
    Q = Hm.css_from_cohomology(K, 5)
    assert (Q.n, Q.k) == (0, 0)


@pytest.mark.parametrize("seed", [4, 6, 8, 21])
def test_octahedron_color_code_parameters_by_enumeration(seed):
    X = _octahedron()
    F = h.random_tanner_sheaf(X, F2, np.random.default_rng(seed))
    Q = Hm.tanner_color_code(F)
    A = h.span_set(F2, Q.A.G)
    B = h.span_set(F2, Q.B.G)
    Bd = h.span_set(F2, C.dual(Q.B).G)
    Ad = h.span_set(F2, C.dual(Q.A).G)
    k = int(np.log2(len(A) // len(B)))
    assert Q.k == k
    if k:
        dX = min(sum(1 for x in v if x) for v in A - B)
        dZ = min(sum(1 for x in v if x) for v in Bd - Ad)
        assert (Q.d_X(), Q.d_Z()) == (dX, dZ)
