from fractions import Fraction

import numpy as np
import pytest

from dualpolar.drg import (
    BoseMesnerData,
    NotDistanceRegularError,
    closed_form_dual_eigenvalues,
    closed_form_dual_intersection,
    closed_form_eigenvalues,
    closed_form_intersection,
    closed_form_multiplicities,
    dual_eigenvalue_scalars,
    spectral_data,
    td_scalars,
    verify_distance_regular,
)
from dualpolar.polar import FormSpec, build_polar_graph


class _Plain:
    """Adapter giving any adjacency matrix the graph interface."""

    def __init__(self, adj):
        from dualpolar.polar import _bfs_distances

        self.adjacency = np.asarray(adj, dtype=np.uint8)
        self.dist = _bfs_distances(self.adjacency)
        self.n_vertices = self.adjacency.shape[0]


def direct_count_oracle(g, x, y, i, j):
    """|G_i(x) ^ G_j(y)| counted vertex by vertex."""
    return int(((g.dist[x] == i) & (g.dist[y] == j)).sum())


def test_complete_graph_k4():
    adj = 1 - np.eye(4, dtype=np.uint8)
    data = verify_distance_regular(_Plain(adj))
    assert data.D == 1
    assert data.b == (3, 0)
    assert data.c == (0, 1)


def test_non_drg_rejected():
    # path on 3 vertices is not distance-regular
    adj = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.uint8)
    with pytest.raises(NotDistanceRegularError):
        verify_distance_regular(_Plain(adj))


def test_c32_intersection_array(graph_c32):
    data = verify_distance_regular(graph_c32)
    assert data.b[:3] == (14, 12, 8)
    assert data.c[1:] == (1, 3, 7)
    spec = graph_c32.spec
    c, a, b = closed_form_intersection(spec)
    assert tuple(c) == data.c and tuple(a) == data.a and tuple(b) == data.b
    # spot-check the counting against the direct per-pair oracle
    for x, y in [(0, 1), (0, 5), (3, 77)]:
        h = graph_c32.dist[x, y]
        for i in range(4):
            for j in range(4):
                assert direct_count_oracle(graph_c32, x, y, i, j) == data.p[h, i, j]


def test_d32_intersection_array(graph_d32):
    data = verify_distance_regular(graph_d32)
    assert data.b[:3] == (7, 6, 4)
    assert data.c[1:] == (1, 3, 7)
    assert data.a == (0, 0, 0, 0)


def test_c32_eigenvalues_and_multiplicities(graph_c32):
    spec = graph_c32.spec
    assert closed_form_eigenvalues(spec) == [14, 5, -1, -7]
    assert closed_form_multiplicities(spec) == [1, 35, 84, 15]


def test_d32_eigenvalues(graph_d32):
    assert closed_form_eigenvalues(graph_d32.spec) == [7, 2, -2, -7]
    zeta, xi = dual_eigenvalue_scalars(graph_d32.spec)
    assert (zeta, xi) == (-6, 20)
    assert closed_form_dual_eigenvalues(graph_d32.spec)[0] == 14


def test_c32_dual_eigenvalues(graph_c32):
    zeta, xi = dual_eigenvalue_scalars(graph_c32.spec)
    assert (zeta, xi) == (-10, 45)
    ths = closed_form_dual_eigenvalues(graph_c32.spec)
    assert ths == [35, Fraction(25, 2), Fraction(5, 4), Fraction(-35, 8)]


def test_c32_spectral_data(bm_c32, graph_c32):
    bm = bm_c32
    assert bm.m == [1, 35, 84, 15]
    assert sum(bm.m) == 135
    assert bm.theta_star[0] == bm.m[1] == 35
    # E_0 = J/|X| is asserted inside spectral_data; idempotent family checks
    for i, Ei in enumerate(bm.E):
        for j, Ej in enumerate(bm.E):
            prod = Ei @ Ej
            assert prod == (Ei if i == j else prod - prod)


def test_krein_dual_intersection_consistency(bm_c32, graph_c32):
    cs, as_, bs = closed_form_dual_intersection(graph_c32.spec)
    q = bm_c32.krein
    for i in range(4):
        if i >= 1:
            assert q[i, 1, i - 1] == cs[i]
        assert q[i, 1, i] == as_[i]
        if i < 3:
            assert q[i, 1, i + 1] == bs[i]


def test_triple_products_vanishing(graph_c32, bm_c32):
    # E*_h A_i E*_j = 0 iff p^h_ij = 0, and E_h A*_i E_j = 0 iff q^h_ij = 0
    import dualpolar.drg as drg
    from dualpolar.linexact import ExactMatrix

    g = graph_c32
    data = verify_distance_regular(g)
    x = 0
    n = g.n_vertices
    dist_x = g.dist[x]
    estar = [ExactMatrix.from_int(np.diag((dist_x == i).astype(np.int64)))
             for i in range(4)]
    amats = [ExactMatrix.from_int(m.astype(np.int64))
             for m in drg.distance_matrices(g.dist, 3)]
    astar_i = []
    for i in range(4):
        col = bm_c32.E[i].take_rows([x])
        diag = [col.entry(0, y) * n for y in range(n)]
        astar_i.append(ExactMatrix.diag(diag))
    for h in range(4):
        for i in range(4):
            for j in range(4):
                lhs = estar[h] @ amats[i] @ estar[j]
                assert lhs.is_zero() == (data.p[h, i, j] == 0)
                lhs2 = bm_c32.E[h] @ astar_i[i] @ bm_c32.E[j]
                assert lhs2.is_zero() == (bm_c32.krein[h, i, j] == 0)


def test_td_scalars_c32(graph_c32):
    beta, gamma, gamma_star, rho, rho_star = td_scalars(graph_c32.spec)
    assert beta == Fraction(5, 2)
    assert gamma == Fraction(1, 2)
    assert gamma_star == 5
    # the defining recurrence gives 1/2 + 4*9 = 73/2
    assert rho == Fraction(73, 2)
    assert rho_star == 50


def test_td_scalars_d32(graph_d32):
    _, gamma, _, _, _ = td_scalars(graph_d32.spec)
    assert gamma == 0  # e = 0


def test_beta_recurrence_direct(graph_c32):
    th = closed_form_eigenvalues(graph_c32.spec)
    beta = td_scalars(graph_c32.spec)[0]
    for i in range(2, 3):
        assert (th[i - 2] - th[i + 1]) / (th[i - 1] - th[i]) == beta + 1
