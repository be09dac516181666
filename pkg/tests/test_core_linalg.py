import numpy as np
import pytest
from hypothesis import given, strategies as st

from hexablock import core_linalg as cl
from hexablock.errors import NotAContraction, NotCommuting, NotHermitianPSD, NotNormal
from hexablock.oracles import contraction, ginibre, haar_unitary


def test_op_norm_examples():
    assert cl.op_norm(np.eye(3)) == pytest.approx(1.0)
    assert cl.op_norm(np.diag([0.5, -0.25])) == pytest.approx(0.5)
    # sampled max |Mx| over unit vectors gave 0.99999
    assert cl.op_norm([[0, 1], [0, 0]]) == pytest.approx(1.0)


def test_defect_examples():
    np.testing.assert_allclose(cl.defect(0.5 * np.eye(2)), np.sqrt(3) / 2 * np.eye(2), atol=1e-14)
    u = haar_unitary(np.random.default_rng(3), 3)
    np.testing.assert_allclose(cl.defect(u), 0, atol=1e-7)
    np.testing.assert_allclose(cl.defect(np.diag([0.6, 0.8])), np.diag([0.8, 0.6]), atol=1e-14)


def test_defect_rejects_expansion():
    with pytest.raises(NotAContraction):
        cl.defect(1.1 * np.eye(2))


def test_defect_clamps_roundoff():
    d = cl.defect((1 + 1e-12) * np.eye(2))
    assert np.all(np.isfinite(d))


@given(st.integers(0, 10_000), st.integers(1, 8))
def test_defect_square_plus_gram_is_identity(seed, dim):
    t = contraction(np.random.default_rng(seed), dim)
    d = cl.defect(t)
    np.testing.assert_allclose(d @ d + t.conj().T @ t, np.eye(dim), atol=1e-9)


def test_joint_diagonalize_diagonal():
    jd = cl.joint_diagonalize([np.diag([1, 2, 3]), np.diag([4j, 5, 6])])
    got = sorted(map(tuple, np.round(jd.eigentuples, 12)), key=lambda p: (p[0].real, p[0].imag))
    assert got == [(1, 4j), (2, 5), (3, 6)]


def test_joint_diagonalize_swap_matrix():
    jd = cl.joint_diagonalize([np.array([[0, 1], [1, 0]]), np.eye(2)])
    got = sorted(map(tuple, np.round(jd.eigentuples.real, 12)))
    assert got == [(-1.0, 1.0), (1.0, 1.0)]


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_joint_diagonalize_recovers_planted(seed, dim):
    rng = np.random.default_rng(seed)
    u = haar_unitary(rng, dim)
    d1, d2 = rng.standard_normal((2, dim)) + 1j * rng.standard_normal((2, dim))
    d2[: dim // 2] = d2[0]   # force a repeated eigenvalue in one coordinate
    mats = [u @ np.diag(d1) @ u.conj().T, u @ np.diag(d2) @ u.conj().T]
    jd = cl.joint_diagonalize(mats)
    np.testing.assert_allclose(jd.basis.conj().T @ jd.basis, np.eye(dim), atol=1e-10)
    for i, m in enumerate(mats):
        assert cl.op_norm(m - jd.reconstruct(i)) <= 10 * 1e-9 * (1 + cl.op_norm(m))
    want = sorted(zip(np.round(d1, 8), np.round(d2, 8)), key=lambda p: (p[0].real, p[0].imag, p[1].real))
    got = sorted(map(tuple, np.round(jd.eigentuples, 8)), key=lambda p: (p[0].real, p[0].imag, p[1].real))
    np.testing.assert_allclose(np.array(got), np.array(want), atol=1e-7)


def test_joint_diagonalize_errors():
    s = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NotNormal):
        cl.joint_diagonalize([s, np.eye(2)])
    with pytest.raises(NotCommuting):
        cl.joint_diagonalize([np.diag([1, 2]), np.array([[0, 1], [1, 0]])])


def test_numerical_radius_examples():
    assert cl.numerical_radius(np.diag([0.3, -0.7j, 0.1])) == pytest.approx(0.7, abs=1e-12)
    # random unit vectors gave max |<Tx,x>| = 0.4999999999979
    assert cl.numerical_radius([[0, 1], [0, 0]]) == pytest.approx(0.5, abs=1e-6)
    assert cl.numerical_radius(np.zeros((3, 3))) == 0.0


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_numerical_radius_classical_bounds(seed, dim):
    t = ginibre(np.random.default_rng(seed), dim)
    w, n = cl.numerical_radius(t), cl.op_norm(t)
    assert n / 2 - 1e-9 <= w <= n + 1e-9


def test_numerical_radius_monotone_in_grid():
    t = ginibre(np.random.default_rng(5), 4)
    vals = [cl.numerical_radius(t, angles=g, refine=False) for g in (16, 32, 64, 128)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_polar_normal_examples():
    u, p = cl.polar_normal(-2 * np.eye(2))
    np.testing.assert_allclose(u, -np.eye(2), atol=1e-12)
    np.testing.assert_allclose(p, 2 * np.eye(2), atol=1e-12)
    u, p = cl.polar_normal(np.diag([1j, 0]))
    np.testing.assert_allclose(u, np.diag([1j, 1]), atol=1e-12)
    np.testing.assert_allclose(p, np.diag([1, 0]), atol=1e-12)
    w = haar_unitary(np.random.default_rng(1), 3)
    u, p = cl.polar_normal(w)
    np.testing.assert_allclose(u, w, atol=1e-10)
    np.testing.assert_allclose(p, np.eye(3), atol=1e-10)
    with pytest.raises(NotNormal):
        cl.polar_normal([[0, 1], [0, 0]])


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_polar_normal_properties(seed, dim):
    rng = np.random.default_rng(seed)
    w = haar_unitary(rng, dim)
    ev = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    ev[rng.uniform(size=dim) < 0.3] = 0
    n = w @ np.diag(ev) @ w.conj().T
    u, p = cl.polar_normal(n)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(dim), atol=1e-9)
    assert cl.op_norm(cl.comm(u, p)) <= 1e-9
    assert cl.op_norm(n - u @ p) <= 1e-9 * (1 + cl.op_norm(n))


def test_pinv_psd_examples():
    np.testing.assert_allclose(cl.pinv_psd(np.diag([2.0, 0.0])), np.diag([0.5, 0]), atol=1e-15)
    np.testing.assert_allclose(cl.pinv_psd(np.eye(3)), np.eye(3), atol=1e-15)
    q = np.array([1, 1j, -1]) / np.sqrt(3)
    qq = np.outer(q, q.conj())
    np.testing.assert_allclose(cl.pinv_psd(qq), qq, atol=1e-14)
    with pytest.raises(NotHermitianPSD):
        cl.pinv_psd(np.diag([1.0, -1.0]))


def test_herm_eig_descending_and_reconstructs():
    m = ginibre(np.random.default_rng(2), 5)
    m = m + m.conj().T
    he = cl.herm_eig(m)
    assert np.all(np.diff(he.eigenvalues) <= 0)
    rec = he.eigenvectors @ np.diag(he.eigenvalues) @ he.eigenvectors.conj().T
    assert cl.op_norm(m - rec) <= 1e-9 * (1 + cl.op_norm(m))


def test_principal_angles_identical_subspaces():
    q = np.linalg.qr(ginibre(np.random.default_rng(4), 5)[:, :2])[0]
    assert cl.principal_angles(q, q @ haar_unitary(np.random.default_rng(0), 2)).max() < 1e-7
