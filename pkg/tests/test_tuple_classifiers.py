import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hexablock import tuple_classifiers as tc
from hexablock.core_linalg import adj, op_norm
from hexablock.errors import NotB2Unitary, NotCommuting, NotEUnitary, NotNormal, TwistDoesNotCommute
from hexablock.operator_tuple import OperatorTuple, diag_tuple
from hexablock.oracles import contraction, haar_unitary, sample_region
from hexablock.scalar_domains import pi_maps

from conftest import shift

I2, Z2 = np.eye(2), np.zeros((2, 2))
R = 0.25
COUNTER = ((3 * (1 - R * R) + math.sqrt(1 + R ** 4)) / 4, R, 1j * R, 1j * R * R)


def commuting_unitaries(rng, dim):
    w = haar_unitary(rng, dim)
    a, b = (w @ np.diag(np.exp(2j * np.pi * rng.uniform(size=dim))) @ adj(w) for _ in range(2))
    return a, b


def test_gamma_examples():
    assert tc.is_gamma_unitary((2 * I2, I2))
    assert tc.is_gamma_unitary((Z2, I2))
    assert tc.is_gamma_unitary((np.diag([1 + 1j, 0]), np.diag([1j, -1])))
    assert tc.is_gamma_isometry((np.diag([1 + 1j, 0]), np.diag([1j, -1])))
    assert not tc.is_gamma_unitary((3 * I2, I2))


def test_E_examples(rng):
    assert tc.is_E_unitary((Z2, Z2, I2))
    assert tc.is_E_unitary(([[1]], [[1]], [[1]]))
    a, b = commuting_unitaries(rng, 3)
    h = (a + b) / 2
    assert tc.is_E_unitary((h, h, a @ b))
    assert tc.is_E_isometry((h, h, a @ b))
    assert not tc.is_E_unitary((Z2, Z2, 0.5 * I2))


def test_B2_examples(rng):
    assert tc.is_B2_unitary((I2, Z2))
    u = haar_unitary(rng, 3)
    assert tc.is_B2_unitary((u / math.sqrt(2), u / math.sqrt(2)))


def test_B2_truncated_shift_pair():
    # a finite section of the shift is isometric on every column but the last
    s = shift(4)
    iso = tc.is_B2_isometry((s, np.zeros((4, 4))))
    gram = adj(s) @ s
    assert op_norm(gram[:, :3] - np.eye(4)[:, :3]) == 0
    assert iso.residuals["T1*T1+T2*T2-I"] == pytest.approx(1.0)
    uni = tc.is_B2_unitary((s, np.zeros((4, 4))))
    assert not uni and uni.residuals["normal(T1)"] > 0.1


def test_P_examples():
    assert tc.is_P_unitary((Z2, 2 * I2, I2))
    assert tc.is_P_unitary((I2, Z2, -I2))
    v = tc.is_P_unitary((I2, Z2, Z2))
    assert not v and v.certificate["B2"].answer and not v.certificate["Gamma"].answer


def test_H_unitary_examples():
    v = tc.is_H_unitary(([[1]], [[0]], [[0]], [[-1]]))
    assert v and v.certificate["routes_agree"]
    s = shift(4)
    z = np.zeros((4, 4))
    v = tc.is_H_unitary((s, z, z, np.eye(4)))
    assert not v and v.residuals["route3:normal(N0)"] > 0.1
    assert tc.is_H_unitary(diag_tuple([(1, 0, 0, -1), (0, 1, 1, 1)]))


def test_H_unitary_rejects_noncommuting():
    with pytest.raises(NotCommuting):
        tc.is_H_unitary((shift(3), shift(3).T, np.zeros((3, 3)), np.eye(3)))


def test_H_isometry_examples(rng):
    a, b = commuting_unitaries(rng, 3)
    assert tc.is_H_isometry(((a - b) / 2, (a + b) / 2, (a + b) / 2, a @ b))
    w = haar_unitary(rng, 3)
    z = np.zeros((3, 3))
    assert tc.is_H_isometry((np.eye(3), z, z, w))
    assert tc.is_H_isometry(diag_tuple(sample_region("bH", rng, 3), haar_unitary(rng, 3)))


def test_H_contraction_normal_examples(rng):
    t = diag_tuple(sample_region("H", rng, 4))
    assert tc.is_H_contraction_normal(t)
    v = tc.is_H_contraction_normal(diag_tuple([COUNTER, *sample_region("H", rng, 2)], haar_unitary(rng, 3)))
    assert not v and len(v.certificate["outside"]) == 1
    z = np.zeros((2, 2))
    assert tc.is_H_contraction_normal((z, z, z, z))
    with pytest.raises(NotNormal):
        tc.is_H_contraction_normal((shift(3), np.zeros((3, 3)), np.zeros((3, 3)), np.zeros((3, 3))))


def test_complete_E_unitary_examples():
    out = tc.complete_E_unitary_to_H((Z2, Z2, I2))
    np.testing.assert_allclose(out[0], I2)
    out = tc.complete_E_unitary_to_H(([[1]], [[1]], [[1]]))
    np.testing.assert_allclose(out[0], [[0]], atol=1e-7)
    w = np.exp(0.9j)
    out = tc.complete_E_unitary_to_H(([[0.5 * w]], [[0.5 * w]], [[w * w]]))
    assert out[0][0, 0] == pytest.approx(math.sqrt(3) / 2)
    assert tc.is_H_unitary(out)
    with pytest.raises(NotEUnitary):
        tc.complete_E_unitary_to_H((Z2, Z2, 0.5 * I2))


def test_complete_E_unitary_twist(rng):
    n1 = np.diag([0.5, 0.2j])
    n2 = np.diag([0.5, 0.2j])
    n3 = np.diag([1.0, -1.0 + 0j])
    tw = np.diag([1j, -1])
    assert tc.is_H_unitary(tc.complete_E_unitary_to_H((n1, n2, n3), twist=tw))
    with pytest.raises(TwistDoesNotCommute):
        tc.complete_E_unitary_to_H((n1, n2, n3), twist=haar_unitary(rng, 2))


def test_complete_B2_unitary_examples(rng):
    t, var = tc.complete_B2_unitary_to_H((I2, Z2))
    for m, want in zip(t, (I2, Z2, Z2, I2)):
        np.testing.assert_allclose(m, want, atol=1e-12)
    u = haar_unitary(rng, 3)
    t, var = tc.complete_B2_unitary_to_H((np.zeros((3, 3)), u))
    for m, want in zip(t, (np.zeros((3, 3)), u, np.eye(3), u)):
        np.testing.assert_allclose(m, want, atol=1e-9)
    t, var = tc.complete_B2_unitary_to_H((u / math.sqrt(2), u / math.sqrt(2)))
    assert tc.is_H_unitary(t) and tc.is_H_unitary(var)
    with pytest.raises(NotB2Unitary):
        tc.complete_B2_unitary_to_H((0.5 * I2, Z2))


# ----------------------------------------------------------------- properties

def _normal_quad(seed, on_boundary):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 5))
    pts = sample_region("bH", rng, dim)
    if not on_boundary:
        pts[int(rng.integers(dim))] = sample_region("H", rng, 1)[0]
    return diag_tuple(pts, haar_unitary(rng, dim))


@given(st.integers(0, 10_000), st.booleans())
def test_route_agreement(seed, on_b):
    v = tc.is_H_unitary(_normal_quad(seed, on_b))
    assert v.certificate["routes_agree"]
    assert v.answer == on_b


@given(st.integers(0, 10_000), st.booleans())
def test_unitary_isometry_contraction_chain(seed, on_b):
    t = _normal_quad(seed, on_b)
    u, i, c = tc.is_H_unitary(t), tc.is_H_isometry(t), tc.is_H_contraction_normal(t)
    assert (not u.answer or i.answer) and (not i.answer or c.answer)
    assert u.answer == (i.answer and tc.is_H_isometry(t.adjoint()).answer)


@given(st.integers(0, 10_000))
def test_block_certificate(seed):
    t = _normal_quad(seed, True)
    v = tc.is_H_unitary(t)
    assert v.certificate["block_unitarity_residual"] <= 1e-8
    blk = tc.block_embedding(t)
    n = t.dim
    a11, a12, a21, a22 = blk[:n, :n], blk[:n, n:], blk[n:, :n], blk[n:, n:]
    for got, want in zip((a21, a11, a22, a11 @ a22 - a12 @ a21), t):
        assert op_norm(got - want) <= 1e-8


@given(st.integers(0, 10_000), st.booleans())
def test_P_slice_matches_H(seed, isometry):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 4))
    pts = sample_region("bP" if rng.uniform() < 0.6 else "P", rng, dim)
    t = diag_tuple(pts, haar_unitary(rng, dim))
    a, s, p = t
    h = (a, s / 2, s / 2, p)
    lo, hi = (tc.is_P_isometry, tc.is_H_isometry) if isometry else (tc.is_P_unitary, tc.is_H_unitary)
    assert lo(t).answer == hi(h).answer


@given(st.integers(0, 10_000))
def test_pi_of_unitary_is_H_unitary_scalar(seed):
    q = pi_maps(haar_unitary(np.random.default_rng(seed), 2))["piH"]
    assert tc.is_H_unitary([np.array([[z]]) for z in q], tol=1e-9)
