import numpy as np
import pytest
from hypothesis import given, strategies as st

from hexablock import fundamental_ops as fo
from hexablock.core_linalg import adj, comm, op_norm
from hexablock.errors import DefectRankZeroWithNonzeroRHS, NotNormal, X3NotContraction
from hexablock.operator_tuple import OperatorTuple, diag_tuple
from hexablock.oracles import haar_unitary, sample_region

from conftest import shift


def scalar(*vals):
    return OperatorTuple([np.array([[v]], dtype=complex) for v in vals])


def random_normal_E(seed, diagonal=False):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 7))
    pts = sample_region("E", rng, dim)
    return diag_tuple(pts, None if diagonal else haar_unitary(rng, dim))


def test_solve_examples():
    fp = fo.solve_fundamental(scalar(0, 0, 0))
    assert fp.k == 1 and np.allclose(fp.F1, 0) and np.allclose(fp.F2, 0)
    fp = fo.solve_fundamental(scalar(0.5, 0.5, 0.5))
    assert abs(fp.F1[0, 0] - 1 / 3) <= 1e-12 and abs(fp.F2[0, 0] - 1 / 3) <= 1e-12
    z = np.zeros((2, 2))
    fp = fo.solve_fundamental((z, z, np.eye(2)))
    assert fp.k == 0 and fp.F1.shape == (0, 0)


def test_solve_errors():
    with pytest.raises(X3NotContraction):
        fo.solve_fundamental(scalar(0, 0, 1.5))
    with pytest.raises(DefectRankZeroWithNonzeroRHS):
        fo.solve_fundamental(scalar(1, 0, 1))


def test_pair_equation_examples():
    t = scalar(0.5, 0.5, 0.5)
    assert max(fo.verify_fo_pair_equations(t, fo.solve_fundamental(t)).values()) <= 1e-12
    t = scalar(0, 0, 0)
    assert max(fo.verify_fo_pair_equations(t, fo.solve_fundamental(t)).values()) == 0
    for seed in range(5):
        t = random_normal_E(seed, diagonal=True)
        assert max(fo.verify_fo_pair_equations(t, fo.solve_fundamental(t)).values()) <= 1e-9


def test_radius_examples():
    assert fo.fo_radius_check(fo.solve_fundamental(scalar(0.5, 0.5, 0.5))) == pytest.approx(2 / 3, abs=1e-9)
    assert fo.fo_radius_check(fo.solve_fundamental(scalar(0, 0, 0))) == 0
    for seed in range(5):
        assert fo.fo_radius_check(fo.solve_fundamental(random_normal_E(seed))) <= 1 + 1e-6


def test_normal_fo_properties_examples():
    v = fo.normal_fo_properties(random_normal_E(3, diagonal=True))
    assert v
    f1 = v.certificate["pair"].F1
    assert op_norm(f1 - np.diag(np.diag(f1))) <= 1e-12
    v = fo.normal_fo_properties(scalar(0.5, 0.5, 0.5))
    assert v and fo.symbol_norm_max(v.certificate["pair"].F1, v.certificate["pair"].F2) == pytest.approx(2 / 3)
    z = np.zeros((2, 2))
    v = fo.normal_fo_properties((z, z, np.eye(2)))
    assert v and v.certificate["defect_dim"] == 0
    with pytest.raises(NotNormal):
        fo.normal_fo_properties((shift(3), np.zeros((3, 3)), np.zeros((3, 3))))


def test_non_E_input_is_flagged_by_radius():
    # (0.9, 0.9, 0) is outside the closed tetrablock; the solver still runs
    fp = fo.solve_fundamental(scalar(0.9, 0.9, 0))
    assert fo.fo_radius_check(fp) > 1


@given(st.integers(0, 10_000))
def test_uniqueness_under_basis_change(seed):
    t = random_normal_E(seed)
    fp = fo.solve_fundamental(t)
    w = haar_unitary(np.random.default_rng(seed + 1), fp.k)
    fq = fo.solve_fundamental(t, basis=fp.basis @ w)
    assert op_norm(adj(w) @ fp.F1 @ w - fq.F1) <= 1e-8
    assert op_norm(adj(w) @ fp.F2 @ w - fq.F2) <= 1e-8


@given(st.integers(0, 10_000))
def test_adjoint_tuple_has_adjoint_pair(seed):
    t = random_normal_E(seed)
    fp = fo.solve_fundamental(t)
    ga = fo.solve_fundamental(t.adjoint(), basis=fp.basis)
    assert op_norm(ga.F1 - adj(fp.F1)) <= 1e-8
    assert op_norm(ga.F2 - adj(fp.F2)) <= 1e-8


@given(st.integers(0, 10_000))
def test_defect_intertwines_adjoint_pair(seed):
    t = random_normal_E(seed)
    fp = fo.solve_fundamental(t)
    dc = fp.Dk @ fp.basis      # the defect compressed to its range
    for f in (fp.F1, fp.F2):
        assert op_norm(comm(dc, adj(f))) <= 1e-8


@given(st.integers(0, 10_000))
def test_normal_inputs_give_commuting_normal_pair(seed):
    v = fo.normal_fo_properties(random_normal_E(seed))
    assert v.answer, v.residuals
