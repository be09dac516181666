"""Fundamental operators of a tetrablock contraction.

For (X1, X2, X3) the pair (F1, F2) on the defect space of X3 solves

    X1 - X2* X3 = D F1 D,   X2 - X1* X3 = D F2 D,   D = (I - X3* X3)^{1/2}.

Operators on the defect space are stored in an orthonormal basis Q of the
range of D; ``Dk = Q* D`` is D viewed as a map from H onto that space, so
``D F D`` becomes ``Dk* F Dk``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .core_linalg import (DEFAULT_TOL, adj, as_cmatrix, comm, defect, normality_residual, numerical_radius,
                          op_norm, require_normal)
from .errors import DefectRankZeroWithNonzeroRHS, X3NotContraction
from .operator_tuple import OperatorTuple
from .tuple_classifiers import ClassVerdict

RANK_TOL = 1e-10


@dataclass
class FundamentalPair:
    F1: np.ndarray
    F2: np.ndarray
    basis: np.ndarray          # n x k, orthonormal, spans the range of D
    Dk: np.ndarray             # k x n, basis* D
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    def lift(self, m: np.ndarray) -> np.ndarray:
        """An operator on the defect space as an n x n matrix."""
        return self.basis @ m @ adj(self.basis)

    def to_dict(self) -> dict:
        from .io import cmatrix_to_json
        return {"F1": cmatrix_to_json(self.F1), "F2": cmatrix_to_json(self.F2),
                "basis": cmatrix_to_json(self.basis), "defect_dim": self.k, "residuals": self.residuals}


def defect_space(x3: np.ndarray, tol: float = DEFAULT_TOL, rank_tol: float = RANK_TOL,
                 basis: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(D, Q, Dk) for a contraction X3."""
    x3 = as_cmatrix(x3)
    if op_norm(x3) > 1 + tol:
        raise X3NotContraction(f"|X3| = {op_norm(x3):.6g} > 1")
    d = defect(x3, tol)
    if basis is None:
        w, v = np.linalg.eigh(np.eye(x3.shape[0]) - adj(x3) @ x3)
        basis = v[:, w > rank_tol]
    return d, basis, adj(basis) @ d


def solve_fundamental(t, tol: float = DEFAULT_TOL, rank_tol: float = RANK_TOL,
                      basis: np.ndarray | None = None) -> FundamentalPair:
    if not isinstance(t, OperatorTuple):
        t = OperatorTuple(list(t), tol=tol)
    t.require_commuting()
    x1, x2, x3 = t
    _, q, dk = defect_space(x3, tol, rank_tol, basis)
    r1 = x1 - adj(x2) @ x3
    r2 = x2 - adj(x1) @ x3
    k = q.shape[1]
    if k == 0:
        worst = max(op_norm(r1), op_norm(r2))
        if worst > tol:
            raise DefectRankZeroWithNonzeroRHS(f"defect space is zero but the right side has norm {worst:.3e}")
        empty = np.zeros((0, 0), dtype=np.complex128)
        return FundamentalPair(empty, empty.copy(), q, dk, {"eq1": worst, "eq2": worst})
    m = np.linalg.inv(dk @ adj(dk))
    f1 = m @ dk @ r1 @ adj(dk) @ m
    f2 = m @ dk @ r2 @ adj(dk) @ m
    res = {"eq1": op_norm(r1 - adj(dk) @ f1 @ dk), "eq2": op_norm(r2 - adj(dk) @ f2 @ dk)}
    return FundamentalPair(f1, f2, q, dk, res)


def verify_fo_pair_equations(t, fp: FundamentalPair) -> dict[str, float]:
    """D X1 = F1 D + F2* D X3 and D X2 = F2 D + F1* D X3, compressed to the defect space."""
    x1, x2, x3 = t
    dk = fp.Dk
    if fp.k == 0:
        return {"pair1": 0.0, "pair2": 0.0}
    return {"pair1": op_norm(dk @ x1 - fp.F1 @ dk - adj(fp.F2) @ dk @ x3),
            "pair2": op_norm(dk @ x2 - fp.F2 @ dk - adj(fp.F1) @ dk @ x3)}


def _circle_max(fun, samples: int) -> float:
    theta = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    vals = np.array([fun(th) for th in theta])
    j = int(np.argmax(vals))
    h = 2 * np.pi / samples
    res = minimize_scalar(lambda th: -fun(th), bounds=(theta[j] - h, theta[j] + h), method="bounded",
                          options={"xatol": 1e-10})
    return max(float(vals[j]), -float(res.fun))


def fo_radius_check(fp: FundamentalPair, samples: int = 64, angles: int = 64) -> float:
    """max over unimodular z of the numerical radius of F1 + F2 z."""
    if fp.k == 0:
        return 0.0
    return _circle_max(lambda th: numerical_radius(fp.F1 + fp.F2 * np.exp(1j * th), angles), samples)


def symbol_norm_max(f1: np.ndarray, f2: np.ndarray, samples: int = 64) -> float:
    """max over unimodular z of ||F1* + F2 z||."""
    if f1.size == 0:
        return 0.0
    return _circle_max(lambda th: op_norm(adj(f1) + f2 * np.exp(1j * th)), samples)


def normal_fo_properties(t, tol: float = DEFAULT_TOL, samples: int = 64) -> ClassVerdict:
    if not isinstance(t, OperatorTuple):
        t = OperatorTuple(list(t), tol=tol)
    require_normal(t.entries, tol)
    fp = solve_fundamental(t, tol)
    res = dict(fp.residuals)
    res.update(verify_fo_pair_equations(t, fp))
    if fp.k:
        res["[F1,F2]"] = op_norm(comm(fp.F1, fp.F2))
        res["normal(F1)"] = normality_residual(fp.F1)
        res["normal(F2)"] = normality_residual(fp.F2)
        res["symbol_norm-1"] = max(symbol_norm_max(fp.F1, fp.F2, samples) - 1, 0.0)
    cv = ClassVerdict(all(v <= tol for v in res.values()), "normal fundamental operators", res,
                      {"defect_dim": fp.k}, tol)
    cv.certificate["pair"] = fp
    return cv
