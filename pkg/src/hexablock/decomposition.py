"""Unitary / completely non-unitary splitting of hexablock contractions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
import scipy.linalg as sla

from .core_linalg import DEFAULT_TOL, adj, joint_diagonalize, op_norm, orth_complement, require_normal, scale_of
from .dilation_lab import SymbolPair, check_pure_H_symbol_conditions
from .errors import ModelConditionsFail
from .io import cmatrix_to_json, tuple_to_json
from .operator_tuple import OperatorTuple
from .scalar_domains import GEO_TOL, bH_residuals


@dataclass
class SplitResult:
    unitary_basis: np.ndarray
    cnu_basis: np.ndarray
    unitary_part: OperatorTuple | None
    cnu_part: OperatorTuple | None
    reduction_residual: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "unitary_basis": cmatrix_to_json(self.unitary_basis),
            "cnu_basis": cmatrix_to_json(self.cnu_basis),
            "unitary_dim": self.unitary_basis.shape[1],
            "cnu_dim": self.cnu_basis.shape[1],
            "unitary_part": tuple_to_json(self.unitary_part) if self.unitary_part else None,
            "cnu_part": tuple_to_json(self.cnu_part) if self.cnu_part else None,
            "reduction_residual": self.reduction_residual,
        }


def _tuple(t, tol) -> OperatorTuple:
    return t if isinstance(t, OperatorTuple) else OperatorTuple(list(t), tol=tol)


def reduction_residual(t: OperatorTuple, basis: np.ndarray) -> float:
    p = basis @ adj(basis)
    return max((op_norm(p @ m - m @ p) for m in t), default=0.0)


def _split(t: OperatorTuple, ubasis: np.ndarray) -> SplitResult:
    cbasis = orth_complement(ubasis, t.dim)
    up = t.compress(ubasis) if ubasis.shape[1] else None
    cp = t.compress(cbasis) if cbasis.shape[1] else None
    return SplitResult(ubasis, cbasis, up, cp, reduction_residual(t, ubasis))


def canonical_decompose_normal(t, tol: float = DEFAULT_TOL, geo_tol: float = GEO_TOL, seed: int = 0) -> SplitResult:
    t = _tuple(t, tol)
    require_normal(t.entries, tol)
    jd = joint_diagonalize(t.entries, tol, seed=seed)
    on_b = [all(v <= geo_tol for v in bH_residuals(tuple(lam)).values()) for lam in jd.eigentuples]
    return _split(t, jd.basis[:, np.array(on_b, dtype=bool)])


def _null_coeffs(stack: np.ndarray, cut: float) -> np.ndarray:
    if stack.shape[1] == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    _, s, vh = np.linalg.svd(stack)
    rank = int((s > cut).sum())
    return adj(vh[rank:])


def eschmeier_normal_subspace(t, word_bound: int | None = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Largest joint reducing subspace on which the tuple is a commuting normal tuple.

    Start from the common kernel of T_i T_j* - T_j* T_i (which contains it),
    then repeatedly drop vectors whose images under some T_i or T_i* leave the
    current subspace.  The chain is decreasing, so it stabilizes within
    ``dim`` rounds; ``word_bound`` caps the number of rounds.
    """
    t = _tuple(t, tol)
    t.require_commuting()
    n = t.dim
    cut = max(tol, 1e-8) * scale_of(t.entries) ** 2
    mats = [m @ adj(mj) - adj(mj) @ m for m in t for mj in t]
    basis = _null_coeffs(np.vstack(mats), cut)
    rounds = n if word_bound is None else word_bound
    ops = list(t.entries) + [adj(m) for m in t]
    for _ in range(max(rounds, 1)):
        if basis.shape[1] == 0:
            break
        out = np.eye(n) - basis @ adj(basis)
        c = _null_coeffs(np.vstack([out @ m @ basis for m in ops]), cut)
        if c.shape[1] == basis.shape[1]:
            break
        basis = basis @ c
    if basis.shape[1]:
        basis, _ = np.linalg.qr(basis)
    return basis


def canonical_decompose(t, tol: float = DEFAULT_TOL, geo_tol: float = GEO_TOL, seed: int = 0) -> SplitResult:
    t = _tuple(t, tol)
    m = eschmeier_normal_subspace(t, tol=tol)
    if m.shape[1] == 0:
        return _split(t, m)
    inner = canonical_decompose_normal(t.compress(m), tol=max(tol, 1e-8), geo_tol=geo_tol, seed=seed)
    ub = m @ inner.unitary_basis
    if ub.shape[1]:
        ub, _ = np.linalg.qr(ub)
    return _split(t, ub)


def wold_split_symbolic(normal_part, toeplitz_part: tuple[SymbolPair, np.ndarray, np.ndarray] | None = None,
                        tol: float = DEFAULT_TOL, geo_tol: float = GEO_TOL) -> dict[str, Any]:
    """Unitary summand of the normal part; everything else is pure.

    The Toeplitz summand is kept as symbols (G, F1, F2); a finite matrix
    cannot be a pure isometry, so it is never materialized here.
    """
    out: dict[str, Any] = {"unitary": None, "pure_normal": None, "pure_toeplitz": None}
    if normal_part is not None:
        sr = canonical_decompose_normal(normal_part, tol, geo_tol)
        out["unitary"], out["pure_normal"], out["split"] = sr.unitary_part, sr.cnu_part, sr
    if toeplitz_part is not None:
        g, f1, f2 = toeplitz_part
        res = check_pure_H_symbol_conditions(g, f1, f2)
        if any(v > tol for v in res.values()):
            raise ModelConditionsFail(f"pure model conditions fail: {res}")
        out["pure_toeplitz"] = {"symbol": g, "F1": f1, "F2": f2, "conditions": res}
    return out
