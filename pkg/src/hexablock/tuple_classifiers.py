"""Classifiers for unitary / isometric tuples over the five domains.

Each predicate computes named residuals and answers true only when all of
them are within ``tol``.  Residuals are returned either way so callers can
look at how close a failing tuple came.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .core_linalg import (DEFAULT_TOL, adj, defect, joint_diagonalize, normality_residual, op_norm,
                          polar_normal, require_normal)
from .errors import NotB2Unitary, NotEUnitary, TwistDoesNotCommute
from .operator_tuple import OperatorTuple
from .scalar_domains import GEO_TOL, in_H_closed


@dataclass
class ClassVerdict:
    answer: bool
    route: str
    residuals: dict[str, float]
    certificate: dict[str, Any] = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def __bool__(self) -> bool:
        return self.answer

    def to_dict(self) -> dict[str, Any]:
        cert = {}
        for k, v in self.certificate.items():
            cert[k] = v.to_dict() if hasattr(v, "to_dict") else v
        return {"answer": self.answer, "route": self.route, "residuals": self.residuals,
                "certificate": cert, "tol": self.tol}


def _verdict(route: str, res: dict[str, float], tol: float, **cert) -> ClassVerdict:
    return ClassVerdict(all(v <= tol for v in res.values()), route, res, cert, tol)


def _eye(t: OperatorTuple) -> np.ndarray:
    return np.eye(t.dim, dtype=np.complex128)


def _prep(t, n: int) -> OperatorTuple:
    if not isinstance(t, OperatorTuple):
        t = OperatorTuple(list(t))
    if len(t) != n:
        raise ValueError(f"expected {n} entries, got {len(t)}")
    t.require_commuting()
    return t


def _excess(x: float, bound: float) -> float:
    return max(x - bound, 0.0)


def is_gamma_unitary(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 2)
    s, p = t
    i = _eye(t)
    res = {"S-S*P": op_norm(s - adj(s) @ p), "P*P-I": op_norm(adj(p) @ p - i),
           "PP*-I": op_norm(p @ adj(p) - i), "norm(S)-2": _excess(op_norm(s), 2)}
    return _verdict("S=S*P, P unitary, |S|<=2", res, tol)


def is_gamma_isometry(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 2)
    s, p = t
    res = {"S-S*P": op_norm(s - adj(s) @ p), "P*P-I": op_norm(adj(p) @ p - _eye(t)),
           "norm(S)-2": _excess(op_norm(s), 2)}
    return _verdict("S=S*P, P isometry, |S|<=2", res, tol)


def is_E_unitary(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 3)
    x1, x2, x3 = t
    i = _eye(t)
    res = {"X3*X3-I": op_norm(adj(x3) @ x3 - i), "X3X3*-I": op_norm(x3 @ adj(x3) - i),
           "X1-X2*X3": op_norm(x1 - adj(x2) @ x3), "norm(X1)-1": _excess(op_norm(x1), 1)}
    return _verdict("X3 unitary, X1=X2*X3, |X1|<=1", res, tol)


def is_E_isometry(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 3)
    v1, v2, v3 = t
    res = {"V3*V3-I": op_norm(adj(v3) @ v3 - _eye(t)), "V1-V2*V3": op_norm(v1 - adj(v2) @ v3),
           "norm(V2)-1": _excess(op_norm(v2), 1)}
    return _verdict("V3 isometry, V1=V2*V3, |V2|<=1", res, tol)


def is_B2_isometry(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 2)
    t1, t2 = t
    res = {"T1*T1+T2*T2-I": op_norm(adj(t1) @ t1 + adj(t2) @ t2 - _eye(t))}
    return _verdict("spherical isometry", res, tol)


def is_B2_unitary(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 2)
    t1, t2 = t
    res = {"T1*T1+T2*T2-I": op_norm(adj(t1) @ t1 + adj(t2) @ t2 - _eye(t)),
           "normal(T1)": normality_residual(t1), "normal(T2)": normality_residual(t2)}
    return _verdict("spherical unitary", res, tol)


def _merge(route: str, tol: float, **parts: ClassVerdict) -> ClassVerdict:
    res = {f"{name}:{k}": v for name, cv in parts.items() for k, v in cv.residuals.items()}
    return ClassVerdict(all(cv.answer for cv in parts.values()), route, res,
                        {name: cv for name, cv in parts.items()}, tol)


def is_P_unitary(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 3)
    a, s, p = t
    return _merge("(A, S/2) B2-unitary and (S, P) Gamma-unitary", tol,
                  B2=is_B2_unitary(OperatorTuple([a, s / 2], tol=t.tol), tol),
                  Gamma=is_gamma_unitary(OperatorTuple([s, p], tol=t.tol), tol))


def is_P_isometry(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 3)
    a, s, p = t
    return _merge("(A, S/2) B2-isometry and (S, P) Gamma-isometry", tol,
                  B2=is_B2_isometry(OperatorTuple([a, s / 2], tol=t.tol), tol),
                  Gamma=is_gamma_isometry(OperatorTuple([s, p], tol=t.tol), tol))


def block_embedding(t: OperatorTuple) -> np.ndarray:
    """[[N1, -N0* N3], [N0, N2]]; unitary exactly when the quadruple is an H-unitary."""
    n0, n1, n2, n3 = t
    return np.block([[n1, -adj(n0) @ n3], [n0, n2]])


def is_H_unitary(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Three independent characterizations; the answer requires all of them."""
    t = _prep(t, 4)
    n0, n1, n2, n3 = t
    i = _eye(t)
    e = is_E_unitary(OperatorTuple([n1, n2, n3], tol=t.tol), tol)
    normal = {f"normal(N{k})": normality_residual(m) for k, m in enumerate(t)}

    r3 = dict(normal)
    r3["N0*N0-(I-N1*N1)"] = op_norm(adj(n0) @ n0 - i + adj(n1) @ n1)
    r3["N0N0*-(I-N1N1*)"] = op_norm(n0 @ adj(n0) - i + n1 @ adj(n1))
    r3.update({f"E:{k}": v for k, v in e.residuals.items()})

    b = is_B2_unitary(OperatorTuple([n0, n1], tol=t.tol), tol)
    r4 = {f"B2:{k}": v for k, v in b.residuals.items()}
    r4.update({f"E:{k}": v for k, v in e.residuals.items()})

    blk = block_embedding(t)
    ii = np.eye(2 * t.dim)
    r5 = dict(normal)
    r5["A*A-I"] = op_norm(adj(blk) @ blk - ii)
    r5["AA*-I"] = op_norm(blk @ adj(blk) - ii)
    r5["det-N3"] = op_norm(n1 @ n2 + adj(n0) @ n3 @ n0 - n3)

    routes = {name: all(v <= tol for v in r.values()) for name, r in (("3", r3), ("4", r4), ("5", r5))}
    res = {f"route{name}:{k}": v for name, r in (("3", r3), ("4", r4), ("5", r5)) for k, v in r.items()}
    answer = all(routes.values())
    cert = {"routes": routes, "routes_agree": len(set(routes.values())) == 1,
            "block_unitarity_residual": max(r5["A*A-I"], r5["AA*-I"]), "det_residual": r5["det-N3"]}
    return ClassVerdict(answer, "routes 3, 4, 5", res, cert, tol)


def is_H_isometry(t, tol: float = DEFAULT_TOL) -> ClassVerdict:
    t = _prep(t, 4)
    v0, v1, v2, v3 = t
    b = is_B2_isometry(OperatorTuple([v0, v1], tol=t.tol), tol)
    e = is_E_isometry(OperatorTuple([v1, v2, v3], tol=t.tol), tol)
    v = _merge("(V0, V1) B2-isometry and (V1, V2, V3) E-isometry", tol, B2=b, E=e)
    cross = op_norm(adj(v0) @ v0 + adj(v2) @ v2 - _eye(t))
    v.residuals["V0*V0+V2*V2-I"] = cross
    v.answer = v.answer and cross <= tol
    return v


def is_H_contraction_normal(t, tol: float = DEFAULT_TOL, geo_tol: float = GEO_TOL) -> ClassVerdict:
    t = _prep(t, 4)
    require_normal(t.entries, tol)
    jd = joint_diagonalize(t.entries, tol)
    worst, bad = -np.inf, []
    for j, lam in enumerate(jd.eigentuples):
        v = in_H_closed(tuple(lam), geo_tol)
        worst = max(worst, -v.margin)
        if not v.inside_closed:
            bad.append(j)
    res = {"max_violation": max(worst, 0.0)}
    cert = {"eigentuples": [[[z.real, z.imag] for z in lam] for lam in jd.eigentuples],
            "outside": bad}
    return ClassVerdict(not bad, "joint spectrum in closed hexablock", res, cert, geo_tol)


def complete_E_unitary_to_H(t, twist: np.ndarray | None = None, tol: float = DEFAULT_TOL) -> OperatorTuple:
    """(U D_{N1}, N1, N2, N3) from an E-unitary (N1, N2, N3)."""
    t = _prep(t, 3)
    if not is_E_unitary(t, tol):
        raise NotEUnitary("input is not an E-unitary")
    n1, n2, n3 = t
    u = np.eye(t.dim, dtype=np.complex128) if twist is None else np.asarray(twist, dtype=np.complex128)
    bad = max(op_norm(u @ m - m @ u) for m in t)
    if bad > tol or op_norm(adj(u) @ u - np.eye(t.dim)) > tol:
        raise TwistDoesNotCommute(f"twist is not a commuting unitary (residual {bad:.3e})")
    return OperatorTuple([u @ defect(n1, tol), n1, n2, n3], tol=t.tol)


def complete_B2_unitary_to_H(t, tol: float = DEFAULT_TOL) -> tuple[OperatorTuple, OperatorTuple]:
    """(A, X1, |X1|, U) with X1 = |X1| U, and the variant (A, X1, X1*, I)."""
    t = _prep(t, 2)
    if not is_B2_unitary(t, tol):
        raise NotB2Unitary("input is not a B2-unitary")
    a, x1 = t
    u, p = polar_normal(x1, tol)
    return (OperatorTuple([a, x1, p, u], tol=t.tol),
            OperatorTuple([a, x1, adj(x1), np.eye(t.dim, dtype=np.complex128)], tol=t.tol))
