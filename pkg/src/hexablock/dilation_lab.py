"""Finite sections of the explicit isometric dilations.

Block operators live on H + D^N, with H first and N copies of the defect
space D of X3 after it.  All constructions are block lower triangular, so
the leading corner of any product of them is exact; identities that involve
adjoints are only exact away from the last ``band`` blocks, and the verifiers
restrict to that safe region.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.optimize import least_squares

from .core_linalg import (DEFAULT_TOL, adj, comm, joint_diagonalize, normality_residual, op_norm,
                          psd_sqrt)
from .errors import CertificateInvalid, DegreeExceedsDepth, HypothesisFailed, WrongShape
from .fundamental_ops import FundamentalPair, defect_space, solve_fundamental, symbol_norm_max
from .io import cmatrix_to_json
from .operator_tuple import OperatorTuple


@dataclass
class TruncatedDilation:
    depth: int
    blocks: list[np.ndarray]
    base_dim: int
    defect_dim: int
    band: int = 1      # lowest nonzero block subdiagonal

    @property
    def size(self) -> int:
        return self.base_dim + self.depth * self.defect_dim

    def safe_size(self, extra: int = 0) -> int:
        """Leading rows/cols on which products with one adjoint are exact."""
        keep = max(self.depth - self.band - extra, 0)
        return self.base_dim + keep * self.defect_dim

    def to_dict(self, with_blocks: bool = False) -> dict[str, Any]:
        d = {"depth": self.depth, "base_dim": self.base_dim, "defect_dim": self.defect_dim, "band": self.band}
        if with_blocks:
            d["blocks"] = [cmatrix_to_json(b) for b in self.blocks]
        return d


@dataclass
class SymbolPair:
    C0: np.ndarray
    C1: np.ndarray

    def at(self, z: complex) -> np.ndarray:
        return self.C0 + z * self.C1

    def to_dict(self) -> dict[str, Any]:
        return {"C0": cmatrix_to_json(self.C0), "C1": cmatrix_to_json(self.C1)}


@dataclass
class DilationCertificate:
    kind: str                              # "sufficient" or "main"
    condition_residuals: dict[str, float]
    valid: bool
    Y2: np.ndarray | None = None
    Y3: np.ndarray | None = None
    Zcol: list[np.ndarray] = field(default_factory=list)   # Z_{21}, Z_{31}, ...
    Zdiag: list[np.ndarray] = field(default_factory=list)  # Z_2, Z_3, ...
    source: str = ""

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind, "valid": self.valid, "source": self.source,
                             "condition_residuals": self.condition_residuals}
        if self.Y2 is not None:
            d["Y2"] = cmatrix_to_json(self.Y2)
            d["Y3"] = cmatrix_to_json(self.Y3)
        return d


def _tuple(t, tol: float) -> OperatorTuple:
    return t if isinstance(t, OperatorTuple) else OperatorTuple(list(t), tol=tol)


def _place(big: np.ndarray, n: int, k: int, r: int, c: int, m: np.ndarray) -> None:
    """Write block (r, c); block 0 is H (size n), blocks >= 1 are defect copies (size k)."""
    r0 = 0 if r == 0 else n + (r - 1) * k
    c0 = 0 if c == 0 else n + (c - 1) * k
    big[r0:r0 + m.shape[0], c0:c0 + m.shape[1]] = m


def _band_operator(n: int, k: int, depth: int, corner: np.ndarray, column: Sequence[np.ndarray],
                   diagonals: Sequence[np.ndarray]) -> np.ndarray:
    """corner at (0,0); column[j] at (j+1, 0); diagonals[j] on the j-th subdiagonal of the D-part."""
    big = np.zeros((n + depth * k,) * 2, dtype=np.complex128)
    _place(big, n, k, 0, 0, corner)
    if k:
        for j, m in enumerate(column):
            if j + 1 <= depth:
                _place(big, n, k, j + 1, 0, m)
        for off, m in enumerate(diagonals):
            for c in range(1, depth + 1 - off):
                _place(big, n, k, c + off, c, m)
    return big


def fo_hypothesis_residuals(fp: FundamentalPair) -> dict[str, float]:
    if fp.k == 0:
        return {"[F1,F2]": 0.0, "self-commutators": 0.0}
    f1, f2 = fp.F1, fp.F2
    return {"[F1,F2]": op_norm(comm(f1, f2)),
            "self-commutators": op_norm(comm(f1, adj(f1)) - comm(f2, adj(f2)))}


def _require_hypothesis(fp: FundamentalPair, tol: float) -> None:
    res = fo_hypothesis_residuals(fp)
    if any(v > tol for v in res.values()):
        raise HypothesisFailed("fundamental operators do not commute or have unequal self-commutators", res)


def e_dilation_blocks(t: OperatorTuple, fp: FundamentalPair, depth: int) -> list[np.ndarray]:
    x1, x2, x3 = t[-3:]
    n, k, dk = t.dim, fp.k, fp.Dk
    f1, f2 = fp.F1, fp.F2
    eye = np.eye(k, dtype=np.complex128)
    v1 = _band_operator(n, k, depth, x1, [adj(f2) @ dk], [f1, adj(f2)])
    v2 = _band_operator(n, k, depth, x2, [adj(f1) @ dk], [f2, adj(f1)])
    v3 = _band_operator(n, k, depth, x3, [dk], [np.zeros((k, k)), eye])
    return [v1, v2, v3]


def build_E_dilation(t, fp: FundamentalPair | None = None, depth: int = 12,
                     tol: float = DEFAULT_TOL) -> TruncatedDilation:
    t = _tuple(t, tol)
    if depth < 2:
        raise WrongShape("depth must be at least 2")
    fp = fp or solve_fundamental(t, tol)
    _require_hypothesis(fp, tol)
    return TruncatedDilation(depth, e_dilation_blocks(t, fp, depth), t.dim, fp.k)


def _monomial_products(mats: Sequence[np.ndarray], degree: int):
    """Yield (exponents, M1^e1 M2^e2 ...) for every monomial of total degree <= degree."""
    n = len(mats)
    dim = mats[0].shape[0]

    def rec(i: int, left: int, acc: np.ndarray, exps: tuple[int, ...]):
        if i == n:
            yield exps, acc
            return
        cur = acc
        for e in range(left + 1):
            yield from rec(i + 1, left - e, cur, exps + (e,))
            cur = cur @ mats[i]

    yield from rec(0, degree, np.eye(dim, dtype=np.complex128), ())


def verify_compression(d: TruncatedDilation, base, max_total_degree: int) -> dict[str, Any]:
    """max over monomials of || P_H V^alpha |_H - X^alpha ||."""
    base = _tuple(base, DEFAULT_TOL)
    if max_total_degree > d.depth - 1:
        raise DegreeExceedsDepth(f"degree {max_total_degree} needs depth > {max_total_degree}")
    n = d.base_dim
    ents = list(base)[-len(d.blocks):]
    big = dict(_monomial_products(d.blocks, max_total_degree))
    worst, arg, count = 0.0, None, 0
    for exps, xm in _monomial_products(ents, max_total_degree):
        r = op_norm(big[exps][:n, :n] - xm)
        count += 1
        if r >= worst:
            worst, arg = r, exps
    return {"max_residual": worst, "worst_monomial": list(arg or ()), "monomials": count}


# ---------------------------------------------------------------- sufficient route

def check_sufficient_conditions(t, fp: FundamentalPair, y2: np.ndarray, y3: np.ndarray) -> dict[str, float]:
    """Residuals of the seven sufficient conditions for an H-isometric dilation."""
    a, x1, _, x3 = t
    dk, f1, f2 = fp.Dk, fp.F1, fp.F2
    k, n = dk.shape
    i_k, i_n = np.eye(k), np.eye(n)

    def nrm(m):
        return op_norm(m) if m.size else 0.0

    return {
        "1'": nrm(y3 @ dk @ x3 + y2 @ dk - dk @ a),
        "2'": max(nrm(comm(y2, f2)), nrm(comm(y2, f1))),
        "3'": max(nrm(comm(y3, adj(f1))), nrm(comm(y3, adj(f2)))),
        "4'": nrm(adj(y3) @ y2 + f2 @ f1),
        "5'": max(nrm(comm(y3, f2) - comm(adj(f1), y2)), nrm(comm(y3, f1) - comm(adj(f2), y2))),
        "6'": nrm(adj(y2) @ y2 + adj(y3) @ y3 - (i_k - adj(f1) @ f1 - f2 @ adj(f2))),
        "7'": nrm(i_n - adj(a) @ a - adj(x1) @ x1 - adj(dk) @ (adj(y3) @ y3 + f2 @ adj(f2)) @ dk),
    }


def _pack(ms: Sequence[np.ndarray]) -> np.ndarray:
    return np.concatenate([np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in ms])


def _unpack(v: np.ndarray, shapes: Sequence[tuple[int, int]]) -> list[np.ndarray]:
    out, pos = [], 0
    for r, c in shapes:
        sz = r * c
        out.append((v[pos:pos + sz] + 1j * v[pos + sz:pos + 2 * sz]).reshape(r, c))
        pos += 2 * sz
    return out


def _sufficient_vector(t, fp: FundamentalPair, y2: np.ndarray, y3: np.ndarray) -> np.ndarray:
    a, x1, _, x3 = t
    dk, f1, f2 = fp.Dk, fp.F1, fp.F2
    k, n = dk.shape
    terms = [
        y3 @ dk @ x3 + y2 @ dk - dk @ a,
        comm(y2, f2), comm(y2, f1), comm(y3, adj(f1)), comm(y3, adj(f2)),
        adj(y3) @ y2 + f2 @ f1,
        comm(y3, f2) - comm(adj(f1), y2), comm(y3, f1) - comm(adj(f2), y2),
        adj(y2) @ y2 + adj(y3) @ y3 - (np.eye(k) - adj(f1) @ f1 - f2 @ adj(f2)),
        np.eye(n) - adj(a) @ a - adj(x1) @ x1 - adj(dk) @ (adj(y3) @ y3 + f2 @ adj(f2)) @ dk,
    ]
    return _pack(terms)


def _closed_form_candidates(t, fp: FundamentalPair, tol: float) -> list[tuple[str, np.ndarray, np.ndarray]]:
    a, x1, x2, x3 = t
    q = fp.basis
    k = fp.k
    out = []
    if max(op_norm(x1), op_norm(x2), op_norm(x3)) <= tol:
        # X3 = 0 makes D the identity, so the defect space is all of H
        dt = psd_sqrt(np.eye(t.dim) - adj(a) @ a, tol)
        out.append(("(T, D_T)", adj(q) @ a @ q, adj(q) @ dt @ q))
    if op_norm(a - np.eye(t.dim)) <= tol and max(op_norm(x1), op_norm(x2)) <= tol:
        out.append(("(I, 0)", np.eye(k, dtype=np.complex128), np.zeros((k, k), dtype=np.complex128)))
    return out


def solve_sufficient_Y(t, fp: FundamentalPair | None = None, tol: float = DEFAULT_TOL, budget: int = 500,
                       restarts: int = 8, seed: int = 0, return_best: bool = False
                       ) -> DilationCertificate | None:
    """Search for (Y2, Y3) on the defect space satisfying the seven sufficient conditions.

    Closed-form candidates are tried first, then Levenberg-Marquardt from
    seeded random starts.  Returns None when nothing reaches ``tol`` unless
    ``return_best`` is set.
    """
    t = _tuple(t, tol)
    t.require_commuting()
    fp = fp or solve_fundamental(t.entries[1:], tol)
    _require_hypothesis(fp, tol)
    k = fp.k
    best: DilationCertificate | None = None

    def consider(src, y2, y3):
        nonlocal best
        res = check_sufficient_conditions(t, fp, y2, y3)
        cert = DilationCertificate("sufficient", res, all(v <= tol for v in res.values()), y2, y3, source=src)
        if best is None or max(res.values()) < max(best.condition_residuals.values()):
            best = cert
        return cert.valid

    z = np.zeros((k, k), dtype=np.complex128)
    if k == 0:
        consider("empty defect", z, z)
    else:
        for src, y2, y3 in _closed_form_candidates(t, fp, tol):
            if consider(src, y2, y3):
                return best
        rng = np.random.default_rng(seed)
        shapes = [(k, k), (k, k)]
        for r in range(restarts):
            x0 = rng.standard_normal(4 * k * k) * (0.5 if r else 0.0)
            sol = least_squares(lambda v: _sufficient_vector(t, fp, *_unpack(v, shapes)), x0,
                                method="lm", max_nfev=budget * (4 * k * k + 1), xtol=1e-15, ftol=1e-15, gtol=1e-15)
            y2, y3 = _unpack(sol.x, shapes)
            if consider(f"least squares (restart {r})", y2, y3):
                return best
    if best is not None and (best.valid or return_best):
        return best
    return None


def embed_sufficient(cert: DilationCertificate, fp: FundamentalPair) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Z21 = Y3 D, Z2 = Y2, Z3 = Y3, everything else zero."""
    return [cert.Y3 @ fp.Dk], [cert.Y2, cert.Y3]


def build_H_dilation_from_Z(t, fp: FundamentalPair, zcol: Sequence[np.ndarray], zdiag: Sequence[np.ndarray],
                            depth: int = 12) -> TruncatedDilation:
    t = _tuple(t, DEFAULT_TOL)
    n, k = t.dim, fp.k
    v0 = _band_operator(n, k, depth, t[0], list(zcol), list(zdiag))
    band = max(len(zcol), len(zdiag) - 1, 1) if k else 1
    return TruncatedDilation(depth, [v0, *e_dilation_blocks(t, fp, depth)], n, k, band)


def build_H_dilation(t, fp: FundamentalPair, cert: DilationCertificate, depth: int = 12,
                     tol: float = DEFAULT_TOL) -> TruncatedDilation:
    if not cert.valid:
        raise CertificateInvalid(f"certificate residuals {cert.condition_residuals}")
    if cert.kind == "sufficient":
        zcol, zdiag = embed_sufficient(cert, fp)
    else:
        zcol, zdiag = cert.Zcol, cert.Zdiag
    return build_H_dilation_from_Z(t, fp, zcol, zdiag, depth)


def verify_H_dilation(d: TruncatedDilation, base, max_total_degree: int) -> dict[str, Any]:
    if max_total_degree > d.depth - 1:
        raise DegreeExceedsDepth(f"degree {max_total_degree} needs depth > {max_total_degree}")
    v, v1, v2, v3 = d.blocks
    s = d.safe_size()
    eye = np.eye(s)

    def cut(m):
        return m[:s, :s]

    comm_res = max(op_norm(cut(comm(a, b))) for a, b in itertools.combinations(d.blocks, 2))
    res = {
        "commutativity": comm_res,
        "V*V+V1*V1-I": op_norm(cut(adj(v) @ v + adj(v1) @ v1) - eye),
        "V1-V2*V3": op_norm(cut(v1 - adj(v2) @ v3)),
        "V3*V3-I": op_norm(cut(adj(v3) @ v3) - eye),
        "V*V+V2*V2-I": op_norm(cut(adj(v) @ v + adj(v2) @ v2) - eye),
        "norm(V2)-1": max(op_norm(cut(adj(v2) @ v2)) - 1, 0.0),
    }
    res["compression"] = verify_compression(d, base, max_total_degree)["max_residual"]
    return {"residuals": res, "max_residual": max(res.values()), "safe_size": s}


def verify_E_dilation(d: TruncatedDilation, base, max_total_degree: int) -> dict[str, Any]:
    v1, v2, v3 = d.blocks[-3:]
    s = d.safe_size()
    eye = np.eye(s)
    res = {
        "commutativity": max(op_norm(comm(a, b)) for a, b in itertools.combinations((v1, v2, v3), 2)),
        "V1-V2*V3": op_norm((v1 - adj(v2) @ v3)[:s, :s]),
        "V3*V3-I": op_norm((adj(v3) @ v3)[:s, :s] - eye),
        "compression": verify_compression(d, base, max_total_degree)["max_residual"],
    }
    return {"residuals": res, "max_residual": max(res.values()), "safe_size": s}


# ---------------------------------------------------------------- conditions 1-14

def check_main_conditions(t, fp: FundamentalPair, zcol: Sequence[np.ndarray], zdiag: Sequence[np.ndarray],
                          tol: float = DEFAULT_TOL) -> dict[str, Any]:
    """Residuals of the fourteen necessary and sufficient conditions.

    ``zcol[j]`` is Z_{j+2,1} (k x n) and ``zdiag[j]`` is Z_{j+2} (k x k); the
    sequences are taken to be zero past their ends.  Condition 12 is checked
    for every shift k >= 1.
    """
    t = _tuple(t, tol)
    a, x1, x2, x3 = t
    dk, f1, f2 = fp.Dk, fp.F1, fp.F2
    k, n = dk.shape
    zeros_c, zeros_d = np.zeros((k, n), dtype=np.complex128), np.zeros((k, k), dtype=np.complex128)
    top = max(len(zcol), len(zdiag)) + 3

    def zc(m):
        return zcol[m - 2] if 2 <= m < len(zcol) + 2 else zeros_c

    def zd(m):
        return zdiag[m - 2] if 2 <= m < len(zdiag) + 2 else zeros_d

    def nrm(m):
        return op_norm(m) if m.size else 0.0

    per: dict[str, list[tuple[int, float]]] = {str(c): [] for c in range(1, 15)}
    per["1"].append((2, nrm(zc(2) @ x3 + zd(2) @ dk - dk @ a)))
    per["3"].append((2, nrm(zc(2) @ x2 + zd(2) @ adj(f1) @ dk - adj(f1) @ dk @ a - f2 @ zc(2))))
    per["5"].append((2, nrm(comm(zd(2), f2))))
    per["7"].append((2, nrm(zc(2) @ x1 + zd(2) @ adj(f2) @ dk - adj(f2) @ dk @ a - f1 @ zc(2))))
    per["9"].append((2, nrm(comm(zd(2), f1))))
    for m in range(2, top):
        per["2"].append((m, nrm(zc(m) - zc(m + 1) @ x3 - zd(m + 1) @ dk)))
    for m in range(3, top):
        per["4"].append((m, nrm(zc(m) @ x2 + zd(m) @ adj(f1) @ dk - adj(f1) @ zc(m - 1) - f2 @ zc(m))))
        per["6"].append((m, nrm(comm(zd(m), f2) - comm(adj(f1), zd(m - 1)))))
        per["8"].append((m, nrm(zc(m) @ x1 + zd(m) @ adj(f2) @ dk - adj(f2) @ zc(m - 1) - f1 @ zc(m))))
        per["10"].append((m, nrm(comm(zd(m), f1) - comm(adj(f2), zd(m - 1)))))
    ms = range(2, top)
    s11 = sum((adj(zc(m)) @ zc(m) for m in ms), np.zeros((n, n), dtype=np.complex128))
    per["11"].append((0, nrm(np.eye(n) - adj(a) @ a - adj(x1) @ x1 - s11 - adj(dk) @ f2 @ adj(f2) @ dk)))
    for sh in range(1, top):
        p = sum((adj(zd(m)) @ zc(m + sh) for m in ms), zeros_c)
        q = sum((adj(zd(m + sh + 1)) @ zd(m) for m in ms), zeros_d)
        per["12"].append((sh, max(nrm(p), nrm(q))))
    s13 = sum((adj(zd(m)) @ zd(m) for m in ms), zeros_d)
    per["13"].append((0, nrm(s13 - (np.eye(k) - adj(f1) @ f1 - f2 @ adj(f2)))))
    p = sum((adj(zc(m)) @ zd(m) for m in ms), np.zeros((n, k), dtype=np.complex128))
    q = sum((adj(zd(m + 1)) @ zd(m) for m in ms), zeros_d)
    per["14"].append((0, max(nrm(p + adj(dk) @ f2 @ f1), nrm(q + f2 @ f1))))

    residuals = {c: max((v for _, v in rows), default=0.0) for c, rows in per.items()}
    failed = [{"condition": c, "index": i, "residual": v} for c, rows in per.items() for i, v in rows if v > tol]
    return {"residuals": residuals, "failed": failed, "valid": not failed}


# ---------------------------------------------------------------- pure model

def toeplitz_truncate(sym: SymbolPair | Sequence[np.ndarray], depth: int) -> np.ndarray:
    """depth x depth block lower bidiagonal matrix: C0 on the diagonal, C1 below it.

    A longer coefficient list gives a longer band (used for symbol products).
    """
    coeffs = [sym.C0, sym.C1] if isinstance(sym, SymbolPair) else list(sym)
    if depth < 2:
        raise WrongShape("depth must be at least 2")
    coeffs = [np.atleast_2d(np.asarray(c, dtype=np.complex128)) for c in coeffs]
    L = coeffs[0].shape[0]
    out = np.zeros((depth * L, depth * L), dtype=np.complex128)
    for off, c in enumerate(coeffs):
        for j in range(depth - off):
            out[(j + off) * L:(j + off + 1) * L, j * L:(j + 1) * L] = c
    return out


def fg_values(z1: complex, z2: complex) -> tuple[float, complex]:
    """f = (alpha + beta)/2 and g = -(z1 conj z2 / |z1 z2|)(alpha - beta)/2, g = 0 when z1 z2 = 0."""
    m1, m2 = abs(z1), abs(z2)
    alpha = np.sqrt(max(1 - (m1 - m2) ** 2, 0.0))
    beta = np.sqrt(max(1 - (m1 + m2) ** 2, 0.0))
    f = (alpha + beta) / 2
    if m1 * m2 == 0:
        return float(f), 0j
    return float(f), complex(-(z1 * np.conj(z2)) / (m1 * m2) * (alpha - beta) / 2)


def construct_symbol_from_normal_F(f1: np.ndarray, f2: np.ndarray, tol: float = DEFAULT_TOL,
                                   samples: int = 64) -> tuple[SymbolPair, dict[str, float]]:
    """(G0, G1) completing T_{F1*+F2z} to a pure isometric quadruple.

    f and g are applied at the joint eigenvalues of (F1, F2*); with that
    choice g has the phase that makes |f + g z|^2 + |F1* + F2 z|^2 = 1 on the
    circle.  Returns the symbol and the two scalar identities' residuals.
    """
    f1 = np.asarray(f1, dtype=np.complex128)
    f2 = np.asarray(f2, dtype=np.complex128)
    k = f1.shape[0]
    if k == 0:
        e = np.zeros((0, 0), dtype=np.complex128)
        return SymbolPair(e, e.copy()), {"norm_identity": 0.0, "product_identity": 0.0}
    hyp = {"[F1,F2]": op_norm(comm(f1, f2)), "normal(F1)": normality_residual(f1),
           "normal(F2)": normality_residual(f2),
           "symbol_norm-1": max(symbol_norm_max(f1, f2, samples) - 1, 0.0)}
    if any(v > tol for v in hyp.values()):
        raise HypothesisFailed("F1, F2 must be commuting normal with symbol norm at most 1", hyp)
    jd = joint_diagonalize([f1, adj(f2)], tol)
    fs, gs, r_norm, r_prod = [], [], 0.0, 0.0
    for z1, z2 in jd.eigentuples:
        f, g = fg_values(z1, z2)
        fs.append(f)
        gs.append(g)
        r_norm = max(r_norm, abs(abs(f) ** 2 + abs(g) ** 2 - (1 - abs(z1) ** 2 - abs(z2) ** 2)))
        r_prod = max(r_prod, abs(np.conj(f) * g + z1 * np.conj(z2)))
    q = jd.basis
    g0 = (q * np.asarray(fs)) @ adj(q)
    g1 = (q * np.asarray(gs)) @ adj(q)
    return SymbolPair(g0, g1), {"norm_identity": r_norm, "product_identity": r_prod}


def check_pure_H_symbol_conditions(g: SymbolPair, f1: np.ndarray, f2: np.ndarray) -> dict[str, float]:
    """The ten operator equations making (T_{G0+G1z}, T_{F1*+F2z}, T_{F2*+F1z}, T_z) a pure H-isometry.

    Condition 10 is G0* G1 + F1 F2 = 0, the z-coefficient of
    (G0+G1z)*(G0+G1z) + (F1*+F2z)*(F1*+F2z) = I.
    """
    g0, g1 = g.C0, g.C1
    k = g0.shape[0]

    def nrm(m):
        return op_norm(m) if m.size else 0.0

    return {
        "1": nrm(comm(f1, f2)),
        "2": nrm(comm(adj(f1), f1) - comm(adj(f2), f2)),
        "3": nrm(comm(adj(f2), g0)),
        "4": nrm(comm(f1, g0) - comm(g1, adj(f2))),
        "5": nrm(comm(f1, g1)),
        "6": nrm(comm(adj(f1), g0)),
        "7": nrm(comm(f2, g0) - comm(g1, adj(f1))),
        "8": nrm(comm(f2, g1)),
        "9": nrm(adj(g0) @ g0 + adj(g1) @ g1 - (np.eye(k) - f1 @ adj(f1) - adj(f2) @ f2)),
        "10": nrm(adj(g0) @ g1 + f1 @ f2),
    }


def pure_model_blocks(g: SymbolPair, f1: np.ndarray, f2: np.ndarray, depth: int) -> list[np.ndarray]:
    k = g.C0.shape[0]
    return [toeplitz_truncate(g, depth),
            toeplitz_truncate([adj(f1), f2], depth),
            toeplitz_truncate([adj(f2), f1], depth),
            toeplitz_truncate([np.zeros((k, k)), np.eye(k)], depth)]


def verify_pure_model(blocks: Sequence[np.ndarray], k: int, depth: int) -> dict[str, float]:
    """Commutativity on the whole section; isometry identities on the leading depth-1 blocks."""
    v0, v1, v2, v3 = blocks
    s = (depth - 1) * k
    eye = np.eye(s)
    return {
        "commutativity": max(op_norm(comm(a, b)) for a, b in itertools.combinations(blocks, 2)),
        "V0*V0+V1*V1-I": op_norm((adj(v0) @ v0 + adj(v1) @ v1)[:s, :s] - eye),
        "V1-V2*V3": op_norm((v1 - adj(v2) @ v3)[:s, :s]),
        "V3*V3-I": op_norm((adj(v3) @ v3)[:s, :s] - eye),
    }


def pure_contraction_dilation(t, depth: int = 12, a0: np.ndarray | None = None, a1: np.ndarray | None = None,
                              tol: float = DEFAULT_TOL, max_total_degree: int = 3) -> dict[str, Any]:
    """Pure isometric model for a quadruple whose X3 is a pure contraction.

    The model lives on depth copies of the defect space of X3*, with symbols
    from the adjoint fundamental pair (G1, G2).  (A0, A1) default to the
    symbol built from (G1, G2) when they are normal; condition 11,
    A D = D A0 + X3 D A1 with D the defect of X3*, is reported as a residual.
    Compressions W* V^alpha W are compared with X^alpha; the embedding W is
    cut after ``depth`` terms, whose tail is bounded by |X3^depth|.
    """
    t = _tuple(t, tol)
    t.require_commuting()
    a, x1, x2, x3 = t
    rho = max(abs(np.linalg.eigvals(x3))) if t.dim else 0.0
    if rho >= 1 - tol:
        raise HypothesisFailed(f"X3 is not pure (spectral radius {rho:.6g})")
    adjt = OperatorTuple([adj(x1), adj(x2), adj(x3)], tol=tol)
    gp = solve_fundamental(adjt, tol)
    g1, g2 = gp.F1, gp.F2
    k = gp.k
    _, qs, dks = defect_space(adj(x3), tol)
    lift = adj(dks)   # n x k: the defect of X3* restricted to its range

    def conditions(s: SymbolPair) -> dict[str, float]:
        c = check_pure_H_symbol_conditions(s, g1, g2)
        c["11"] = op_norm(a @ lift - lift @ s.C0 - x3 @ lift @ s.C1) if k else 0.0
        return c

    if a0 is not None and a1 is not None:
        cands = [("given", SymbolPair(np.asarray(a0, dtype=np.complex128), np.asarray(a1, dtype=np.complex128)))]
    else:
        cands = []
        try:
            cands.append(("symbol from adjoint pair", construct_symbol_from_normal_F(g1, g2, tol)[0]))
        except HypothesisFailed:
            pass
        # compress A to the defect space and fill the rest of condition 9 with A1
        c0 = adj(qs) @ a @ qs
        try:
            c1 = psd_sqrt(np.eye(k) - g1 @ adj(g1) - adj(g2) @ g2 - adj(c0) @ c0, tol)
            cands.append(("compressed A with defect", SymbolPair(c0, c1)))
        except Exception:
            pass
        if not cands:
            cands.append(("zero", SymbolPair(np.zeros((k, k), dtype=np.complex128), np.zeros((k, k), dtype=np.complex128))))
    scored = [(max(conditions(s).values(), default=0.0), i) for i, (_, s) in enumerate(cands)]
    source, sym = cands[min(scored)[1]]
    conds = conditions(sym)
    blocks = pure_model_blocks(sym, g1, g2, depth)
    w = np.vstack([dks @ np.linalg.matrix_power(adj(x3), j) for j in range(depth)]) if k else np.zeros((0, t.dim))
    tail = op_norm(np.linalg.matrix_power(x3, depth))
    worst = 0.0
    if k:
        big = dict(_monomial_products(blocks, max_total_degree))
        for exps, xm in _monomial_products(list(t), max_total_degree):
            worst = max(worst, op_norm(adj(w) @ big[exps] @ w - xm))
    return {"conditions": conds, "symbol_source": source, "defect_dim": k,
            "model": verify_pure_model(blocks, k, depth) if k else {},
            "compression_max_residual": worst, "truncation_tail": tail,
            "W*W-I": op_norm(adj(w) @ w - np.eye(t.dim)) if k else 0.0}
