"""Dense complex linear algebra used throughout the package.

Everything here is a pure function on ``complex128`` arrays.  Residuals for
normality and commutativity are reported relative to ``1 + max norm`` so the
tolerances behave the same for small and large inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as sla
from scipy.optimize import minimize_scalar

from .errors import NotAContraction, NotCommuting, NotHermitianPSD, NotNormal, WrongShape

DEFAULT_TOL = 1e-9


def as_cmatrix(m) -> np.ndarray:
    """Coerce scalars, nested lists or arrays to a finite 2-D complex array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise WrongShape(f"expected a matrix, got an array with shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise WrongShape("matrix has non-finite entries")
    return a


def adj(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def op_norm(m) -> float:
    m = as_cmatrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def scale_of(mats: Sequence[np.ndarray]) -> float:
    return 1.0 + max((op_norm(m) for m in mats), default=0.0)


def normality_residual(m: np.ndarray) -> float:
    m = as_cmatrix(m)
    return op_norm(adj(m) @ m - m @ adj(m)) / scale_of([m]) ** 2


def commutator_residuals(mats: Sequence[np.ndarray]) -> dict[tuple[int, int], float]:
    s = scale_of(mats) ** 2
    out = {}
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            out[(i, j)] = op_norm(comm(mats[i], mats[j])) / s
    return out


def require_commuting(mats: Sequence[np.ndarray], tol: float) -> None:
    for (i, j), r in commutator_residuals(mats).items():
        if r > tol:
            raise NotCommuting(i, j, r)


def require_normal(mats: Sequence[np.ndarray], tol: float) -> None:
    for i, m in enumerate(mats):
        r = normality_residual(m)
        if r > tol:
            raise NotNormal(i, r)


@dataclass(frozen=True)
class HermEig:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray


def herm_eig(m) -> HermEig:
    m = as_cmatrix(m)
    h = (m + adj(m)) / 2
    w, v = np.linalg.eigh(h)
    return HermEig(w[::-1].copy(), v[:, ::-1].copy())


def _clamp_roundoff(w: np.ndarray) -> np.ndarray:
    # eigenvalues at rounding level would become ~1e-8 after the square root
    floor = 64 * np.finfo(float).eps * (1 + (abs(w).max() if w.size else 0.0))
    return np.where(w < floor, 0.0, w)


def defect(t, tol: float = DEFAULT_TOL) -> np.ndarray:
    """D_T = (I - T*T)^{1/2}, clamping eigenvalues in [-tol, 0) to zero."""
    t = as_cmatrix(t)
    n = t.shape[1]
    w, v = np.linalg.eigh(np.eye(n) - adj(t) @ t)
    if n and w.min() < -tol:
        raise NotAContraction(f"I - T*T has eigenvalue {w.min():.3e} < -{tol:g}")
    w = np.sqrt(_clamp_roundoff(w))
    return (v * w) @ adj(v)


def psd_sqrt(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    m = as_cmatrix(m)
    w, v = np.linalg.eigh((m + adj(m)) / 2)
    if m.size and w.min() < -tol * (1 + abs(w).max()):
        raise NotHermitianPSD(f"eigenvalue {w.min():.3e} is negative")
    return (v * np.sqrt(_clamp_roundoff(w))) @ adj(v)


def pinv_psd(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    m = as_cmatrix(m)
    if op_norm(m - adj(m)) > tol * (1 + op_norm(m)):
        raise NotHermitianPSD("matrix is not Hermitian")
    w, v = np.linalg.eigh((m + adj(m)) / 2)
    if m.size and w.min() < -tol * (1 + abs(w).max()):
        raise NotHermitianPSD(f"eigenvalue {w.min():.3e} is negative")
    inv = np.zeros_like(w)
    keep = w > tol
    inv[keep] = 1.0 / w[keep]
    return (v * inv) @ adj(v)


def range_basis(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the range of a PSD matrix (eigenvalues > tol)."""
    m = as_cmatrix(m)
    w, v = np.linalg.eigh((m + adj(m)) / 2)
    return v[:, w > tol]


def orth_complement(basis: np.ndarray, dim: int) -> np.ndarray:
    if basis.shape[1] == 0:
        return np.eye(dim, dtype=np.complex128)
    return sla.null_space(adj(basis))


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Principal angles between column spans; empty spans compare by dimension."""
    if a.shape[1] == 0 and b.shape[1] == 0:
        return np.zeros(0)
    if a.shape[1] != b.shape[1]:
        return np.full(max(a.shape[1], b.shape[1]), np.pi / 2)
    return sla.subspace_angles(a, b)


def numerical_radius(t, angles: int = 256, refine: bool = True) -> float:
    """w(T) = max over theta of lambda_max(Re(e^{i theta} T)).

    Every evaluated value is a lower bound, so the local refinement around the
    best grid angle can only raise the estimate.
    """
    t = as_cmatrix(t)
    if angles < 16:
        raise ValueError("angles must be at least 16")
    if t.size == 0:
        return 0.0
    theta = np.linspace(0.0, 2 * np.pi, angles, endpoint=False)
    rot = np.exp(1j * theta)[:, None, None] * t[None]
    herm = (rot + np.conj(np.swapaxes(rot, 1, 2))) / 2
    vals = np.linalg.eigvalsh(herm)[:, -1]
    k = int(np.argmax(vals))
    best = float(vals[k])
    if refine:
        h = 2 * np.pi / angles

        def neg(th: float) -> float:
            r = np.exp(1j * th) * t
            return -float(np.linalg.eigvalsh((r + adj(r)) / 2)[-1])

        res = minimize_scalar(neg, bounds=(theta[k] - h, theta[k] + h), method="bounded",
                              options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return max(best, 0.0)


def polar_normal(n, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """N = U|N| for normal N, with U the identity on ker N."""
    n = as_cmatrix(n)
    r = normality_residual(n)
    if r > tol:
        raise NotNormal(0, r)
    tri, z = sla.schur(n, output="complex")
    lam = np.diag(tri)
    mod = np.abs(lam)
    phase = np.where(mod > tol, lam / np.where(mod > tol, mod, 1.0), 1.0)
    u = (z * phase) @ adj(z)
    p = (z * mod) @ adj(z)
    return u, (p + adj(p)) / 2


@dataclass(frozen=True)
class JointDiag:
    basis: np.ndarray
    eigentuples: np.ndarray  # shape (dim, k): row j is the eigentuple of column j

    def reconstruct(self, i: int) -> np.ndarray:
        q = self.basis
        return (q * self.eigentuples[:, i]) @ adj(q)


def _hermitian_parts(mats: Sequence[np.ndarray]) -> list[np.ndarray]:
    parts = []
    for m in mats:
        parts.append((m + adj(m)) / 2)
        parts.append((m - adj(m)) / 2j)
    return parts


def _split(q: np.ndarray, parts: list[np.ndarray], start: int, gap: float) -> list[np.ndarray]:
    """Refine the block spanned by q using the Hermitian parts in order."""
    if q.shape[1] <= 1 or start >= len(parts):
        return [q]
    w, v = np.linalg.eigh(adj(q) @ parts[start] @ q)
    qv = q @ v
    blocks, lo = [], 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > gap:
            blocks.extend(_split(qv[:, lo:k], parts, start + 1, gap))
            lo = k
    return blocks


def joint_diagonalize(mats: Sequence, tol: float = DEFAULT_TOL, seed: int = 0) -> JointDiag:
    """Simultaneous eigenbasis of a commuting family of normal matrices.

    A random real combination of the Hermitian and skew parts separates the
    joint eigenspaces generically; clusters that stay degenerate are refined
    by diagonalizing each part in turn on the cluster.
    """
    mats = [as_cmatrix(m) for m in mats]
    dims = {m.shape for m in mats}
    if len(dims) != 1 or mats[0].shape[0] != mats[0].shape[1]:
        raise WrongShape("joint_diagonalize needs square matrices of one size")
    require_normal(mats, tol)
    require_commuting(mats, tol)
    n = mats[0].shape[0]
    scale = scale_of(mats)
    parts = _hermitian_parts(mats)
    coef = np.random.default_rng(seed).standard_normal(len(parts))
    combo = sum(c * p for c, p in zip(coef, parts))
    w, v = np.linalg.eigh(combo)
    gap = max(1e3 * tol, 1e-7) * scale * (1 + np.abs(coef).sum())
    blocks, lo = [], 0
    for k in range(1, n + 1):
        if k == n or w[k] - w[k - 1] > gap:
            blocks.extend(_split(v[:, lo:k], parts, 0, max(1e3 * tol, 1e-7) * scale))
            lo = k
    q = np.hstack(blocks) if blocks else np.zeros((0, 0), dtype=np.complex128)
    # re-orthonormalize: clusters were diagonalized separately
    q, _ = np.linalg.qr(q)
    lam = np.stack([np.einsum("ij,ik,kj->j", q.conj(), m, q) for m in mats], axis=1)
    return JointDiag(q, lam)
