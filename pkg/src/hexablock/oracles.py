"""Brute-force references and random ensembles.

Nothing in here uses the analytic shortcuts from ``scalar_domains``; these
are the slow, obviously-correct versions the shortcuts are tested against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import _kernels
from .core_linalg import DEFAULT_TOL, adj, op_norm
from .errors import NotInClosedTetrablock, UnknownEnsemble, WrongShape
from .operator_tuple import OperatorTuple, diag_tuple
from .scalar_domains import R_MAX, Verdict, tetrablock_quantity

ENSEMBLES = ("ginibre", "haar_unitary", "contraction", "commuting_normal_in_region")


@dataclass(frozen=True)
class RngConfig:
    seed: int = 0
    ensemble: str = "ginibre"

    def rng(self, *stream: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, *stream])


def grid_sup_psi(q: Sequence, grid: int = 32, shrink_rounds: int = 3, backend: str | None = None) -> float:
    """Max of |Psi_z(q)| over a polar grid on the truncated bidisc.

    Each shrink round re-grids a window four times narrower around the best
    point.  The running maximum is returned, so extra rounds never lower it.
    """
    a, x1, x2, x3 = (complex(v) for v in q)
    if tetrablock_quantity((x1, x2, x3)) < -1e-9 or abs(x1) > 1 + 1e-9:
        raise NotInClosedTetrablock("grid oracle needs (x1, x2, x3) in the closed tetrablock")
    if a == 0:
        return 0.0
    lo = np.array([0.0, 0.0, 0.0, 0.0])
    hi = np.array([R_MAX, 2 * np.pi, R_MAX, 2 * np.pi])
    best = -1.0
    width = hi - lo
    for rnd in range(shrink_rounds + 1):
        axes = [np.linspace(lo[k], hi[k], grid) for k in range(4)]
        val, *idx = _kernels.psi_abs_max(a, x1, x2, x3, *axes, backend=backend)
        best = max(best, val)
        centre = np.array([axes[k][idx[k]] for k in range(4)])
        width = width / 4 if rnd else 4 * (hi - lo) / (grid - 1)
        lo = centre - width / 2
        hi = centre + width / 2
        lo[[0, 2]] = np.clip(lo[[0, 2]], 0.0, R_MAX)
        hi[[0, 2]] = np.clip(hi[[0, 2]], 0.0, R_MAX)
    return best


def ginibre(rng: np.random.Generator, dim: int) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(rng, dim))
    d = np.diag(r)
    return q * (d / np.abs(d))


def contraction(rng: np.random.Generator, dim: int, norm: float | None = None) -> np.ndarray:
    g = ginibre(rng, dim)
    target = rng.uniform(0.0, 0.999) if norm is None else norm
    return g * (target / op_norm(g))


# scalar region samplers: each returns an (count, arity) complex array

def _pi_h(m: np.ndarray) -> tuple[complex, ...]:
    return (m[1, 0], m[0, 0], m[1, 1], m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def sample_region(name: str, rng: np.random.Generator, count: int) -> np.ndarray:
    """Points of a named scalar region.

    bH, H: pi-images of Haar unitaries / strict contractions.
    bE, E: the (a11, a22, det) part of the same.  P: (a21, tr, det) of a
    strict contraction; bP: (a, z1 + z2, z1 z2) with |z_i| = 1 and
    |a|^2 = 1 - |z1 + z2|^2 / 4.
    Gamma, bGamma: (tr, det).  B2, bB2: uniform in / on the ball.
    """
    out = []
    for _ in range(count):
        if name == "bP":
            z1, z2 = np.exp(2j * np.pi * rng.uniform(size=2))
            sv = z1 + z2
            a = math.sqrt(max(1 - abs(sv) ** 2 / 4, 0.0)) * np.exp(2j * np.pi * rng.uniform())
            out.append((a, sv, z1 * z2))
            continue
        if name in ("bH", "bE", "bGamma"):
            m = haar_unitary(rng, 2)
        elif name in ("H", "E", "P", "Gamma"):
            m = contraction(rng, 2)
        elif name in ("B2", "bB2"):
            v = rng.standard_normal(4)
            v = v[:2] + 1j * v[2:]
            v /= np.linalg.norm(v)
            if name == "B2":
                v *= rng.uniform() ** 0.25
            out.append(tuple(v))
            continue
        else:
            raise UnknownEnsemble(f"unknown region {name!r}")
        a, x1, x2, x3 = _pi_h(m)
        out.append({
            "bH": (a, x1, x2, x3), "H": (a, x1, x2, x3),
            "bE": (x1, x2, x3), "E": (x1, x2, x3),
            "P": (a, x1 + x2, x3),
            "bGamma": (x1 + x2, x3), "Gamma": (x1 + x2, x3),
        }[name])
    return np.asarray(out, dtype=np.complex128)


def random_tuple(cfg: RngConfig, dim: int, count: int, region: str = "bH") -> list[np.ndarray]:
    """``count`` matrices from the configured ensemble.

    For ``commuting_normal_in_region`` the matrices share one Haar basis and
    their joint eigentuples are drawn from ``region``; ``count`` must match
    the region's arity.
    """
    if dim > 64 or dim < 1:
        raise WrongShape("dim must be between 1 and 64")
    rng = cfg.rng(dim, count)
    if cfg.ensemble == "ginibre":
        return [ginibre(rng, dim) for _ in range(count)]
    if cfg.ensemble == "haar_unitary":
        return [haar_unitary(rng, dim) for _ in range(count)]
    if cfg.ensemble == "contraction":
        return [contraction(rng, dim) for _ in range(count)]
    if cfg.ensemble == "commuting_normal_in_region":
        pts = sample_region(region, rng, dim)
        if pts.shape[1] != count:
            raise WrongShape(f"region {region!r} has arity {pts.shape[1]}, asked for {count}")
        return diag_tuple(pts, haar_unitary(rng, dim)).entries
    raise UnknownEnsemble(f"unknown ensemble {cfg.ensemble!r}")


def _monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    return [e for e in itertools.product(range(degree + 1), repeat=nvars) if 0 < sum(e) <= degree]


def vn_falsify(t: OperatorTuple, trials: int = 200, seed: int = 0, samples: int = 20000,
               degree: int = 4, margin: float = 0.05,
               region_sampler: Callable[[np.random.Generator, int], np.ndarray] | None = None
               ) -> dict[str, Any] | None:
    """Look for a polynomial p with ||p(T)|| > (1 + margin) * sampled sup of |p| on the closed hexablock.

    One-sided: a returned polynomial is evidence the closed hexablock is not a
    spectral set for T; ``None`` proves nothing.
    """
    t.require_commuting()
    rng = np.random.default_rng(seed)
    n = len(t)
    if region_sampler is None:
        def region_sampler(g, k):
            pts = sample_region("bH", g, k // 2)
            return np.vstack([pts, sample_region("H", g, k - k // 2)]) if n == 4 else pts[:, :n]
    pts = region_sampler(rng, samples)
    monos = _monomials(n, degree)
    dim = t.dim
    powers = [[np.eye(dim, dtype=np.complex128)] for _ in range(n)]
    for i in range(n):
        for _ in range(degree):
            powers[i].append(powers[i][-1] @ t[i])
    mono_mats = [np.linalg.multi_dot([powers[i][e[i]] for i in range(n)] + [np.eye(dim)]) for e in monos]
    mono_vals = np.stack([np.prod(pts ** np.array(e), axis=1) for e in monos], axis=1)

    def candidates():
        for k, e in enumerate(monos):
            if sum(e) == 1:
                yield np.eye(1, len(monos), k).ravel().astype(np.complex128)
        for _ in range(trials):
            c = np.zeros(len(monos), dtype=np.complex128)
            pick = rng.choice(len(monos), size=rng.integers(1, 5), replace=False)
            c[pick] = rng.standard_normal(pick.size) + 1j * rng.standard_normal(pick.size)
            yield c

    for c in candidates():
        est = float(np.abs(mono_vals @ c).max())
        pt = sum(ci * m for ci, m in zip(c, mono_mats) if ci != 0)
        val = op_norm(pt)
        if val > (1 + margin) * est + 1e-12:
            terms = [{"exponents": list(e), "coefficient": [ci.real, ci.imag]}
                     for e, ci in zip(monos, c) if ci != 0]
            return {"terms": terms, "operator_norm": val, "sampled_sup": est}
    return None


def subnormality_bracket(t: OperatorTuple, kmax: int = 3, tol: float = DEFAULT_TOL) -> Verdict:
    """PSD test of sum_{p <= k} (-1)^{|p|} C(k, p) S*^p S^p for every k with entries <= kmax."""
    t.require_commuting()
    n, dim = len(t), t.dim
    idx = list(itertools.product(range(kmax + 1), repeat=n))
    pw = [[np.eye(dim, dtype=np.complex128)] for _ in range(n)]
    for i in range(n):
        for _ in range(kmax):
            pw[i].append(pw[i][-1] @ t[i])
    gram = {}
    for p in idx:
        sp = np.eye(dim, dtype=np.complex128)
        for i in range(n):
            sp = sp @ pw[i][p[i]]
        gram[p] = adj(sp) @ sp
    scale = 1 + max(op_norm(m) for m in gram.values())
    worst, worst_k = math.inf, None
    for k in idx:
        if sum(k) == 0:
            continue
        acc = np.zeros((dim, dim), dtype=np.complex128)
        for p in itertools.product(*(range(ki + 1) for ki in k)):
            coef = (-1) ** sum(p) * math.prod(math.comb(ki, pi) for ki, pi in zip(k, p))
            acc += coef * gram[p]
        lo = float(np.linalg.eigvalsh((acc + adj(acc)) / 2)[0]) if dim else 0.0
        if lo < worst:
            worst, worst_k = lo, k
    ok = worst >= -tol * scale
    return Verdict(False, ok, False, worst, {"worst_multi_index": list(worst_k or ()), "kmax": kmax}, tol)
