"""Membership tests for the scalar domains and the Psi_z supremum.

Points are plain tuples of complex numbers: ``(a, x1)`` or ``(s, p)`` for the
two-variable domains, ``(x1, x2, x3)`` for the tetrablock, ``(a, s, p)`` for
the pentablock and ``(a, x1, x2, x3)`` for the hexablock.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DenominatorNearZero, NotInClosedTetrablock, WrongShape

GEO_TOL = 1e-6
R_MAX = 1.0 - 1e-4


@dataclass
class Verdict:
    inside_open: bool
    inside_closed: bool
    on_distinguished_boundary: bool
    margin: float
    certificate: dict[str, Any] = field(default_factory=dict)
    tol: float = GEO_TOL

    def __post_init__(self):
        # keep the implications inside_open => inside_closed <= boundary
        self.inside_closed = bool(self.inside_closed or self.inside_open or self.on_distinguished_boundary)
        self.inside_open = bool(self.inside_open)
        self.on_distinguished_boundary = bool(self.on_distinguished_boundary)

    def to_dict(self) -> dict[str, Any]:
        return {
            "inside_open": self.inside_open,
            "inside_closed": self.inside_closed,
            "on_distinguished_boundary": self.on_distinguished_boundary,
            "margin": self.margin,
            "certificate": self.certificate,
            "tol": self.tol,
        }


def _point(p: Sequence, n: int) -> tuple[complex, ...]:
    vals = tuple(complex(v) for v in p)
    if len(vals) != n:
        raise WrongShape(f"expected {n} coordinates, got {len(vals)}")
    if not all(cmath.isfinite(v) for v in vals):
        raise WrongShape("point has non-finite coordinates")
    return vals


def in_B2_closed(p: Sequence, tol: float = GEO_TOL) -> Verdict:
    a, x1 = _point(p, 2)
    r = abs(a) ** 2 + abs(x1) ** 2
    return Verdict(
        inside_open=r < 1 - tol,
        inside_closed=r <= 1 + tol,
        on_distinguished_boundary=abs(r - 1) <= tol,
        margin=1 - r,
        certificate={"norm_squared": r},
        tol=tol,
    )


def in_Gamma(p: Sequence, tol: float = GEO_TOL) -> Verdict:
    s, q = _point(p, 2)
    lhs = abs(s - s.conjugate() * q) + abs(q) ** 2
    margin = min(1 - lhs, 2 - abs(s))
    closed = lhs <= 1 + tol and abs(s) <= 2 + tol
    on_b = closed and abs(abs(q) - 1) <= tol and abs(s - s.conjugate() * q) <= tol
    return Verdict(
        inside_open=lhs < 1 - tol and abs(s) < 2 - tol,
        inside_closed=closed,
        on_distinguished_boundary=on_b,
        margin=margin,
        certificate={"lhs": lhs},
        tol=tol,
    )


def tetrablock_quantity(x: Sequence) -> float:
    x1, x2, x3 = _point(x, 3)
    return 1 + abs(x1) ** 2 - abs(x2) ** 2 - abs(x3) ** 2 - 2 * abs(x1 - x2.conjugate() * x3)


def _bE_residuals(x1: complex, x2: complex, x3: complex) -> dict[str, float]:
    return {
        "x1_minus_conj_x2_x3": abs(x1 - x2.conjugate() * x3),
        "abs_x3_minus_1": abs(abs(x3) - 1),
        "abs_x2_excess": max(abs(x2) - 1, 0.0),
    }


def on_bE(p: Sequence, tol: float = GEO_TOL) -> Verdict:
    x1, x2, x3 = _point(p, 3)
    res = _bE_residuals(x1, x2, x3)
    ok = all(v <= tol for v in res.values())
    return Verdict(False, ok, ok, -max(res.values()), dict(res), tol)


def in_E_closed(p: Sequence, tol: float = GEO_TOL) -> Verdict:
    x1, x2, x3 = _point(p, 3)
    q = tetrablock_quantity((x1, x2, x3))
    closed = q >= -tol and abs(x1) <= 1 + tol
    bnd = closed and all(v <= tol for v in _bE_residuals(x1, x2, x3).values())
    return Verdict(
        inside_open=q > tol and abs(x1) < 1 - tol,
        inside_closed=closed,
        on_distinguished_boundary=bnd,
        margin=min(q, 1 - abs(x1)),
        certificate={"quantity": q},
        tol=tol,
    )


in_E = in_E_closed


def quadratic_roots(s: complex, p: complex) -> tuple[complex, complex]:
    """Roots of z^2 - s z + p, larger modulus first, companion via the product."""
    disc = cmath.sqrt(s * s - 4 * p)
    l1 = (s + disc) / 2 if abs(s + disc) >= abs(s - disc) else (s - disc) / 2
    l2 = p / l1 if l1 != 0 else 0j
    return l1, l2


def in_P_closed(p: Sequence, tol: float = GEO_TOL) -> Verdict:
    a, s, q = _point(p, 3)
    g = in_Gamma((s, q), tol)
    if not g.inside_closed:
        return Verdict(False, False, False, g.margin, {"gamma": g.to_dict()}, tol)
    l1, l2 = quadratic_roots(s, q)
    bound = 0.5 * abs(1 - l2.conjugate() * l1) + 0.5 * math.sqrt(
        max((1 - abs(l1) ** 2) * (1 - abs(l2) ** 2), 0.0))
    closed = abs(a) <= bound + tol
    on_b = closed and abs(abs(a) ** 2 + abs(s) ** 2 / 4 - 1) <= tol and abs(abs(q) - 1) <= tol
    return Verdict(
        inside_open=g.inside_open and abs(a) < bound - tol,
        inside_closed=closed,
        on_distinguished_boundary=on_b,
        margin=min(bound - abs(a), g.margin) if g.margin < 0 else bound - abs(a),
        certificate={"bound": bound, "lambda": [[l1.real, l1.imag], [l2.real, l2.imag]]},
        tol=tol,
    )


def psi(z: Sequence, q: Sequence, tol: float = 1e-12) -> complex:
    z1, z2 = _point(z, 2)
    a, x1, x2, x3 = _point(q, 4)
    den = 1 - x1 * z1 - x2 * z2 + x3 * z1 * z2
    if abs(den) <= tol:
        raise DenominatorNearZero(f"|denominator| = {abs(den):.3e}")
    num = a * math.sqrt(max((1 - abs(z1) ** 2) * (1 - abs(z2) ** 2), 0.0))
    return num / den


def _radial_sup_squared(x1: complex, x2: complex, x3: complex) -> float:
    """sup over the bidisc of |Psi_z|^2 / |a|^2 for x in the closed tetrablock.

    For fixed z1 the denominator is affine in z2, so the z2-supremum is the
    Moebius bound 1/(|c|^2 - |d|^2).  What is left depends on |z1| and one
    phase; aligning the phase leaves (1-r^2)/(alpha r^2 - 2 b r + gamma) whose
    stationary points solve b r^2 - (alpha+gamma) r + b = 0.
    """
    alpha = abs(x1) ** 2 - abs(x3) ** 2
    b = abs(x1 - x2.conjugate() * x3)
    gamma = 1 - abs(x2) ** 2
    if b <= 1e-15:
        return math.inf if gamma <= 0 else 1.0 / gamma
    s = (alpha + gamma) / b
    if s < 2:
        return math.inf
    rho = 2.0 / (s + math.sqrt(max(s * s - 4, 0.0)))
    den = b - alpha * rho
    return math.inf if den <= 0 else rho / den


def _z1_grid_sup_squared(x1, x2, x3, grid: int, refine: int) -> float:
    """Same reduced problem as above but maximized over a polar z1 grid."""
    r_lo, r_hi, t_lo, t_hi = 0.0, R_MAX, 0.0, 2 * np.pi
    best = -1.0
    for _ in range(refine + 1):
        r = np.linspace(r_lo, r_hi, grid)
        t = np.linspace(t_lo, t_hi, grid)
        z1 = r[:, None] * np.exp(1j * t[None, :])
        gap = np.abs(1 - x1 * z1) ** 2 - np.abs(x2 - x3 * z1) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(gap > 0, (1 - np.abs(z1) ** 2) / gap, np.inf)
        i, j = np.unravel_index(int(np.argmax(val)), val.shape)
        best = max(best, float(val[i, j]))
        dr, dt = (r_hi - r_lo) / (grid - 1), (t_hi - t_lo) / (grid - 1)
        r_lo, r_hi = max(r[i] - 2 * dr, 0.0), min(r[i] + 2 * dr, R_MAX)
        t_lo, t_hi = t[j] - 2 * dt, t[j] + 2 * dt
    return best


def sup_psi_report(q: Sequence, mode: str = "closed_form_if_available", tol: float = GEO_TOL,
                   grid: int = 32, refine: int = 3) -> dict[str, Any]:
    """Supremum of |Psi_z(q)| over the open bidisc, with the route used."""
    a, x1, x2, x3 = _point(q, 4)
    ev = in_E_closed((x1, x2, x3), tol)
    if not ev.inside_closed:
        raise NotInClosedTetrablock(f"tetrablock quantity {ev.certificate['quantity']:.3e}")
    if abs(a) == 0:
        return {"value": 0.0, "route": "zero"}
    if mode == "grid":
        v2 = _z1_grid_sup_squared(x1, x2, x3, grid, refine)
        return {"value": abs(a) * math.sqrt(v2), "route": "grid"}
    if mode not in ("closed_form_if_available", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "closed_form_if_available":
        if on_bE((x1, x2, x3), tol).on_distinguished_boundary and abs(x1) < 1 - tol:
            return {"value": abs(a) / math.sqrt(1 - abs(x1) ** 2), "route": "bE"}
        if abs(x1 * x2 - x3) <= tol:
            den = (1 - abs(x1) ** 2) * (1 - abs(x2) ** 2)
            val = math.inf if den <= 0 else abs(a) / math.sqrt(den)
            return {"value": val, "route": "product"}
    return {"value": abs(a) * math.sqrt(_radial_sup_squared(x1, x2, x3)), "route": "reduced"}


def sup_psi(q: Sequence, mode: str = "closed_form_if_available", tol: float = GEO_TOL,
            grid: int = 32, refine: int = 3) -> float:
    return sup_psi_report(q, mode, tol, grid, refine)["value"]


def bH_residuals(q: Sequence) -> dict[str, float]:
    a, x1, x2, x3 = _point(q, 4)
    res = _bE_residuals(x1, x2, x3)
    res["ball"] = abs(abs(a) ** 2 + abs(x1) ** 2 - 1)
    return res


def in_H_closed(q: Sequence, tol: float = GEO_TOL, mode: str = "closed_form_if_available",
                grid: int = 32, refine: int = 3) -> Verdict:
    a, x1, x2, x3 = _point(q, 4)
    ev = in_E_closed((x1, x2, x3), tol)
    res = bH_residuals(q)
    cert: dict[str, Any] = {"tetrablock_quantity": ev.certificate["quantity"], "bH_residuals": res}
    if not ev.inside_closed:
        return Verdict(False, False, False, ev.margin, cert, tol)
    rep = sup_psi_report(q, mode, tol, grid, refine)
    cert["sup_psi"] = rep["value"]
    cert["route"] = rep["route"]
    on_b = all(v <= tol for v in res.values())
    sup = rep["value"]
    return Verdict(
        inside_open=ev.inside_open and sup < 1 - tol,
        inside_closed=sup <= 1 + tol,
        on_distinguished_boundary=on_b,
        margin=1 - sup if math.isfinite(sup) else -math.inf,
        certificate=cert,
        tol=tol,
    )


def on_bH(q: Sequence, tol: float = GEO_TOL) -> bool:
    return all(v <= tol for v in bH_residuals(q).values())


def pi_maps(a) -> dict[str, tuple[complex, ...]]:
    m = np.asarray(a, dtype=np.complex128)
    if m.shape != (2, 2):
        raise WrongShape(f"pi maps need a 2x2 matrix, got shape {m.shape}")
    a11, a12, a21, a22 = (complex(v) for v in m.ravel())
    det = a11 * a22 - a12 * a21
    return {
        "sym": (a11 + a22, det),
        "piE": (a11, a22, det),
        "piP": (a21, a11 + a22, det),
        "piH": (a21, a11, a22, det),
    }


def _close(u: complex, v: complex, tol: float) -> bool:
    return abs(u - v) <= tol


def slice_equivalences(q: Sequence, tol: float = GEO_TOL) -> list[dict[str, Any]]:
    """Compare in_H_closed with the lower-dimensional test on every slice q lies on."""
    a, x1, x2, x3 = _point(q, 4)
    rows: list[tuple[str, bool]] = []
    if _close(x2, 0, tol) and _close(x3, 0, tol):
        rows.append(("B2", in_B2_closed((a, x1), tol).inside_closed))
    if _close(a, 0, tol) and _close(x1, x2, tol):
        rows.append(("Gamma", in_Gamma((x1 + x2, x3), tol).inside_closed))
    if _close(a, 0, tol):
        rows.append(("E", in_E_closed((x1, x2, x3), tol).inside_closed))
    if _close(x1, x2, tol):
        rows.append(("P", in_P_closed((a, x1 + x2, x3), tol).inside_closed))
    if _close(x1, 0, tol) and _close(x2, 0, tol):
        rows.append(("disc_pair", abs(a) <= 1 + tol and abs(x3) <= 1 + tol))
    if not rows:
        return []
    h = in_H_closed(q, tol).inside_closed
    return [{"slice": name, "slice_verdict": v, "hexablock_verdict": h, "agree": v == h}
            for name, v in rows]
