"""Randomized property sweeps shared by the CLI and the acceptance tests.

Every trial gets its own generator seeded from (seed, sweep id, trial index),
so results do not depend on worker count or completion order.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Callable

import numpy as np

from .core_linalg import adj, op_norm
from .dilation_lab import (build_H_dilation, check_main_conditions, embed_sufficient, solve_sufficient_Y,
                           verify_H_dilation)
from .fundamental_ops import normal_fo_properties, solve_fundamental
from .operator_tuple import OperatorTuple, diag_tuple
from .oracles import contraction, haar_unitary, sample_region
from .scalar_domains import bH_residuals, in_H_closed, pi_maps, slice_equivalences
from .tuple_classifiers import is_H_isometry, is_H_unitary, is_P_isometry, is_P_unitary


@dataclass(frozen=True)
class RunConfig:
    tol_algebraic: float = 1e-9
    tol_geometric: float = 1e-6
    grid: int = 32
    refine: int = 3
    seed: int = 0
    depth: int = 12
    output: str = "-"

    def __post_init__(self):
        if min(self.tol_algebraic, self.tol_geometric) <= 0 or self.grid < 2 or self.refine < 0:
            raise ValueError("tolerances must be positive, grid >= 2, refine >= 0")
        if self.depth < 2:
            raise ValueError("depth must be at least 2")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def trial_rng(cfg: RunConfig, sweep: str, index: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, zlib.crc32(sweep.encode()), index])


# -------------------------------------------------------------- individual trials

def trial_pi_membership(cfg: RunConfig, rng: np.random.Generator, index: int) -> dict[str, Any]:
    a = contraction(rng, 2)
    q = pi_maps(a)["piH"]
    v = in_H_closed(q, cfg.tol_geometric, grid=cfg.grid, refine=cfg.refine)
    sup = v.certificate.get("sup_psi", math.inf)
    return {"pass": v.inside_closed and sup <= 1 + cfg.tol_geometric, "sup_psi": sup, "norm": op_norm(a)}


def trial_boundary_unitary(cfg: RunConfig, rng: np.random.Generator, index: int) -> dict[str, Any]:
    u = haar_unitary(rng, 2)
    res = bH_residuals(pi_maps(u)["piH"])
    worst = max(res.values())
    return {"pass": worst <= cfg.tol_algebraic, "max_residual": worst}


SLICES = ("B2", "Gamma", "E", "P", "disc_pair")


def _slice_point(name: str, rng: np.random.Generator) -> tuple[complex, ...]:
    roll = rng.uniform()
    if roll < 0.2:
        m = 1.3 * (rng.uniform(-1, 1, (2, 2)) + 1j * rng.uniform(-1, 1, (2, 2)))
    elif roll < 0.6:
        m = haar_unitary(rng, 2) * rng.uniform(0.8, 1.2)
    else:
        m = contraction(rng, 2) * rng.uniform(0.8, 1.3)
    a, x1, x2, x3 = pi_maps(m)["piH"]
    s = x1 + x2
    return {
        "B2": (a, x1, 0, 0),
        "Gamma": (0, s / 2, s / 2, x3),
        "E": (0, x1, x2, x3),
        "P": (a, s / 2, s / 2, x3),
        "disc_pair": (a, 0, 0, x3),
    }[name]


def _classifier_slice(rng: np.random.Generator, isometry: bool) -> dict[str, Any]:
    dim = int(rng.integers(1, 5))
    region = "bP" if rng.uniform() < 0.5 else "P"
    pts = sample_region(region, rng, dim)
    if region == "bP" and rng.uniform() < 0.3:
        pts[-1] = sample_region("P", rng, 1)[0]
    t = diag_tuple(pts, haar_unitary(rng, dim))
    a, s, p = t
    h = OperatorTuple([a, s / 2, s / 2, p])
    lo, hi = (is_P_isometry, is_H_isometry) if isometry else (is_P_unitary, is_H_unitary)
    return {"slice_verdict": lo(t).answer, "hexablock_verdict": hi(h).answer}


def trial_slice_agreement(cfg: RunConfig, rng: np.random.Generator, index: int) -> dict[str, Any]:
    kinds = SLICES + ("P-unitary", "P-isometry")
    name = kinds[index % len(kinds)]
    if name in SLICES:
        q = _slice_point(name, rng)
        rows = [r for r in slice_equivalences(q, cfg.tol_geometric) if r["slice"] == name]
        r = rows[0]
        return {"pass": r["agree"], "slice": name, "point": [[z.real, z.imag] for z in map(complex, q)],
                "slice_verdict": r["slice_verdict"], "hexablock_verdict": r["hexablock_verdict"]}
    r = _classifier_slice(rng, name == "P-isometry")
    return {"pass": r["slice_verdict"] == r["hexablock_verdict"], "slice": name, **r}


def trial_classifier_routes(cfg: RunConfig, rng: np.random.Generator, index: int) -> dict[str, Any]:
    dim = int(rng.integers(1, 6))
    on_b = index % 2 == 0
    pts = sample_region("bH", rng, dim)
    if not on_b:
        j = int(rng.integers(dim))
        pts[j] = sample_region("H", rng, 1)[0]
    v = is_H_unitary(diag_tuple(pts, haar_unitary(rng, dim)), cfg.tol_algebraic)
    routes = v.certificate["routes"]
    ok = all(routes.values()) if on_b else not any(routes.values())
    if on_b:
        ok = ok and v.certificate["block_unitarity_residual"] <= cfg.tol_algebraic
    return {"pass": ok, "expected": on_b, "routes": routes,
            "block_unitarity_residual": v.certificate["block_unitarity_residual"]}


def random_normal_E_contraction(rng: np.random.Generator, dim: int, diagonal: bool = True) -> OperatorTuple:
    pts = sample_region("E", rng, dim)
    return diag_tuple(pts, None if diagonal else haar_unitary(rng, dim))


def trial_fo_properties(cfg: RunConfig, rng: np.random.Generator, index: int) -> dict[str, Any]:
    t = random_normal_E_contraction(rng, int(rng.integers(1, 7)))
    v = normal_fo_properties(t, cfg.tol_algebraic)
    res = {k: r for k, r in v.residuals.items() if k != "symbol_norm-1"}
    sym = v.residuals.get("symbol_norm-1", 0.0)
    ok = max(res.values()) <= cfg.tol_algebraic and sym <= cfg.tol_geometric
    return {"pass": ok, "max_residual": max(res.values()), "symbol_excess": sym}


def remark_example(rng: np.random.Generator, which: str) -> OperatorTuple:
    dim = int(rng.integers(2, 5))
    z = np.zeros((dim, dim), dtype=np.complex128)
    if which == "T000":
        u = int(rng.integers(1, dim + 1))
        t = np.zeros((dim, dim), dtype=np.complex128)
        t[:u, :u] = haar_unitary(rng, u)
        w = haar_unitary(rng, dim)
        return OperatorTuple([w @ t @ adj(w), z, z, z])
    if which == "I00T":
        return OperatorTuple([np.eye(dim), z, z, contraction(rng, dim)])
    return OperatorTuple([z, z, z, np.eye(dim)])


def trial_dilation_roundtrip(cfg: RunConfig, rng: np.random.Generator, index: int) -> dict[str, Any]:
    which = ("T000", "I00T", "000I")[index % 3]
    t = remark_example(rng, which)
    tol = cfg.tol_algebraic
    fp = solve_fundamental(t.entries[1:], tol)
    cert = solve_sufficient_Y(t, fp, tol)
    if which == "000I":
        return {"pass": cert is None, "example": which, "certificate": cert is not None}
    if cert is None:
        return {"pass": False, "example": which, "certificate": False}
    d = build_H_dilation(t, fp, cert, cfg.depth)
    ver = verify_H_dilation(d, t, min(4, cfg.depth - 1))
    zc, zd = embed_sufficient(cert, fp)
    main = check_main_conditions(t, fp, zc, zd, tol)
    worst = max(cert.condition_residuals.values())
    ok = worst <= tol and ver["max_residual"] <= tol and main["valid"]
    return {"pass": ok, "example": which, "source": cert.source, "certificate_residual": worst,
            "dilation_residual": ver["max_residual"], "main_conditions_valid": main["valid"]}


SWEEPS: dict[str, Callable[[RunConfig, np.random.Generator, int], dict[str, Any]]] = {
    "pi-membership": trial_pi_membership,
    "boundary-unitary": trial_boundary_unitary,
    "slice-agreement": trial_slice_agreement,
    "classifier-routes": trial_classifier_routes,
    "fo-properties": trial_fo_properties,
    "dilation-roundtrip": trial_dilation_roundtrip,
}


def _run_one(args: tuple[str, RunConfig, int]) -> dict[str, Any]:
    name, cfg, index = args
    rec = SWEEPS[name](cfg, trial_rng(cfg, name, index), index)
    return {"trial": index, **rec}


def run_sweep(name: str, trials: int, cfg: RunConfig, workers: int = 1) -> tuple[list[dict[str, Any]], dict[str, Any]]:
    if name not in SWEEPS:
        raise KeyError(name)
    jobs = [(name, cfg, i) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_run_one, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        records = [_run_one(j) for j in jobs]
    passed = sum(1 for r in records if r["pass"])
    summary = {"summary": True, "sweep": name, "trials": trials, "passed": passed,
               "failed": trials - passed, "config": cfg.to_dict()}
    return records, summary
