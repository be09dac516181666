"""Command-line front end.

Exit codes: 0 true / pass, 1 false / fail, 2 usage or precondition failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

import numpy as np

from . import decomposition, dilation_lab, fundamental_ops, oracles, scalar_domains, tuple_classifiers
from .errors import HexablockError
from .io import cmatrix_to_json, dumps, point_from_json, tuple_from_json
from .sweeps import SWEEPS, RunConfig, run_sweep

CLASSIFIERS = {
    "gamma-unitary": tuple_classifiers.is_gamma_unitary,
    "gamma-isometry": tuple_classifiers.is_gamma_isometry,
    "E-unitary": tuple_classifiers.is_E_unitary,
    "E-isometry": tuple_classifiers.is_E_isometry,
    "B2-unitary": tuple_classifiers.is_B2_unitary,
    "B2-isometry": tuple_classifiers.is_B2_isometry,
    "P-unitary": tuple_classifiers.is_P_unitary,
    "P-isometry": tuple_classifiers.is_P_isometry,
    "H-unitary": tuple_classifiers.is_H_unitary,
    "H-isometry": tuple_classifiers.is_H_isometry,
}


class UsageError(Exception):
    pass


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--tol", type=float, default=d(1e-9), help="algebraic tolerance")
    p.add_argument("--geo-tol", type=float, default=d(1e-6), help="geometric tolerance")
    p.add_argument("--grid", type=int, default=d(32))
    p.add_argument("--refine", type=int, default=d(3))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--depth", type=int, default=d(12))
    p.add_argument("--output", default=d("-"), help="output path, '-' for stdout")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="pretty", action="store_false", default=d(False))
    g.add_argument("--pretty", dest="pretty", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hexablock", description=__doc__)
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("point", parents=[common], help="domain verdicts for a scalar point")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--c2", help="[a, x1] or [s, p]")
    g.add_argument("--c3", help="[x1, x2, x3] or [a, s, p]")
    g.add_argument("--c4", help="[a, x1, x2, x3]")

    sp = sub.add_parser("sup", parents=[common], help="supremum of |Psi_z| over the bidisc")
    sp.add_argument("--c4", required=True)
    sp.add_argument("--mode", choices=["closed_form_if_available", "exact", "grid"],
                    default="closed_form_if_available")
    sp.add_argument("--oracle", action="store_true", help="also run the brute-force 4-D grid")

    for name, hlp in (("classify", "classify a tuple"), ("fo", "fundamental operators"),
                      ("dilate", "build and verify a truncated dilation"), ("decompose", "canonical decomposition")):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("--tuple", required=True, help="tuple JSON file, '-' for stdin")
        if name == "classify":
            sp.add_argument("--kind", required=True, choices=sorted(CLASSIFIERS) + ["H-contraction-normal"])
        if name == "dilate":
            sp.add_argument("--route", required=True, choices=["E", "H-sufficient", "H-main", "pure-model"])
            sp.add_argument("--degree", type=int, default=None, help="max monomial degree to verify")
            sp.add_argument("--blocks-dir", default=None, help="write block matrices as JSON here")
        if name == "decompose":
            sp.add_argument("--normal", action="store_true", help="use the commuting-normal route")

    sp = sub.add_parser("sweep", parents=[common], help="randomized property sweep (JSON lines)")
    sp.add_argument("name")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--workers", type=int, default=1)
    return p


def _config(args) -> RunConfig:
    try:
        return RunConfig(args.tol, args.geo_tol, args.grid, args.refine, args.seed, args.depth, args.output)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _read_tuple(path: str, tol: float):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        return tuple_from_json(json.loads(text), tol)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read tuple: {exc}") from exc


def cmd_point(args, cfg: RunConfig) -> tuple[dict, int]:
    tol = cfg.tol_geometric
    if args.c2:
        q = point_from_json(args.c2)
        out = {"B2": scalar_domains.in_B2_closed(q, tol), "Gamma": scalar_domains.in_Gamma(q, tol)}
    elif args.c3:
        q = point_from_json(args.c3)
        out = {"E": scalar_domains.in_E_closed(q, tol), "bE": scalar_domains.on_bE(q, tol),
               "P": scalar_domains.in_P_closed(q, tol)}
    else:
        q = point_from_json(args.c4)
        h = scalar_domains.in_H_closed(q, tol, grid=cfg.grid, refine=cfg.refine)
        out = {"H": h, "bH": h.on_distinguished_boundary, "slices": scalar_domains.slice_equivalences(q, tol)}
    return {"point": [complex(z) for z in q], "verdicts": out}, 0


def cmd_sup(args, cfg: RunConfig) -> tuple[dict, int]:
    q = point_from_json(args.c4)
    rep = scalar_domains.sup_psi_report(q, args.mode, cfg.tol_geometric, cfg.grid, cfg.refine)
    if args.oracle:
        rep["grid_oracle"] = oracles.grid_sup_psi(q, cfg.grid, cfg.refine)
    return rep, 0 if rep["value"] <= 1 + cfg.tol_geometric else 1


def cmd_classify(args, cfg: RunConfig) -> tuple[dict, int]:
    t = _read_tuple(args.tuple, cfg.tol_algebraic)
    if args.kind == "H-contraction-normal":
        v = tuple_classifiers.is_H_contraction_normal(t, cfg.tol_algebraic, cfg.tol_geometric)
    else:
        v = CLASSIFIERS[args.kind](t, cfg.tol_algebraic)
    return {"kind": args.kind, "verdict": v}, 0 if v.answer else 1


def cmd_fo(args, cfg: RunConfig) -> tuple[dict, int]:
    t = _read_tuple(args.tuple, cfg.tol_algebraic)
    if len(t) == 4:
        t = type(t)(t.entries[1:], tol=t.tol)
    fp = fundamental_ops.solve_fundamental(t, cfg.tol_algebraic)
    pair = fundamental_ops.verify_fo_pair_equations(t, fp)
    rad = fundamental_ops.fo_radius_check(fp)
    ok = max([*fp.residuals.values(), *pair.values()]) <= 10 * cfg.tol_algebraic and rad <= 1 + cfg.tol_geometric
    return {"fundamental_pair": fp, "pair_equations": pair, "max_numerical_radius": rad}, 0 if ok else 1


def _write_blocks(d: dilation_lab.TruncatedDilation, folder: str | None) -> list[str]:
    if not folder:
        return []
    os.makedirs(folder, exist_ok=True)
    paths = []
    for i, b in enumerate(d.blocks):
        path = os.path.join(folder, f"block{i}.json")
        with open(path, "w") as fh:
            json.dump(cmatrix_to_json(b), fh)
        paths.append(path)
    return paths


def cmd_dilate(args, cfg: RunConfig) -> tuple[dict, int]:
    tol = cfg.tol_algebraic
    t = _read_tuple(args.tuple, tol)
    deg = args.degree if args.degree is not None else min(4, cfg.depth - 1)
    out: dict[str, Any] = {"route": args.route, "depth": cfg.depth}
    if args.route == "pure-model":
        rep = dilation_lab.pure_contraction_dilation(t, cfg.depth, tol=tol, max_total_degree=deg)
        worst = max([*rep["conditions"].values(), *rep["model"].values()], default=0.0)
        out.update(rep)
        return out, 0 if worst <= tol and rep["compression_max_residual"] <= 10 * tol + rep["truncation_tail"] else 1
    tri = type(t)(t.entries[-3:], tol=t.tol)
    fp = fundamental_ops.solve_fundamental(tri, tol)
    if args.route == "E":
        d = dilation_lab.build_E_dilation(tri, fp, cfg.depth, tol)
        ver = dilation_lab.verify_E_dilation(d, tri, deg)
    else:
        if len(t) != 4:
            raise UsageError("H routes need a quadruple")
        cert = dilation_lab.solve_sufficient_Y(t, fp, tol, seed=cfg.seed, return_best=True)
        out["certificate"] = cert
        if args.route == "H-main":
            zc, zd = dilation_lab.embed_sufficient(cert, fp)
            out["main_conditions"] = dilation_lab.check_main_conditions(t, fp, zc, zd, tol)
        if not cert.valid:
            return out, 1
        d = dilation_lab.build_H_dilation(t, fp, cert, cfg.depth, tol)
        ver = dilation_lab.verify_H_dilation(d, t, deg)
    out["dilation"] = d.to_dict()
    out["verification"] = ver
    out["block_files"] = _write_blocks(d, args.blocks_dir)
    ok = ver["max_residual"] <= tol and out.get("main_conditions", {"valid": True})["valid"]
    return out, 0 if ok else 1


def cmd_decompose(args, cfg: RunConfig) -> tuple[dict, int]:
    t = _read_tuple(args.tuple, cfg.tol_algebraic)
    fn = decomposition.canonical_decompose_normal if args.normal else decomposition.canonical_decompose
    sr = fn(t, cfg.tol_algebraic, cfg.tol_geometric, cfg.seed)
    return {"split": sr}, 0 if sr.reduction_residual <= 10 * cfg.tol_algebraic else 1


def cmd_sweep(args, cfg: RunConfig, emit) -> int:
    if args.name not in SWEEPS:
        raise UsageError(f"unknown sweep {args.name!r}; choose from {', '.join(SWEEPS)}")
    records, summary = run_sweep(args.name, args.trials, cfg, args.workers)
    for r in records:
        emit(r, pretty=False)
    emit(summary, pretty=False)
    return 0 if summary["failed"] == 0 else 1


COMMANDS = {"point": cmd_point, "sup": cmd_sup, "classify": cmd_classify, "fo": cmd_fo,
            "dilate": cmd_dilate, "decompose": cmd_decompose}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    out = sys.stdout if args.output == "-" else open(args.output, "w")

    def emit(obj, pretty=args.pretty):
        out.write(dumps(obj, pretty) + "\n")

    try:
        cfg = _config(args)
        if args.command == "sweep":
            return cmd_sweep(args, cfg, emit)
        payload, code = COMMANDS[args.command](args, cfg)
        payload["config"] = cfg.to_dict()
        emit(payload)
        return code
    except (HexablockError, UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
