"""Command-line interface.

Exit codes: 0 when the tested property holds, 1 when it fails, 2 on usage,
parse or shape errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import gallery
from .errors import DomainError, PreconditionError
from .matcore import Tolerance, dump_matrix, matrix_from_dict, matrix_to_dict
from .numrange import hermitian_rank_k_range, projection_witness
from .qec import ErrorModel, converse_check, extract_isoclinic_family, kl_check, rotate_model
from .subspaces import (
    OrthProjection,
    Subspace,
    canonical_angles,
    family_isoclinic_check,
    ratio_probe,
    subspace_from_columns,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input file; always names the file."""


@dataclass(frozen=True)
class CliConfig:
    tol: float = 1e-9
    seed: int = 0
    output: Optional[Path] = None
    format: str = "json"

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError(f"--tol must be positive, got {self.tol}")

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(self.tol)


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _read_matrix(path: str) -> np.ndarray:
    try:
        return matrix_from_dict(_read_json(path))
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_subspace(path: str, tol: Tolerance) -> Subspace:
    try:
        return subspace_from_columns(_read_matrix(path), tol)
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_projection(path: str) -> OrthProjection:
    try:
        return OrthProjection.from_matrix(_read_matrix(path))
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_operators(paths: Sequence[str]) -> ErrorModel:
    """Each file is either a model ``{"operators": [...]}`` or a single matrix."""
    ops = []
    for path in paths:
        obj = _read_json(path)
        try:
            if isinstance(obj, dict) and "operators" in obj:
                ops.extend(ErrorModel.from_dict(obj).kraus)
            else:
                ops.append(matrix_from_dict(obj))
        except DomainError as exc:
            raise InputError(f"{path}: {exc}") from None
    try:
        return ErrorModel(tuple(ops))
    except DomainError as exc:
        raise InputError(f"{', '.join(paths)}: {exc}") from None


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text, encoding="utf-8")


def _emit_json(cfg: CliConfig, payload: dict) -> None:
    _emit(cfg, json.dumps({"tol": cfg.tol, **payload}, indent=2) + "\n")


def _write_json(path: Path, payload: Any) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


# --- commands -----------------------------------------------------------------


def cmd_angles(cfg: CliConfig, args) -> int:
    v = _read_subspace(args.left, cfg.tolerance)
    w = _read_subspace(args.right, cfg.tolerance)
    if v.ambient_dim != w.ambient_dim:
        raise InputError(f"{args.left}, {args.right}: row counts differ ({v.ambient_dim} vs {w.ambient_dim})")
    ang = canonical_angles(v, w)
    if cfg.format == "csv":
        lines = ["index,angle,cosine"] + [
            f"{k},{a!r},{c!r}" for k, (a, c) in enumerate(zip(ang.angles, ang.cosines))
        ]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit_json(cfg, ang.to_dict())
    return EXIT_OK


def cmd_isoclinic(cfg: CliConfig, args) -> int:
    spaces = [_read_subspace(p, cfg.tolerance) for p in args.files]
    for path, s in zip(args.files, spaces):
        if (s.ambient_dim, s.dim) != (spaces[0].ambient_dim, spaces[0].dim):
            raise InputError(f"{path}: shape {s.ambient_dim}x{s.dim} differs from {args.files[0]}")
    rep = family_isoclinic_check(spaces, cfg.tolerance)
    out = rep.to_dict()
    for entry in out["pairs"]:
        lo, hi = ratio_probe(spaces[entry["i"]], spaces[entry["j"]], args.samples, cfg.seed)
        entry["ratio_probe"] = {"min": lo, "max": hi}
    _emit_json(cfg, {"files": list(args.files), "seed": cfg.seed, **out})
    return EXIT_OK if rep.isoclinic else EXIT_FAIL


def _code_and_model(cfg: CliConfig, args) -> tuple[Subspace, ErrorModel]:
    code = _read_subspace(args.code, cfg.tolerance)
    model = _read_operators(args.errors)
    if code.ambient_dim != model.dim:
        raise InputError(f"{args.code}: code lives in C^{code.ambient_dim} but operators act on C^{model.dim}")
    return code, model


def cmd_klcheck(cfg: CliConfig, args) -> int:
    code, model = _code_and_model(cfg, args)
    rep = kl_check(code, model, cfg.tolerance)
    _emit_json(cfg, rep.to_dict())
    return EXIT_OK if rep.correctable else EXIT_FAIL


def cmd_extract(cfg: CliConfig, args) -> int:
    code, model = _code_and_model(cfg, args)
    try:
        res = extract_isoclinic_family(code, model, cfg.tolerance)
    except PreconditionError as exc:
        print(f"extract: {exc}", file=sys.stderr)
        return EXIT_FAIL
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    for i, s in enumerate(res.subspaces):
        path = outdir / f"subspace_{i}.json"
        dump_matrix(s.basis, path)
        files.append(str(path))
    payload = {"subspace_files": files, **res.to_dict()}
    _write_json(outdir / "extraction.json", {"tol": cfg.tol, **payload})
    _emit_json(cfg, payload)
    return EXIT_OK if res.family_isoclinic else EXIT_FAIL


def cmd_converse(cfg: CliConfig, args) -> int:
    p1, p2 = _read_projection(args.proj1), _read_projection(args.proj2)
    try:
        r1, r2 = converse_check(p1, p2, cfg.tolerance)
    except PreconditionError as exc:
        print(f"converse: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except DomainError as exc:
        raise InputError(f"{args.proj1}, {args.proj2}: {exc}") from None
    _emit_json(cfg, {"code_1": r1.to_dict(), "code_2": r2.to_dict()})
    return EXIT_OK if r1.correctable and r2.correctable else EXIT_FAIL


def cmd_numrange(cfg: CliConfig, args) -> int:
    a = _read_matrix(args.matrix)
    try:
        iv = hermitian_rank_k_range(a, args.k, cfg.tolerance)
    except DomainError as exc:
        raise InputError(f"{args.matrix}: {exc}") from None
    _emit_json(cfg, iv.to_dict())
    return EXIT_FAIL if iv.empty else EXIT_OK


def cmd_witness(cfg: CliConfig, args) -> int:
    p = _read_projection(args.proj)
    try:
        r = projection_witness(p, args.k, args.lam)
    except DomainError as exc:
        raise InputError(f"{args.proj}: {exc}") from None
    _emit(cfg, json.dumps(matrix_to_dict(r.matrix)) + "\n")
    return EXIT_OK


def cmd_gallery(cfg: CliConfig, args) -> int:
    what = args.example
    if what in ("bitflip", "rotate"):
        model = gallery.bitflip_model(args.p)
        if what == "rotate":
            model = rotate_model(model, args.phi)
        _emit(cfg, json.dumps(model.to_dict()) + "\n")
    elif what == "code":
        code = gallery.code_c1() if args.which == "c1" else gallery.code_c2()
        _emit(cfg, json.dumps(code.to_dict()) + "\n")
    elif what == "surface":
        p_steps = args.p_steps or args.steps
        phi_steps = args.phi_steps or args.steps
        rows = gallery.theta_surface(p_steps, phi_steps)
        if cfg.format == "json":
            _emit_json(cfg, {"rows": [{"p": p, "phi": f, "theta": t} for p, f, t in rows]})
        else:
            _emit(cfg, gallery.surface_csv(rows))
    elif what == "wong":
        a, b = gallery.wong_example_pair()
        rep = gallery.wong_equation_check(a, b, cfg.tolerance)
        payload = {
            "A": matrix_to_dict(a.m),
            "B": matrix_to_dict(b.m),
            "basis_A": gallery.graph_subspace(a).to_dict(),
            "basis_B": gallery.graph_subspace(b).to_dict(),
            "report": rep.to_dict(),
        }
        if args.outdir:
            outdir = Path(args.outdir)
            outdir.mkdir(parents=True, exist_ok=True)
            for key, value in payload.items():
                _write_json(outdir / f"{key}.json", value)
        _emit_json(cfg, payload)
        return EXIT_OK if rep.holds else EXIT_FAIL
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="absolute tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="random seed for sampling (default 0)")
    common.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="isoclinic", description="Canonical angles, isoclinic subspaces and KL checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("angles", parents=[common], help="canonical angles between two column spans")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_angles)

    p = sub.add_parser("isoclinic", parents=[common], help="pairwise isoclinic test of 2+ subspaces")
    p.add_argument("files", nargs="+")
    p.add_argument("--samples", type=int, default=100, help="random vectors per pair for the ratio probe")
    p.set_defaults(func=cmd_isoclinic)

    for name, func, helptext in (
        ("klcheck", cmd_klcheck, "Knill-Laflamme conditions for a code"),
        ("extract", cmd_extract, "isoclinic family induced by a correctable code"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("code", help="matrix file whose columns span the code")
        p.add_argument("errors", nargs="+", help="model file(s) or single-operator matrix files")
        if name == "extract":
            p.add_argument("--outdir", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("converse", parents=[common], help="KL check for a pair of isoclinic projections")
    p.add_argument("proj1")
    p.add_argument("proj2")
    p.set_defaults(func=cmd_converse)

    p = sub.add_parser("numrange", parents=[common], help="rank-k numerical range of a Hermitian matrix")
    p.add_argument("matrix")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_numrange)

    p = sub.add_parser("witness", parents=[common], help="rank-k projection R with RPR = lambda R")
    p.add_argument("proj")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(func=cmd_witness)

    g = sub.add_parser("gallery", help="worked examples")
    gsub = g.add_subparsers(dest="example", required=True)
    q = gsub.add_parser("bitflip", parents=[common], help="bit-flip model on the first of two qubits")
    q.add_argument("--p", type=float, required=True)
    q = gsub.add_parser("rotate", parents=[common], help="bit-flip model rotated by phi")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--phi", type=float, required=True)
    q = gsub.add_parser("code", parents=[common], help="basis of C1 = span{|00>,|11>} or C2 = span{|10>,|01>}")
    q.add_argument("which", choices=("c1", "c2"))
    q = gsub.add_parser("surface", parents=[common], help="theta(p, phi) grid as CSV")
    q.add_argument("--steps", type=int, default=50)
    q.add_argument("--p-steps", type=int, default=None)
    q.add_argument("--phi-steps", type=int, default=None)
    q = gsub.add_parser("wong", parents=[common], help="graph-subspace pair and its equation check")
    q.add_argument("--outdir", default=None)
    for q in gsub.choices.values():
        q.set_defaults(func=cmd_gallery)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    default_format = "csv" if getattr(args, "example", None) == "surface" else "json"
    try:
        cfg = CliConfig(args.tol, args.seed, args.out, args.format or default_format)
        return args.func(cfg, args)
    except (InputError, DomainError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
