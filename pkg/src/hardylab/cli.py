"""Command-line front end.

Exit codes: 0 verified, 1 usage or I/O error, 2 verification failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import serialize as S
from .basis import TMBasis, basis_element, from_tm
from .bmatrix import build_b_matrix, is_b_inner_gram, is_b_inner_pointwise
from .errors import HardyLabError, HypothesisError, VerificationError
from .torus import check_property_P, doubly_commuting_check, extract_inner_generator, torus_wold
from .wold import check_axiom_A1, check_isometry, extract_structure, wold_decompose

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
MAX_REPORTED_VIOLATIONS = 20


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-7
    degree: int = 256
    samples: int = 4096
    m_max: int = 32
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.samples < 1 or self.samples & (self.samples - 1):
            raise ValueError("samples must be a power of two")
        if self.samples <= 2 * self.degree:
            raise ValueError("samples must exceed twice the degree")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _violation_json(v) -> dict:
    return {"f1": S.complex_array_json(v.f1), "g1": S.complex_array_json(v.g1),
            "f2": S.complex_array_json(v.f2), "g2": S.complex_array_json(v.g2),
            "inner_h": S.complex_array_json(v.inner_h),
            "inner_2": [S.complex_array_json(v.inner_2_first), S.complex_array_json(v.inner_2_second)],
            "gap": v.gap}


def cmd_basis(args, cfg):
    B = S.zeros_from_json(_load(args.zeros))
    basis = TMBasis(B, m_max=cfg.m_max, degree=cfg.degree)
    f = basis_element(basis, args.j, args.m)
    out = S.function_json(f)
    out["metadata"] = {"j": args.j, "m": args.m, "h2_norm": f.norm()}
    return out, EXIT_OK


def cmd_binner(args, cfg):
    B = S.zeros_from_json(_load(args.zeros))
    tup = S.tuple_from_json(_load(args.tuple))
    basis = TMBasis(B, m_max=cfg.m_max, degree=cfg.degree)
    out = {}
    if args.method in ("pointwise", "both"):
        out["pointwise"] = is_b_inner_pointwise(build_b_matrix(tup, basis), M=cfg.samples,
                                                tol=cfg.tolerance).to_json()
    if args.method in ("gram", "both"):
        out["gram"] = is_b_inner_gram(tup, basis, m_max=args.shifts, tol=cfg.tolerance).to_json()
    verdicts = [v["b_inner"] for v in out.values()]
    if args.method == "both":
        out["agreement"] = verdicts[0] == verdicts[1]
        out["b_inner"] = all(verdicts)
    else:
        out = out[args.method]
    return out, EXIT_OK if all(verdicts) else EXIT_FAILED


def _space(args, cfg):
    d = _load(args.space)
    if S.is_torus_space(d):
        return S.torus_space_from_json(d), True
    return S.space_from_json(d, degree=None), False


def _failure(exc) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    rep = getattr(exc, "report", None)
    if rep is not None:
        out["report"] = rep.to_json() if hasattr(rep, "to_json") else rep
    return out


def cmd_extract(args, cfg):
    H, torus = _space(args, cfg)
    if torus:
        raise HardyLabError("extract expects a circle space; use torus-extract")
    try:
        rep = extract_structure(H, tol=cfg.tolerance, seed=cfg.seed, samples=cfg.samples)
    except (HypothesisError, VerificationError) as exc:
        return _failure(exc), EXIT_FAILED
    return rep.to_json(), EXIT_OK


def cmd_torus_extract(args, cfg):
    H, torus = _space(args, cfg)
    if not torus:
        raise HardyLabError("torus-extract expects a torus space")
    try:
        rep = extract_inner_generator(H, tol=cfg.tolerance, seed=cfg.seed)
    except (HypothesisError, VerificationError) as exc:
        return _failure(exc), EXIT_FAILED
    return rep.to_json(), EXIT_OK


def cmd_check_axioms(args, cfg):
    H, torus = _space(args, cfg)
    if torus:
        viol = check_property_P(H, trials=args.trials, tol=cfg.tolerance, seed=cfg.seed)
        structural = doubly_commuting_check(H, seed=cfg.seed).to_json()
        ok = structural["doubly_commuting"]
    else:
        viol = check_axiom_A1(H, trials=args.trials, tol=cfg.tolerance, seed=cfg.seed)
        structural = check_isometry(H, seed=cfg.seed).to_json()
        ok = structural["isometry"]
    out = {"violation_count": len(viol),
           "violations": [_violation_json(v) for v in viol[:MAX_REPORTED_VIOLATIONS]],
           "structure": structural}
    return out, EXIT_OK if ok and not viol else EXIT_FAILED


def cmd_wold(args, cfg):
    H, torus = _space(args, cfg)
    if torus:
        return torus_wold(H, args.depth, args.depth, tol=cfg.tolerance, seed=cfg.seed).to_json(), EXIT_OK
    wl = wold_decompose(H, args.depth, tol=cfg.tolerance, seed=cfg.seed)
    basis = H.basis
    out = {"wandering_dimension": wl.dimension, "depth": wl.depth,
           "layers": [{"m": m, "dimension": len(layer),
                       "functions": [S.function_json(from_tm(v, basis, N=basis.degree)) for v in layer]}
                      for m, layer in enumerate(wl.layers)],
           "orthogonality": wl.orthogonality, "residual": wl.residual}
    return out, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-7, help="verification tolerance")
    common.add_argument("--degree", type=int, default=256, help="working Taylor degree N")
    common.add_argument("--samples", type=int, default=4096, help="boundary sample count M")
    common.add_argument("--m-max", type=int, default=32, help="largest TM shift index")
    common.add_argument("--seed", type=int, default=None, help="seed (falls back to $HARDYLAB_SEED, then 0)")
    common.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")

    p = _Parser(prog="hardylab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("basis", parents=[common], help="Taylor coefficients of e_{j,m}")
    q.add_argument("--zeros", required=True)
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.set_defaults(func=cmd_basis)

    q = sub.add_parser("binner", parents=[common], help="B-innerness verdict for a tuple")
    q.add_argument("--zeros", required=True)
    q.add_argument("--tuple", required=True)
    q.add_argument("--method", choices=["pointwise", "gram", "both"], default="both")
    q.add_argument("--shifts", type=int, default=16, help="largest B-power in the Gram criterion")
    q.set_defaults(func=cmd_binner)

    q = sub.add_parser("extract", parents=[common], help="structure of a circle space")
    q.add_argument("--space", required=True)
    q.set_defaults(func=cmd_extract)

    q = sub.add_parser("torus-extract", parents=[common], help="inner generator of a torus space")
    q.add_argument("--space", required=True)
    q.set_defaults(func=cmd_torus_extract)

    q = sub.add_parser("check-axioms", parents=[common], help="probe A1 / (P) and the shift hypotheses")
    q.add_argument("--space", required=True)
    q.add_argument("--trials", type=int, default=1000)
    q.set_defaults(func=cmd_check_axioms)

    q = sub.add_parser("wold", parents=[common], help="Wold layers of a space")
    q.add_argument("--space", required=True)
    q.add_argument("--depth", type=int, required=True)
    q.set_defaults(func=cmd_wold)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("HARDYLAB_SEED", 0))
    try:
        cfg = RunConfig(args.tol, args.degree, args.samples, args.m_max, seed, args.output)
        out, code = args.func(args, cfg)
        text = S.dumps(out)
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return code
    except (HardyLabError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"hardylab {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
