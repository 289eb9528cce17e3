"""Command-line front end: JSON records for single checks, CSV for grids.

Exit codes are fixed: 0 ok, 1 selftest failure, 2 validation error,
3 truncation failure, 4 bound violated, 5 hypothesis failed. Standard
output carries only the payload; diagnostics go to standard error, and
nothing is written to disk unless --out is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .bounds import Inequality, InequalityId, Variant
from .config import RunConfig, load_config
from .errors import TruncationFailure, ValidationError
from .qcore import QParams
from .selftest import run_selftest
from .series import Family, Form, FunctionId, PartialSpec, eval_h, eval_h_deriv, eval_partial
from .verifier import BoundCheck, Verdict, atlas, check_inequality_sweep

__all__ = ["main", "entry"]

EXIT_OK = 0
EXIT_SELFTEST_FAIL = 1
EXIT_VALIDATION = 2
EXIT_TRUNCATION = 3
EXIT_VIOLATED = 4
EXIT_HYPOTHESIS_FAILED = 5

CONFIG_ENV_VAR = "QBP_CONFIG"

_THEOREM_IDS = {
    ("t1", "ratio"): Inequality.T1_RATIO,
    ("t1", "reciprocal"): Inequality.T1_RECIPROCAL,
    ("t2", "ratio"): Inequality.T2_DERIV_RATIO,
    ("t2", "reciprocal"): Inequality.T2_DERIV_RECIPROCAL,
    ("t3", "ratio"): Inequality.T3_RATIO,
    ("t3", "reciprocal"): Inequality.T3_RECIPROCAL,
    ("t4", "ratio"): Inequality.T4_DERIV_RATIO,
    ("t4", "reciprocal"): Inequality.T4_DERIV_RECIPROCAL,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a key = value config file "
                        f"(default: ${CONFIG_ENV_VAR} if set)")
    parser.add_argument("--out", help="write the payload to this file instead of stdout")
    parser.add_argument("--tolerance", type=float, help="verdict tolerance (default 1e-9)")
    parser.add_argument("--epsilon", type=float, help="truncation tail target (default 1e-15)")
    parser.add_argument("--max-terms", type=int, help="series term cap (default 500)")


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--radii", help="comma-separated sample radii in (0, 1)")
    parser.add_argument("--angles", type=int, help="lattice points per radius (default 64)")
    parser.add_argument("--random-points", type=int, help="seeded random points (default 256)")
    parser.add_argument("--seed", type=int, help="sample/RNG seed (default 12345)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbp",
        description="Evaluate normalized q-Bessel functions and audit their "
                    "partial-sum ratio bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate h, h', or a partial sum at one point")
    p_eval.add_argument("--family", type=int, choices=(2, 3), required=True)
    p_eval.add_argument("--q", type=float, required=True)
    p_eval.add_argument("--nu", type=float, required=True)
    p_eval.add_argument("--z-re", type=float, default=0.0)
    p_eval.add_argument("--z-im", type=float, default=0.0)
    p_eval.add_argument("--deriv", action="store_true", help="evaluate the derivative")
    p_eval.add_argument("--partial", type=int, metavar="M",
                        help="evaluate the order-M partial sum instead of the full series")
    _add_common(p_eval)

    p_check = sub.add_parser("check", help="verdict for one inequality at one (q, nu)")
    p_check.add_argument("--theorem", choices=("t1", "t2", "t3", "t4"), required=True)
    p_check.add_argument("--part", choices=("ratio", "reciprocal"), default="ratio")
    p_check.add_argument("--variant", choices=("literal", "pattern", "both"), default="both")
    p_check.add_argument("--q", type=float, required=True)
    p_check.add_argument("--nu", type=float, required=True)
    p_check.add_argument("--m", type=int, nargs="+", metavar="M",
                         help="partial-sum orders (default: configured sweep)")
    _add_common(p_check)
    _add_grid(p_check)

    p_atlas = sub.add_parser("atlas", help="CSV verdict scan over a (q, nu) rectangle")
    p_atlas.add_argument("--theorem", choices=("t1", "t2", "t3", "t4"), required=True)
    p_atlas.add_argument("--part", choices=("ratio", "reciprocal"), default="ratio")
    p_atlas.add_argument("--variant", choices=("literal", "pattern"), default="literal")
    p_atlas.add_argument("--q-min", type=float, required=True)
    p_atlas.add_argument("--q-max", type=float, required=True)
    p_atlas.add_argument("--nu-min", type=float, required=True)
    p_atlas.add_argument("--nu-max", type=float, required=True)
    p_atlas.add_argument("--steps", required=True, metavar="NxM",
                         help="grid resolution, e.g. 10x10")
    p_atlas.add_argument("--m", type=int, default=1, help="partial-sum order (default 1)")
    _add_common(p_atlas)
    _add_grid(p_atlas)

    p_self = sub.add_parser("selftest", help="oracle equivalence and invariant checks")
    p_self.add_argument("--cases", type=int, default=25,
                        help="random parameter draws for the oracle check (default 25)")
    p_self.add_argument("--seed", type=int, help="RNG seed (default: configured seed)")
    _add_common(p_self)

    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR) or None
    overrides = {
        "tolerance": getattr(args, "tolerance", None),
        "epsilon": getattr(args, "epsilon", None),
        "max_terms": getattr(args, "max_terms", None),
        "angles_per_radius": getattr(args, "angles", None),
        "random_points": getattr(args, "random_points", None),
        "seed": getattr(args, "seed", None),
    }
    radii = getattr(args, "radii", None)
    if radii is not None:
        try:
            overrides["radii"] = tuple(float(v) for v in radii.split(",") if v.strip())
        except ValueError as exc:
            raise ValidationError(f"bad --radii value {radii!r}: {exc}") from exc
    return load_config(path, overrides)


def _emit(payload: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)


def _record_json(check: BoundCheck, theorem: str, part: str) -> dict:
    return {
        "theorem": theorem,
        "part": part,
        "variant": check.id.variant.value,
        "m": check.m,
        "hypothesis_holds": check.hypothesis_holds,
        "hypothesis_margin": check.hypothesis_margin,
        "bound": check.bound_value,
        "empirical_min": check.empirical_min,
        "argmin_re": None if check.argmin is None else check.argmin.real,
        "argmin_im": None if check.argmin is None else check.argmin.imag,
        "margin": check.margin,
        "verdict": check.verdict.value,
    }


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    p = QParams(args.q, args.nu)
    z = complex(args.z_re, args.z_im)
    family = Family(args.family)
    if args.partial is not None:
        spec = PartialSpec(args.partial)
        form = Form.DERIVATIVE if args.deriv else Form.NORMALIZED
        value = eval_partial(FunctionId(family, form), p, spec, z)
        result = {"value_re": value.real, "value_im": value.imag,
                  "tail_bound": 0.0, "terms_used": spec.m + 1}
    else:
        fn = eval_h_deriv if args.deriv else eval_h
        res = fn(family, p, z, cfg.policy())
        result = {"value_re": res.value.real, "value_im": res.value.imag,
                  "tail_bound": res.tail_bound, "terms_used": res.terms_used}
    _emit(json.dumps(result), args.out)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    p = QParams(args.q, args.nu)
    ineq = _THEOREM_IDS[(args.theorem, args.part)]
    variants = [Variant.LITERAL, Variant.PATTERN] if args.variant == "both" \
        else [Variant(args.variant)]
    ms = list(args.m) if args.m else list(cfg.m_sweep)
    records = []
    checks: list[BoundCheck] = []
    for variant in variants:
        for check in check_inequality_sweep(InequalityId(ineq, variant), p, ms,
                                            cfg.grid(), cfg.policy(), cfg.tolerance):
            checks.append(check)
            records.append(_record_json(check, args.theorem, args.part))
    report = {
        "theorem": args.theorem,
        "part": args.part,
        "q": p.q,
        "nu": p.nu,
        "tolerance": cfg.tolerance,
        "m_values": ms,
        "records": records,
        "all_satisfied": all(c.verdict is Verdict.SATISFIED for c in checks),
    }
    _emit(json.dumps(report, indent=2), args.out)
    if any(c.verdict is Verdict.VIOLATED for c in checks):
        return EXIT_VIOLATED
    if any(c.verdict is Verdict.HYPOTHESIS_FAILED for c in checks):
        return EXIT_HYPOTHESIS_FAILED
    return EXIT_OK


def _parse_steps(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ValidationError(f"--steps must look like NxM, got {text!r}")
    try:
        nq, nnu = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ValidationError(f"--steps must look like NxM, got {text!r}") from exc
    if nq < 1 or nnu < 1:
        raise ValidationError(f"--steps entries must be positive, got {text!r}")
    return nq, nnu


def _cmd_atlas(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    ineq = _THEOREM_IDS[(args.theorem, args.part)]
    steps = _parse_steps(args.steps)
    report = atlas(ineq, Variant(args.variant), (args.q_min, args.q_max),
                   (args.nu_min, args.nu_max), steps, args.m,
                   cfg.grid(), cfg.policy(), cfg.tolerance)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["q", "nu", "hypothesis", "bound", "empirical_min", "margin", "verdict"])
    for cell in report.cells:
        writer.writerow([
            repr(cell.params.q),
            repr(cell.params.nu),
            "true" if cell.hypothesis_holds else "false",
            "" if cell.bound_value is None else repr(cell.bound_value),
            "" if cell.empirical_min is None else repr(cell.empirical_min),
            "" if cell.margin is None else repr(cell.margin),
            cell.verdict.value,
        ])
    for err in report.cell_errors:
        print(f"cell q={err.q} nu={err.nu}: {err.message}", file=sys.stderr)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    seed = args.seed if args.seed is not None else cfg.seed
    report = run_selftest(args.cases, seed, cfg)
    payload = {
        "cases": report.cases,
        "seed": report.seed,
        "elapsed_s": report.elapsed_s,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                   for c in report.checks],
        "passed": report.passed,
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK if report.passed else EXIT_SELFTEST_FAIL


_COMMANDS = {
    "eval": _cmd_eval,
    "check": _cmd_check,
    "atlas": _cmd_atlas,
    "selftest": _cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TruncationFailure as exc:
        print(f"truncation failure: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION


def entry() -> None:
    sys.exit(main())
