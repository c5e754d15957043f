"""Command-line interface.

Subcommands:
  ree       compute E_r / E_Gamma for one state (JSON or text)
  curve     emit CSV curves p -> E_r for the 2(x)N family
  geometry  print vertex / landmark / area-ratio tables for 3(x)N
  verify    run a closed-form-vs-oracle verification campaign

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 unsupported spin family, 4 I/O error.  All numbers are emitted with 17
significant digits; infinities appear as the literal string "inf".
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .angular import Spin
from .closed_form import (
    REEResult,
    UnsupportedFamilyError,
    p_of_state,
    ree_dispatch,
    state_2xn,
)
from .geometry import (
    landmark_points,
    polygon_area_ratio,
    ppt_image_vertices,
    ppt_polygon,
    simplex_vertices,
)
from .oracle import (
    minimize_kl_over_interval,
    minimize_kl_over_polygon,
    verify_closed_form,
)
from .states import make_ri_state, raw_to_normalized

SCHEMA_VERSION = "ri-entropy/1"

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_VALIDATION = 2
EXIT_UNSUPPORTED = 3
EXIT_IO = 4


def parse_spin(text: str) -> Spin:
    """Accept spins as 'n/2' fractions or decimals with exact halves."""
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse spin {text!r}") from exc
    if (2 * frac).denominator != 1:
        raise ValueError(f"spin {text!r} is not an exact half-integer")
    return Spin(int(2 * frac))


def format_spin(j: Spin) -> str:
    return f"{j.twice_j}/2" if j.twice_j % 2 else str(j.twice_j // 2)


def _floats(text: str, n: int, label: str):
    parts = text.split(",")
    if len(parts) != n:
        raise ValueError(f"{label} needs {n} comma-separated values, got {text!r}")
    return [float(p) for p in parts]


# ---------------------------------------------------------------------------
# JSON emission with fixed float formatting


def _fmt_float(v: float) -> str:
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    if math.isnan(v):
        return '"nan"'
    return format(v, ".17g")


def dumps_record(obj) -> str:
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {dumps_record(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps_record(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _record(command: dict, result: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "result": result}


# ---------------------------------------------------------------------------
# ree


def _result_payload(res: REEResult) -> dict:
    payload = {
        "quantity": res.quantity,
        "value": res.value,
        "region": str(res.region),
        "minimizer_alphas": list(res.minimizer.alphas),
    }
    if res.aux is not None:
        payload["aux"] = {
            res.aux.branch: res.aux.root,
            "t1" if res.aux.branch == "a" else "t2": res.aux.t,
            "minimizer_point": [res.aux.minimizer_point.x, res.aux.minimizer_point.y],
        }
    else:
        payload["aux"] = None
    if res.quantity == "E_Gamma":
        payload["note"] = ("E_Gamma is the minimum over PPT states: a lower bound "
                          "of E_r and an upper bound of distillable entanglement")
    return payload


def cmd_ree(args) -> int:
    j1, j2 = parse_spin(args.j1), parse_spin(args.j2)
    given = [opt for opt in (args.p, args.alpha, args.normalized) if opt is not None]
    if len(given) != 1:
        raise ValueError("provide exactly one of --p, --alpha, --normalized")

    if args.p is not None:
        if j1.twice_j != 1:
            raise ValueError("--p applies to the 2(x)N family (j1 = 1/2) only")
        state = state_2xn(j2, float(args.p))
    elif args.alpha is not None:
        state = make_ri_state(j1, j2, _floats(args.alpha, _n_alphas(j1, j2), "--alpha"))
    else:
        if j1.twice_j != 2:
            raise ValueError("--normalized applies to 3(x)N systems (j1 = 1) only")
        from .states import NormalizedCoords, normalized_to_raw
        x, y = _floats(args.normalized, 2, "--normalized")
        state = normalized_to_raw(j2.dim, NormalizedCoords(x, y))
        if j2 != state.j2:
            raise ValueError("inconsistent j2")

    command = {"name": "ree", "j1": format_spin(j1), "j2": format_spin(j2),
               "p": args.p, "alpha": args.alpha, "normalized": args.normalized,
               "oracle": bool(args.oracle), "force_oracle": bool(args.force_oracle)}

    if args.force_oracle:
        report = _oracle_report(state)
        result = {"quantity": "oracle_min", "value": report.optimum_value,
                  "optimum_point": list(report.optimum_point),
                  "iterations": report.iterations, "converged": report.converged}
    else:
        res = ree_dispatch(j1, j2, state.alphas())
        result = _result_payload(res)
        if args.oracle:
            report = _oracle_report(state)
            result["oracle"] = {
                "value": report.optimum_value,
                "optimum_point": list(report.optimum_point),
                "iterations": report.iterations,
                "converged": report.converged,
                "abs_diff": abs(report.optimum_value - res.value),
            }

    _emit(_record(command, result), args.format)
    return EXIT_OK


def _n_alphas(j1: Spin, j2: Spin) -> int:
    lo, hi = sorted((j1.twice_j, j2.twice_j))
    return lo + 1


def _oracle_report(state):
    if state.j1.twice_j == 1:
        return minimize_kl_over_interval(state.j2, p_of_state(state))
    if state.j1.twice_j == 2:
        N = state.j2.dim
        return minimize_kl_over_polygon(N, raw_to_normalized(state), ppt_polygon(N))
    raise UnsupportedFamilyError("oracle minimization is implemented for j1 in {1/2, 1} only")


def _emit(record: dict, fmt: str):
    if fmt == "json":
        print(dumps_record(record))
    else:
        _emit_text(record["result"], indent="")


def _emit_text(obj, indent: str, key: str | None = None):
    label = f"{key}: " if key else ""
    if isinstance(obj, dict):
        if key:
            print(f"{indent}{key}:")
            indent += "  "
        for k, v in obj.items():
            _emit_text(v, indent, k)
    elif isinstance(obj, (list, tuple)):
        print(f"{indent}{label}" + ", ".join(
            _fmt_float(v).strip('"') if isinstance(v, float) else str(v) for v in obj))
    elif isinstance(obj, float):
        print(f"{indent}{label}{_fmt_float(obj).strip(chr(34))}")
    else:
        print(f"{indent}{label}{obj}")


# ---------------------------------------------------------------------------
# curve


def cmd_curve(args) -> int:
    if args.family != "2xN":
        raise ValueError("only --family 2xN emits curves")
    js = [parse_spin(tok) for tok in args.j_list.split(",")]
    if args.points < 2:
        raise ValueError("--points must be at least 2")
    from .closed_form import ree_2xn
    try:
        out = open(args.out, "w", newline="")
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    with out:
        out.write("p,j,E_r\n")
        for j in js:
            for k in range(args.points):
                p = k / (args.points - 1)
                val = ree_2xn(j, p).value
                out.write(f"{format(p, '.17g')},{format_spin(j)},{format(val, '.17g')}\n")
    return EXIT_OK


class _IOFailure(OSError):
    pass


# ---------------------------------------------------------------------------
# geometry


def cmd_geometry(args) -> int:
    N = args.N
    command = {"name": "geometry", "N": N, "table": args.table}
    if args.table == "vertices":
        A, B, C = simplex_vertices(N)
        Ap, Bp, Cp = ppt_image_vertices(N)
        a, d, ap, e = ppt_polygon(N)
        result = {
            "simplex": {"A": list(A), "B": list(B), "C": list(C)},
            "theta2_images": {"A'": list(Ap), "B'": list(Bp), "C'": list(Cp)},
            "ppt_polygon": {"A": list(a), "D": list(d), "A'": list(ap), "E": list(e)},
        }
    elif args.table == "landmarks":
        F, G, H = landmark_points(N)
        result = {"F": list(F), "G": list(G), "H": list(H)}
    else:
        result = {"area_ratio": polygon_area_ratio(N)}
    _emit(_record(command, result), args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    family = args.family
    param = parse_spin(args.param).j if family == "2xN" else int(args.param)
    summary = verify_closed_form(family, param, samples=args.samples, seed=args.seed,
                                 tol=args.tol, grid=args.grid, refine_iters=args.iters)
    command = {"name": "verify", "family": family, "param": args.param,
               "samples": args.samples, "seed": args.seed, "tol": args.tol}
    result = {"passed": summary.passed, "max_abs_diff": summary.max_abs_diff,
              "worst_input": list(summary.worst_input)}
    _emit(_record(command, result), args.format)
    return EXIT_OK if summary.passed else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ri-entropy",
                                     description="Relative entropy of entanglement "
                                                 "for rotationally invariant spin states")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("ree", help="compute E_r / E_Gamma for one state")
    p.add_argument("--j1", required=True)
    p.add_argument("--j2", required=True)
    p.add_argument("--p", type=float, default=None,
                   help="lower-block weight (2xN family)")
    p.add_argument("--alpha", default=None, help="comma-separated raw alpha vector")
    p.add_argument("--normalized", default=None,
                   help="barycentric x,y coordinates (3xN family)")
    p.add_argument("--oracle", action="store_true",
                   help="append the oracle cross-check to the output")
    p.add_argument("--force-oracle", action="store_true",
                   help="report the oracle minimization instead of the closed form")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_ree)

    p = sub.add_parser("curve", help="emit CSV curves for the 2xN family")
    p.add_argument("--family", default="2xN")
    p.add_argument("--j-list", default="1/2,1,3/2")
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("geometry", help="vertex / landmark / area-ratio tables")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--table", choices=("vertices", "landmarks", "area-ratio"),
                   default="vertices")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("verify", help="closed-form vs oracle campaign")
    p.add_argument("--family", choices=("2xN", "3x3", "3xN-odd", "3xN-even"),
                   required=True)
    p.add_argument("--param", required=True, help="j for 2xN, N otherwise")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--iters", type=int, default=40)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedFamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except _IOFailure as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
