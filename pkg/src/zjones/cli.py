"""Command-line front end.

Exit codes: 0 ok, 2 unknown command, 3 invalid arguments, 4 computation
error, 5 tolerance not met.  Results go to stdout as JSON (or CSV); timing
and progress go to stderr so that stdout is byte-deterministic.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import __version__

EXIT_UNKNOWN, EXIT_ARGS, EXIT_COMPUTE, EXIT_TOL = 2, 3, 4, 5
COMMANDS = ("series", "weight", "resum", "diagnose", "lorentz", "oracle", "selftest")
CONFIG_KEYS = {"precision": int, "order": int, "phi_nodes": int, "nodes": int,
               "panel": float, "tol": float, "R": float}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_ARGS, message)


def _num(x: float) -> float | str:
    """Round-trip-safe float text with 15 significant digits."""
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return float(f"{x:.15g}")


def _cnum(z) -> dict:
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def read_config(path: str | None) -> dict:
    cfg: dict = {}
    if not path:
        return cfg
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(EXIT_ARGS, f"cannot read config: {exc}")
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(EXIT_ARGS, f"bad config line {raw!r}")
        k, v = (t.strip() for t in line.split("=", 1))
        if k not in CONFIG_KEYS:
            raise CliError(EXIT_ARGS, f"unknown config key {k!r}")
        try:
            cfg[k] = CONFIG_KEYS[k](v)
        except ValueError:
            raise CliError(EXIT_ARGS, f"bad value for {k}: {v!r}")
    return cfg


def _colour(text: str | None):
    if text is None:
        return None
    try:
        return Fraction(text)
    except ValueError:
        raise CliError(EXIT_ARGS, f"colour must be rational, got {text!r}")


def _complex(text: str) -> complex:
    try:
        return complex(Fraction(text))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise CliError(EXIT_ARGS, f"not a number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zjones", description="z-coloured Jones series, weight systems and Borel resummation")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--config", help="key=value file (precision, order, phi_nodes, nodes, panel, tol, R)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--precision", type=int)

    s = sub.add_parser("series", help="exact h-series of a knot")
    common(s)
    s.add_argument("--knot", required=True)
    s.add_argument("--order", type=int)
    s.add_argument("--colour", "--color", dest="colour", help="fix s to a rational value")
    s.add_argument("--normalized", action="store_true")

    w = sub.add_parser("weight", help="sl2 weight of a chord diagram")
    common(w)
    w.add_argument("--diagram", required=True, help='label word, e.g. "1 2 1 2"')
    w.add_argument("--oracle", action="store_true", help="also run the highest-weight oracle")

    r = sub.add_parser("resum", help="Borel-Laplace resummation for a torus knot")
    common(r)
    r.add_argument("--knot", required=True)
    r.add_argument("--colour", "--color", dest="colour", required=True)
    r.add_argument("--h", required=True)
    r.add_argument("--theta", type=float)
    r.add_argument("--R", type=float)
    r.add_argument("--branches", action="store_true", help="one value per component of D(h)")
    r.add_argument("--compare", action="store_true", help="add Gaussian-integral reference values")

    d = sub.add_parser("diagnose", help="coefficients, Borel coefficients and Gevrey fit")
    common(d)
    d.add_argument("--knot", required=True)
    d.add_argument("--colour", "--color", dest="colour", required=True)
    d.add_argument("--order", type=int)

    lz = sub.add_parser("lorentz", help="Lorentz series, G-expansion or representation colours")
    common(lz)
    lz.add_argument("--knot")
    lz.add_argument("--order", type=int)
    lz.add_argument("--g-expansion", action="store_true")
    lz.add_argument("--rep")

    o = sub.add_parser("oracle", help="Kauffman-bracket series at s=2")
    common(o)
    g = o.add_mutually_exclusive_group(required=True)
    g.add_argument("--pd", help='JSON {"crossings": [[1,4,2,5], ...], "writhe": w} or a file path')
    g.add_argument("--knot", choices=("unknot", "trefoil", "fig8"))
    o.add_argument("--order", type=int)
    o.add_argument("--mirror", action="store_true")
    o.add_argument("--compare", action="store_true", help="compare with the Habiro series at s=2")

    st = sub.add_parser("selftest", help="run acceptance criteria")
    st.add_argument("--only", help="comma-separated ids, e.g. A1,A9")
    st.add_argument("--config")
    return p


def _settings(args) -> dict:
    cfg = {"order": 12, "precision": 53, "phi_nodes": 96, "nodes": 16, "panel": 0.5, "tol": 1e-10}
    cfg.update(read_config(getattr(args, "config", None)))
    for k in ("order", "precision", "R"):
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    if cfg["order"] < 0 or cfg["order"] > 400:
        raise CliError(EXIT_ARGS, "order must lie in [0, 400]")
    cfg["threads"] = int(os.environ.get("ZJONES_THREADS", "1") or 1)
    return cfg


# -- commands -------------------------------------------------------------

def cmd_series(args, cfg):
    from .knots import knot_series

    s = _colour(args.colour)
    j = knot_series(args.knot, cfg["order"], s, args.normalized)
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "coefficient"])
        for n, c in enumerate(j.series.coeffs):
            wr.writerow([n, str(c)])
        sys.stdout.write(buf.getvalue())
        return 0
    _emit({"config": _public(cfg), "knot": j.knot, "order": cfg["order"], "normalized": j.normalized,
           "colour": None if s is None else str(s), "exact": True,
           "series": j.series.to_json(), "text": [str(c) for c in j.series.coeffs]})
    return 0


def cmd_weight(args, cfg):
    from .chords import cv_weight, parse_canonicalize, verma_oracle, weight_character

    d = parse_canonicalize(args.diagram)
    out = {"diagram": str(d), "chords": d.m, "casimir_poly": str(cv_weight(d)),
           "character": str(weight_character(d)), "exact": True}
    if args.oracle:
        out["oracle"] = str(verma_oracle(d, max_chords=5))
    _emit(out)
    return 0


def _torus(text: str):
    from .knots import parse_knot
    from .torus import TorusParams

    k = parse_knot(text)
    if k.kind != "torus":
        raise CliError(EXIT_ARGS, "resummation is implemented for torus knots only")
    return TorusParams(k.m, k.p)


def cmd_resum(args, cfg):
    from .borel import ResumConfig, branch_scan, component_directions, resum
    from .torus import kashaev_closed, kashaev_quadrature

    tp = _torus(args.knot)
    s0 = _complex(args.colour)
    h = _complex(args.h)
    rc = ResumConfig(theta=args.theta if args.theta is not None else component_directions(h)[0],
                     R=cfg.get("R"), panel=cfg["panel"], nodes=cfg["nodes"],
                     phi_nodes=cfg["phi_nodes"], tol=cfg["tol"])
    results = branch_scan(tp, s0, h, rc) if args.branches else [resum(tp, s0, h, rc)]
    rows = [{"value": _cnum(r.value), "err": _num(r.error_estimate), "branch": r.branch_id,
             "theta": _num(r.theta), "R": _num(r.R)} for r in results]
    out = {"config": _public(cfg), "knot": f"torus({tp.m},{tp.p})", "colour": _cnum(s0), "h": _cnum(h),
           "resum": rows[0]}
    if args.branches:
        out["branches"] = rows
    if args.compare:
        ref = {}
        if s0.imag == 0 and s0.real == round(s0.real) and s0.real != 0:
            ref["closed"] = _cnum(kashaev_closed(tp, int(s0.real), h))
        if h.real > 0:
            v, e = kashaev_quadrature(tp, s0, h)
            ref["quadrature"] = {"value": _cnum(v), "err": _num(e)}
        out["reference"] = ref
    _emit(out)
    return 0


def cmd_diagnose(args, cfg):
    from .borel import diagnostics_rows, gevrey_diagnose
    from .knots import knot_series

    s = _colour(args.colour)
    order = args.order if args.order is not None else max(cfg["order"], 40)
    a = knot_series(args.knot, order, s).series.scalars()
    rows = diagnostics_rows(a)
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "coefficient", "float_value", "borel_coefficient", "root_test"])
        for n, ex, fl, b, rt in rows:
            wr.writerow([n, ex, f"{fl:.15e}", f"{b:.15e}", f"{rt:.15e}"])
        sys.stdout.write(buf.getvalue())
        return 0
    g = gevrey_diagnose(a)
    _emit({"knot": args.knot, "colour": str(s), "order": order,
           "gevrey": {"C_fit": _num(g.C_fit), "radius_root": _num(g.radius_root),
                      "radius_fit": _num(g.radius_fit), "superconvergent": g.superconvergent},
           "rows": [{"n": n, "a": ex, "b": _num(b), "root": _num(rt)} for n, ex, _, b, rt in rows]})
    return 0


def cmd_lorentz(args, cfg):
    from .lorentz import color_json, g_expansion, lorentz_series, rep_to_color

    if args.rep:
        c = rep_to_color(args.rep)
        out = {"rep": args.rep, "colour": color_json(c)}
        _emit(out)
        return 0
    if not args.knot:
        raise CliError(EXIT_ARGS, "lorentz needs --knot or --rep")
    if args.g_expansion:
        tp = _torus(args.knot)
        g = g_expansion(tp, max(cfg["order"], 2))
        _emit({"knot": args.knot, "order": g.factorial_series.trunc, "exact": True,
               "P_over_2pi": [str(p) for p in g.P], "series": g.factorial_series.to_json()})
        return 0
    L = lorentz_series(args.knot, cfg["order"])
    _emit({"knot": args.knot, "order": L.trunc, "exact": True, "series": L.to_json(),
           "text": [str(c) for c in L.coeffs]})
    return 0


def _load_pd(text: str):
    from .knots import PlanarDiagram

    src = text
    if os.path.exists(text):
        with open(text) as fh:
            src = fh.read()
    try:
        return PlanarDiagram.from_json(json.loads(src))
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_ARGS, f"bad PD code: {exc}")


def cmd_oracle(args, cfg):
    from . import constants
    from .knots import PD_FIG8, PD_TREFOIL, PD_UNKNOT, jones_from_bracket, jones_habiro, kauffman_jones_oracle

    pd = _load_pd(args.pd) if args.pd else {"unknot": PD_UNKNOT, "trefoil": PD_TREFOIL, "fig8": PD_FIG8}[args.knot]
    mirror = args.mirror != constants.ORACLE_MIRROR
    ser = kauffman_jones_oracle(pd, cfg["order"], mirror=mirror)
    out = {"crossings": len(pd.crossings), "jones_A": {str(k): v for k, v in jones_from_bracket(pd).items()},
           "order": cfg["order"], "series": ser.to_json(), "exact": True}
    if args.compare and args.knot:
        ref = jones_habiro(args.knot, cfg["order"], s=2).series
        out["matches_habiro"] = ser.agrees_with(ref)
    _emit(out)
    return 0


def cmd_selftest(args, cfg):
    from .acceptance import CRITERIA, run

    ids = list(CRITERIA)
    if args.only:
        ids = [x.strip().upper() for x in args.only.split(",") if x.strip()]
        unknown = [x for x in ids if x not in CRITERIA]
        if unknown:
            raise CliError(EXIT_ARGS, f"unknown criteria {unknown}")
    failed = 0
    t0 = time.perf_counter()
    sys.stdout.write(f"zjones {__version__} selftest\n")
    for cid in ids:
        c = run(cid)
        failed += not c.passed
        sys.stdout.write(c.line() + "\n")
        sys.stdout.flush()
        sys.stderr.write(f"{cid}: {c.seconds:.2f} s\n")
    sys.stdout.write(f"summary: {len(ids) - failed}/{len(ids)} passed\n")
    sys.stderr.write(f"total: {time.perf_counter() - t0:.2f} s\n")
    return EXIT_TOL if failed else 0


def _public(cfg: dict) -> dict:
    return {k: (_num(v) if isinstance(v, float) else v) for k, v in sorted(cfg.items())}


HANDLERS = {"series": cmd_series, "weight": cmd_weight, "resum": cmd_resum, "diagnose": cmd_diagnose,
            "lorentz": cmd_lorentz, "oracle": cmd_oracle, "selftest": cmd_selftest}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is not None and first not in COMMANDS:
        _emit({"error": f"unknown command {first!r}", "code": EXIT_UNKNOWN})
        return EXIT_UNKNOWN
    from .borel import (BranchCutError, DirectionError, DivergentTaylorError, PrecisionBudgetError,
                        UndefinedFitError)
    from .chords import InvalidPositionsError, MalformedDiagramError, ResourceBoundError
    from .knots import KnotSpecError, UnsupportedDiagramError
    from .lorentz import DomainError
    from .torus import ToleranceError

    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise CliError(EXIT_UNKNOWN, "no command given")
        cfg = _settings(args)
        return HANDLERS[args.command](args, cfg)
    except CliError as exc:
        _emit({"error": str(exc), "code": exc.code})
        return exc.code
    except ToleranceError as exc:
        _emit({"error": str(exc), "code": EXIT_TOL})
        return EXIT_TOL
    except (KnotSpecError, MalformedDiagramError, InvalidPositionsError, DomainError,
            UnsupportedDiagramError, DirectionError, UndefinedFitError) as exc:
        _emit({"error": str(exc), "code": EXIT_ARGS})
        return EXIT_ARGS
    except (ArithmeticError, BranchCutError, DivergentTaylorError, PrecisionBudgetError,
            ResourceBoundError) as exc:
        _emit({"error": f"{type(exc).__name__}: {exc}", "code": EXIT_COMPUTE})
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
