"""Command-line front end: ``toric-index <subcommand> ...``.

Exit codes: 0 success, 1 domain error (irregular level, failed check,
unresolved index, violated precondition), 2 usage or parse error.

Weights are comma-separated integers (``--xi=1,-1``; use the ``=`` form when
the value starts with a minus sign).  Rationals are written ``p/q``.  The
default grid size of the model commands comes from ``TORIC_INDEX_GRID_N``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Sequence

from . import character as ch
from . import dirac1d as dm
from .lattice_core import LatticeError
from .polytope import (
    PolytopeError,
    PolytopeParseError,
    format_polytope,
    is_bounded,
    lattice_points,
    load_polytope,
)
from .quantize import (
    SCHEMA_VERSION,
    QuantizeError,
    localization_report,
    quantize,
    reduce,
    verify_qr,
)

GRID_ENV = "TORIC_INDEX_GRID_N"


class UsageError(Exception):
    pass


def _weight(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}")


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(p) for p in text.split(",") if p.strip()]


def _default_n() -> int:
    raw = os.environ.get(GRID_ENV)
    if raw is None or raw.strip() == "":
        return dm.DEFAULT_N
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{GRID_ENV} must be an integer, got {raw!r}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _load(path: str):
    try:
        return load_polytope(path)
    except OSError as exc:
        raise UsageError(f"cannot read polytope file: {exc}")
    except PolytopeParseError as exc:
        raise UsageError(f"{path}: {exc}")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_quantize(args, out) -> int:
    p = _load(args.polytope)
    q = quantize(p, strict=not args.allow_non_delzant)
    if args.eval:
        values = [(w, ch.evaluate(q, w)) for w in args.eval]
        if args.format == "json":
            out.write(_dump({"schema": SCHEMA_VERSION, "kind": "evaluate",
                             "values": [{"weight": list(w), "value": v} for w, v in values]}) + "\n")
        else:
            for w, v in values:
                out.write(f"{v}\n" if len(values) == 1 else f"{','.join(map(str, w))}\t{v}\n")
        return 0
    if args.box:
        pts = lattice_points(p, box=args.box)
    elif is_bounded(p):
        pts = lattice_points(p)
    else:
        raise UsageError("unbounded polyhedron: pass --eval or --box LO:HI to list support points")
    if args.format == "json":
        out.write(_dump({"schema": SCHEMA_VERSION, "kind": "quantize",
                         "character": ch.to_dict(q), "support": [list(w) for w in pts],
                         "support_size": len(pts)}) + "\n")
    else:
        for w in pts:
            out.write(",".join(map(str, w)) + "\n")
        out.write(f"# {len(pts)} weight(s) with multiplicity 1\n")
    return 0


def cmd_reduce(args, out) -> int:
    p = _load(args.polytope)
    r = reduce(p, args.xi, args.level)
    if args.format == "json":
        out.write(_dump({"schema": SCHEMA_VERSION, "kind": "reduce", "xi": list(args.xi),
                         "level": args.level, "polytope": r.to_dict()}) + "\n")
    else:
        out.write(format_polytope(r))
    return 0


def cmd_verify_qr(args, out) -> int:
    p = _load(args.polytope)
    rep = verify_qr(p, args.xi, args.level)
    if args.format == "json":
        out.write(_dump(rep.to_dict()) + "\n")
    else:
        status = "pass" if rep.passed else ("irregular" if not rep.regular else "FAIL")
        out.write(f"xi={','.join(map(str, rep.xi))} level={rep.level} regular={rep.regular} "
                  f"lhs={rep.lhs} rhs={rep.rhs} {status}\n")
    return 0 if rep.passed else 1


def cmd_localize(args, out) -> int:
    p = _load(args.polytope)
    rep = localization_report(p, args.rho)
    if args.format == "json":
        out.write(_dump(rep.to_dict()) + "\n")
    else:
        out.write(f"rho={','.join(map(str, rep.rho))} fiber={rep.fiber_contribution} "
                  f"total={rep.total}\n")
        for t in rep.boundary_terms:
            out.write(f"  {t.label} alpha=({','.join(_fmt(c) for c in t.alpha)}) "
                      f"contribution={t.contribution} [{t.justification}]\n")
    return 0


def _model_spec(args) -> dm.ModelSpec1D:
    if args.model:
        try:
            with open(args.model, encoding="utf-8") as fh:
                spec = dm.parse_model_spec(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read model file: {exc}")
        except dm.ModelError as exc:
            raise UsageError(f"{args.model}: {exc}")
    else:
        missing = [n for n in ("kind", "rho", "tau") if getattr(args, n) is None]
        if missing:
            raise UsageError(f"missing --{', --'.join(missing)} (or pass --model FILE)")
        spec = dm.ModelSpec1D(args.kind, args.rho, args.tau, N=_default_n())
    updates = {}
    for name in ("kind", "rho", "tau"):
        if args.model and getattr(args, name) is not None:
            updates[name] = getattr(args, name)
    if args.N is not None:
        updates["N"] = args.N
    if args.R is not None:
        updates["R"] = float(args.R)
    if updates:
        spec = replace(spec, **updates)
    return spec


def _single_deformation(args):
    chosen = [x for x in (args.t is not None, args.proper, args.epsilon is not None) if x]
    if len(chosen) > 1:
        raise UsageError("choose at most one of --t, --proper, --epsilon")
    if args.t is not None:
        return dm.ConstantT(float(args.t))
    if args.proper:
        return dm.ProperFunction()
    if args.epsilon is not None:
        return dm.EpsilonFamily(float(args.epsilon))
    return None


def cmd_model_index(args, out) -> int:
    spec = _model_spec(args)
    d = _single_deformation(args)
    if d is not None:
        spec = replace(spec, deformation=d)
    res = dm.compute_index(spec, refine=not args.no_refine)
    if args.format == "json":
        out.write(_dump({"schema": SCHEMA_VERSION, "kind": "model-index",
                         "spec": spec.to_dict(), "result": res.to_dict()}) + "\n")
    elif args.format == "csv":
        out.write(dm.results_csv([spec], [res]))
    else:
        out.write(f"{res.index}\n")
    return 0 if (res.refinement_consistent or args.no_refine) else 1


def cmd_sweep(args, out) -> int:
    spec = _model_spec(args)
    family = []
    family += [dm.ConstantT(float(t)) for t in (args.t_list or [])]
    if args.proper:
        family.append(dm.ProperFunction())
    family += [dm.EpsilonFamily(float(e)) for e in (args.epsilon_list or [])]
    if not family:
        family = [dm.ConstantT(50.0), dm.ConstantT(100.0), dm.ConstantT(500.0)]
    sw = dm.deformation_sweep(spec, family, refine=not args.no_refine)
    if args.format == "json":
        out.write(_dump({
            "schema": SCHEMA_VERSION, "kind": "sweep", "all_equal": sw.all_equal,
            "entries": [{"spec": replace(spec, deformation=s).to_dict(), "result": r.to_dict(),
                         "error": e} for s, r, e in zip(sw.settings, sw.results, sw.errors)],
        }) + "\n")
    elif args.format == "text":
        for s, r in zip(sw.settings, sw.results):
            out.write(f"{s.label()}\t{r.index if r.resolved else 'unresolved'}\n")
        out.write(f"# all_equal={sw.all_equal}\n")
    else:
        out.write(sw.to_csv())
    ok = all(r.resolved for r in sw.results)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 with the usage line, as argparse does
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _box(text: str):
    try:
        lo, hi = text.split(":")
        return _weight(lo), _weight(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("box must look like LO:HI, e.g. 0,0:3,3")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toric-index", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def poly_cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--polytope", required=True, help="polytope document (YAML)")
        s.add_argument("--format", choices=("text", "json"), default="text")
        return s

    s = poly_cmd("quantize", "evaluate or list the quantization character")
    s.add_argument("--eval", type=_weight, action="append", metavar="W",
                   help="weight to evaluate (repeatable)")
    s.add_argument("--box", type=_box, help="LO:HI integer box for unbounded support listing")
    s.add_argument("--allow-non-delzant", action="store_true",
                   help="warn instead of failing on Delzant violations")
    s.set_defaults(func=cmd_quantize)

    for name, fn, help_ in (("reduce", cmd_reduce, "reduced polytope at a regular level"),
                            ("verify-qr", cmd_verify_qr, "compare both sides of [Q,R]=0")):
        s = poly_cmd(name, help_)
        s.add_argument("--xi", type=_weight, required=True, help="primitive direction")
        s.add_argument("--level", type=int, required=True)
        s.set_defaults(func=fn)

    s = poly_cmd("localize", "localization bookkeeping at one weight")
    s.add_argument("--rho", type=_weight, required=True)
    s.set_defaults(func=cmd_localize)

    def model_cmd(name, help_, default_format):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--model", help="model document (YAML)")
        s.add_argument("--kind", choices=("cylinder", "disc"))
        s.add_argument("--rho", type=int)
        s.add_argument("--tau", type=int)
        s.add_argument("--N", type=int, help=f"grid points (default ${GRID_ENV} or {dm.DEFAULT_N})")
        s.add_argument("--R", type=float, help=f"grid half-width (default {dm.DEFAULT_R:g})")
        s.add_argument("--no-refine", action="store_true", help="skip the 2N refinement check")
        s.add_argument("--format", choices=("text", "json", "csv"), default=default_format)
        return s

    s = model_cmd("model-index", "index of one model mode", "text")
    s.add_argument("--t", type=float)
    s.add_argument("--proper", action="store_true")
    s.add_argument("--epsilon", type=_rational)
    s.set_defaults(func=cmd_model_index)

    s = model_cmd("sweep", "index across a deformation family", "csv")
    s.add_argument("--t-list", type=_rational_list, help="comma list of t values")
    s.add_argument("--proper", action="store_true")
    s.add_argument("--epsilon-list", type=_rational_list, help="comma list of epsilons")
    s.set_defaults(func=cmd_sweep)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (QuantizeError, PolytopeError, LatticeError, ch.CharacterError,
            dm.ModelError, dm.IndexUnresolved) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
