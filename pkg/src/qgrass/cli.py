"""Command-line front end.

Inputs are JSON files (quivers, windings, modules, string algebras, hall
functions).  Results are exact integers printed in decimal; ``--output json``
wraps them as ``{"value": "<decimal>"}``.  Errors go to stderr as JSON with
exit status 2 (invalid input), 3 (unsupported case) or 4 (budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from itertools import product
from typing import Any, Optional, Sequence

from . import __version__
from .errors import MalformedInput, QGrassError
from .euler import (
    band_oracle_sweep,
    band_formula,
    band_recursion_oracle,
    euler_flag_module,
    euler_module,
    euler_tree,
    random_band_profiles,
)
from .gradings import fixed_point_count, refine_until_injective
from .hall import hall_function_from_dict, indicator_dim_sum, product_evaluate
from .quiver import (
    BandTerm,
    ModuleExpr,
    Quiver,
    TreeTerm,
    cycle_quiver,
    validate_module,
    validate_quiver,
    validate_winding,
    validate_band,
)
from .string_algebra import enumerate_bands, enumerate_strings, validate_string_algebra


def _load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}", path=path) from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})",
                             path=path) from None


def parse_dim(text: str, q: Quiver) -> tuple:
    """``v=3,w=1`` (omitted vertices are 0) or a positional ``(3,1)``."""
    text = text.strip()
    if not text:
        return q.zero
    if "=" in text:
        out = {}
        for part in text.split(","):
            if not part.strip():
                continue
            key, _, val = part.partition("=")
            try:
                out[key.strip()] = int(val)
            except ValueError:
                raise MalformedInput(f"bad dimension entry {part!r}") from None
        return q.dim(out)
    inner = text.strip("()[] ")
    try:
        return q.dim([int(x) for x in re.split(r"[,\s]+", inner) if x])
    except ValueError:
        raise MalformedInput(f"bad dimension vector {text!r}") from None


def _as_module(raw: Any) -> ModuleExpr:
    """A module file, or a bare winding read as a single tree/band summand."""
    if isinstance(raw, dict) and "summands" in raw:
        return validate_module(raw)
    w = validate_winding(raw)
    if w.is_tree:
        return ModuleExpr(w.codomain, (TreeTerm(w),))
    return ModuleExpr(w.codomain, (BandTerm(validate_band(w), int(raw.get("n", 1))),))


def _emit(value: Any, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps({"value": str(value)}))
    else:
        print(value)


def _detect(raw: Any) -> str:
    if not isinstance(raw, dict):
        raise MalformedInput("top-level JSON must be an object")
    if "summands" in raw:
        return "module"
    if "relations" in raw:
        return "algebra"
    if "trees" in raw or "bands" in raw:
        return "hall-function"
    if "domain" in raw:
        return "winding"
    if "vertices" in raw:
        return "quiver"
    raise MalformedInput("cannot tell what kind of object this file holds")


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    raw = _load(args.file)
    kind = _detect(raw)
    if kind == "module":
        validate_module(raw)
    elif kind == "algebra":
        validate_string_algebra(raw)
    elif kind == "hall-function":
        hall_function_from_dict(raw)
    elif kind == "winding":
        w = validate_winding(raw)
        if w.is_band_domain:
            validate_band(w)
            kind = "band winding"
        elif w.is_tree:
            kind = "tree winding"
    else:
        validate_quiver(raw)
    print(f"valid {kind}")
    return 0


def cmd_euler(args) -> int:
    M = _as_module(_load(args.module))
    _emit(euler_module(M, parse_dim(args.dim, M.codomain)), args.output)
    return 0


def cmd_flag(args) -> int:
    M = _as_module(_load(args.module))
    dims = [parse_dim(x, M.codomain) for x in args.dims.split(";") if x.strip()]
    _emit(euler_flag_module(M, dims), args.output)
    return 0


def cmd_hall(args) -> int:
    M = _as_module(_load(args.module))
    f = hall_function_from_dict(_load(args.left), M.codomain)
    g = hall_function_from_dict(_load(args.right), M.codomain)
    _emit(product_evaluate(f, g, M), args.output)
    return 0


def cmd_strings(args) -> int:
    A = validate_string_algebra(_load(args.algebra))
    ws = enumerate_bands(A, args.max_length) if args.bands else enumerate_strings(A, args.max_length)
    if args.output == "json":
        print(json.dumps([w.to_dict() for w in ws], sort_keys=True))
        return 0
    for w in ws:
        dim = ",".join(str(x) for x in w.fiber_sizes)
        word = " ".join(f"{w.vdict[a.src]}-{w.adict[a.id]}->{w.vdict[a.tgt]}"
                        for a in w.domain.arrows)
        print(f"({dim}) {word}".rstrip())
    print(f"{len(ws)} {'bands' if args.bands else 'strings'}")
    return 0


def cmd_oracle(args) -> int:
    if args.mode == "band-formula":
        cases, bad = band_oracle_sweep(args.max_l, args.max_n)
        for p in random_band_profiles(args.random, 8, 4, seed=args.seed):
            cases += 1
            f = band_formula(p)
            r = band_recursion_oracle(cycle_quiver(p.signs), p.t, p.n)
            if f != r:
                bad.append((p.signs, p.n, p.t, f, r))
    elif args.mode == "fixed-point":
        if len(args.inputs) != 1:
            raise MalformedInput("fixed-point mode takes one tree winding file")
        w = validate_winding(_load(args.inputs[0]))
        cases, bad = 0, []
        for d in _box(w.fiber_sizes):
            cases += 1
            a, b = euler_tree(w, d), fixed_point_count(w, 1, d)
            if a != b:
                bad.append((d, a, b))
    elif args.mode == "hall-sum":
        if len(args.inputs) != 2:
            raise MalformedInput("hall-sum mode takes an algebra file and a module file")
        A = validate_string_algebra(_load(args.inputs[0]))
        M = _as_module(_load(args.inputs[1]))
        cases, bad = 0, []
        top = M.dim
        for d in _box(top):
            e = tuple(x - y for x, y in zip(top, d))
            Hd = indicator_dim_sum(A, d, sum(d))
            He = indicator_dim_sum(A, e, sum(e))
            total = sum(product_evaluate(f, g, M) for f in Hd for g in He)
            cases += 1
            chi = euler_module(M, d)
            if total != chi:
                bad.append((d, total, chi))
    else:
        raise MalformedInput(f"unknown oracle mode {args.mode!r}")
    if bad:
        for b in bad[:20]:
            print("MISMATCH", *b)
        print(f"FAIL {len(bad)} of {cases} cases")
        return 1
    print(f"OK {cases} cases")
    return 0


def _box(top: Sequence[int]):
    return product(*(range(x + 1) for x in top))


def cmd_refine(args) -> int:
    w = validate_winding(_load(args.winding))
    Fp, G, rounds = refine_until_injective(w)
    out = {"rounds": rounds, "refined": Fp.to_dict(), "projection": G.to_dict()}
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_fixed_point(args) -> int:
    w = validate_winding(_load(args.winding))
    _emit(fixed_point_count(w, args.n, parse_dim(args.dim, w.codomain)), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgrass", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_output(sp):
        sp.add_argument("--output", choices=("plain", "json"), default="plain")
        return sp

    sp = sub.add_parser("validate", help="validate a quiver, winding, module, algebra or hall function")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = with_output(sub.add_parser("euler", help="Euler characteristic of a quiver Grassmannian"))
    sp.add_argument("module")
    sp.add_argument("--dim", required=True, help="v=val,... or (a,b,...)")
    sp.set_defaults(func=cmd_euler)

    sp = with_output(sub.add_parser("flag", help="Euler characteristic of a quiver flag variety"))
    sp.add_argument("module")
    sp.add_argument("--dims", required=True, help="d1;d2;... in ascending order")
    sp.set_defaults(func=cmd_flag)

    sp = with_output(sub.add_parser("hall", help="evaluate (1_left * 1_right)(module)"))
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("module")
    sp.set_defaults(func=cmd_hall)

    sp = with_output(sub.add_parser("strings", help="list strings (or bands) of a string algebra"))
    sp.add_argument("algebra")
    sp.add_argument("--max-length", type=int, required=True)
    sp.add_argument("--bands", action="store_true")
    sp.set_defaults(func=cmd_strings)

    sp = sub.add_parser("oracle", help="run a cross-check between independent computations")
    sp.add_argument("mode", choices=("band-formula", "fixed-point", "hall-sum"))
    sp.add_argument("inputs", nargs="*",
                    help="fixed-point: WINDING; hall-sum: ALGEBRA MODULE")
    sp.add_argument("--max-l", type=int, default=5)
    sp.add_argument("--max-n", type=int, default=3)
    sp.add_argument("--random", type=int, default=0, help="extra random profiles (l<=8, n<=4)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("refine", help="refine a winding until it is injective on vertices")
    sp.add_argument("winding")
    sp.set_defaults(func=cmd_refine)

    sp = with_output(sub.add_parser("fixed-point", help="count torus-fixed points of Gr_d"))
    sp.add_argument("winding")
    sp.add_argument("--dim", required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.set_defaults(func=cmd_fixed_point)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QGrassError as exc:
        print(json.dumps(exc.as_dict(), sort_keys=True), file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
