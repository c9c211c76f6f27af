"""Command-line front end: problem file in, report out.

Exit codes separate meanings so shell pipelines can branch: 0 means the
command ran and its mathematical answer is positive, 1 means the answer is
negative (a check failed, something is not a cocycle, a deformation will
not extend or trivialize), 2 means the input was unusable (parse or shape
errors, or a size cap breach).

``--json`` selects the machine format.  JSON reports are byte-identical
across runs for identical inputs: solver outputs are canonical, key order
is sorted, and timing_ms is pinned to 0 there (the human summary shows the
real time).  The environment variable HDERLAB_MAX_DIM (default 6) caps
every dimension a command touches, including constructed total spaces and
tensor-algebra bases, to keep accidental combinatorial blowups from
running away.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .algebras import (
    adjoint_bimodule, trivial_bimodule, verify_algebra, verify_bimodule,
)
from .cochain import NotACocycleError, cohomology, is_coboundary
from .deform import (
    extend_deformation, obstruction, trivialize, try_extend, verify_deformation,
)
from .exactlin import Matrix, ShapeError
from .extensions import (
    SectionError, classify_central, cocycle_from_section, extension_from_cocycle,
)
from .freecons import build_tensor_algebra, induced_tensor_hder
from .hder import verify_hder
from .serialize import (
    ParseError, check_report_to_json, cochain_to_json, cohomology_to_json,
    deformation_to_json, extension_to_json, gauge_to_json, hder_to_json,
    parse_algebra, parse_bimodule, parse_deformation, parse_hder, parse_matrix,
    parse_tensor_section, parse_two_cocycle, two_cocycle_to_json,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


class CapExceeded(ValueError):
    """A dimension went past HDERLAB_MAX_DIM."""


def _cap() -> int:
    raw = os.environ.get("HDERLAB_MAX_DIM", "6")
    try:
        return int(raw)
    except ValueError as exc:
        raise CapExceeded(f"HDERLAB_MAX_DIM is not an integer: {raw!r}") from exc


def _guard(**dims: int) -> None:
    cap = _cap()
    for name, value in dims.items():
        if value > cap:
            raise CapExceeded(
                f"{name} = {value} exceeds HDERLAB_MAX_DIM = {cap}; "
                "raise the environment variable to proceed")


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return doc


def _section(doc: dict, key: str):
    if key not in doc:
        raise ParseError(f"missing required top-level key '{key}'")
    return doc[key]


def _algebra_hder(doc):
    alg = parse_algebra(_section(doc, "algebra"))
    _guard(dim=alg.dim)
    hd = parse_hder(_section(doc, "hder"), alg.dim)
    return alg, hd


def _coefficients(doc, alg, hd, choice: str):
    if choice == "adjoint":
        return adjoint_bimodule(alg, hd)
    if choice == "trivial":
        return trivial_bimodule(alg, 1, tuple(Matrix.zeros(1, 1) for _ in range(hd.rank)))
    if choice == "file":
        if "bimodule" not in doc:
            raise ParseError("--coefficients file needs a 'bimodule' section")
        return parse_bimodule(doc["bimodule"], alg.dim, hd.rank)
    raise ParseError(f"unknown coefficients choice {choice!r}")


def cmd_check(doc, args):
    results: dict = {}
    violations: list[str] = []
    alg = parse_algebra(_section(doc, "algebra"))
    _guard(dim=alg.dim)
    rep = verify_algebra(alg)
    results["algebra"] = check_report_to_json(rep)
    ok = rep.ok
    if not rep.ok:
        violations.append(f"algebra: {rep.violation}")
    hd = None
    if "hder" in doc:
        hd = parse_hder(doc["hder"], alg.dim)
        rep = verify_hder(alg, hd)
        results["hder"] = check_report_to_json(rep)
        ok = ok and rep.ok
        if not rep.ok:
            violations.append(f"hder: {rep.violation}")
    if "bimodule" in doc:
        if hd is None:
            raise ParseError("a 'bimodule' section needs an 'hder' section")
        mod = parse_bimodule(doc["bimodule"], alg.dim, hd.rank)
        _guard(mdim=mod.mdim)
        rep = verify_bimodule(alg, hd, mod)
        results["bimodule"] = check_report_to_json(rep)
        ok = ok and rep.ok
        if not rep.ok:
            violations.append(f"bimodule: {rep.violation}")
    return ok, results, violations


def cmd_cohomology(doc, args):
    alg, hd = _algebra_hder(doc)
    mod = _coefficients(doc, alg, hd, args.coefficients)
    _guard(dim=alg.dim, mdim=mod.mdim, degree=args.degree)
    rep = cohomology(alg, mod, hd, args.degree)
    return True, cohomology_to_json(rep), []


def cmd_classify_central(doc, args):
    alg, hd = _algebra_hder(doc)
    if "bimodule" in doc:
        mod = parse_bimodule(doc["bimodule"], alg.dim, hd.rank)
    else:
        mod = trivial_bimodule(alg, 1, tuple(Matrix.zeros(1, 1) for _ in range(hd.rank)))
    _guard(dim=alg.dim, mdim=mod.mdim, total_dim=alg.dim + mod.mdim)
    classes = classify_central(alg, hd, mod)
    reps = [{"cocycle": two_cocycle_to_json(z), "extension": extension_to_json(e)}
            for z, e in classes]
    results = {"betti": len(classes) - 1, "classes": reps}
    return True, results, []


def cmd_extend_abelian(doc, args):
    alg, hd = _algebra_hder(doc)
    if "bimodule" not in doc:
        raise ParseError("extend-abelian needs a 'bimodule' section")
    mod = parse_bimodule(doc["bimodule"], alg.dim, hd.rank)
    _guard(dim=alg.dim, mdim=mod.mdim, total_dim=alg.dim + mod.mdim)
    if args.cocycle not in doc:
        raise ParseError(f"missing top-level key {args.cocycle!r} holding the cocycle")
    z = parse_two_cocycle(doc[args.cocycle], alg.dim, mod.mdim, hd.rank, args.cocycle)
    try:
        ext = extension_from_cocycle(alg, hd, mod, z)
    except NotACocycleError as exc:
        return False, {"cocycle_check": str(exc)}, [str(exc)]
    results = {"extension": extension_to_json(ext),
               "total_algebra_check": check_report_to_json(verify_algebra(ext.total.algebra)),
               "total_hder_check": check_report_to_json(verify_hder(ext.total.algebra,
                                                                    ext.total.hder))}
    return True, results, []


def cmd_cocycle_from_section(doc, args):
    alg, hd = _algebra_hder(doc)
    if "bimodule" not in doc:
        raise ParseError("cocycle-from-section needs a 'bimodule' section")
    mod = parse_bimodule(doc["bimodule"], alg.dim, hd.rank)
    _guard(dim=alg.dim, mdim=mod.mdim, total_dim=alg.dim + mod.mdim)
    key = args.cocycle
    if key not in doc:
        raise ParseError(f"missing top-level key {key!r} holding the cocycle")
    z = parse_two_cocycle(doc[key], alg.dim, mod.mdim, hd.rank, key)
    ext = extension_from_cocycle(alg, hd, mod, z)
    section = None
    if "section" in doc:
        section = parse_matrix(doc["section"], alg.dim + mod.mdim, alg.dim, "section")
    try:
        out = cocycle_from_section(ext, section)
    except SectionError as exc:
        return False, {}, [str(exc)]
    results = {"cocycle": two_cocycle_to_json(out),
               "matches_input": out == z}
    return True, results, []


def _deformation(doc, alg, hd):
    return parse_deformation(_section(doc, "deformation"), alg.dim, hd.rank)


def cmd_deform_verify(doc, args):
    alg, hd = _algebra_hder(doc)
    defm = _deformation(doc, alg, hd)
    rep = verify_deformation(alg, hd, defm)
    violations = [] if rep.ok else [str(rep.violation)]
    return rep.ok, {"order": defm.order, "check": check_report_to_json(rep)}, violations


def cmd_deform_obstruct(doc, args):
    alg, hd = _algebra_hder(doc)
    defm = _deformation(doc, alg, hd)
    ob = obstruction(alg, hd, defm)
    mod = adjoint_bimodule(alg, hd)
    preimage = is_coboundary(alg, mod, hd, ob)
    results = {"order": defm.order, "obstruction": cochain_to_json(ob),
               "is_coboundary": preimage is not None}
    if preimage is not None:
        results["preimage"] = cochain_to_json(preimage)
        return True, results, []
    return False, results, ["obstruction class is nonzero; deformation does not extend"]


def cmd_deform_extend(doc, args):
    alg, hd = _algebra_hder(doc)
    defm = _deformation(doc, alg, hd)
    target = args.to if args.to is not None else defm.order + 1
    if target <= defm.order:
        raise ParseError(f"--to {target} is not past the current order {defm.order}")
    _guard(target_order=target)
    current = defm
    while current.order < target:
        outcome = try_extend(alg, hd, current)
        if outcome.candidate is None:
            results = {"reached_order": current.order,
                       "obstruction": cochain_to_json(outcome.obstruction)}
            return False, results, [
                f"obstruction class at order {current.order} is nonzero"]
        current = extend_deformation(current, outcome.candidate)
    results = {"reached_order": current.order,
               "deformation": deformation_to_json(current)}
    return True, results, []


def cmd_deform_trivialize(doc, args):
    alg, hd = _algebra_hder(doc)
    defm = _deformation(doc, alg, hd)
    target = args.to if args.to is not None else defm.order
    if target > defm.order:
        raise ParseError(f"--to {target} exceeds the stored order {defm.order}")
    out = trivialize(alg, hd, defm, target)
    if out.gauge is not None:
        return True, {"gauge": gauge_to_json(out.gauge)}, []
    results = {"blocked_order": out.blocked_order,
               "blocking_class": cochain_to_json(out.blocking_class)}
    return False, results, [
        f"coefficient at order {out.blocked_order} is not a coboundary"]


def cmd_free_tensor(doc, args):
    vdim, degree, thetas = parse_tensor_section(_section(doc, "tensor"))
    if args.degree is not None:
        degree = args.degree
    if degree is None:
        raise ParseError("tensor.degree or --degree is required")
    _guard(vdim=vdim, degree=degree)
    probe = build_tensor_algebra(vdim, degree)
    _guard(tensor_algebra_dim=probe.algebra.dim)
    tta, hd = induced_tensor_hder(vdim, degree, thetas)
    rep = verify_hder(tta.algebra, hd)
    results = {
        "vdim": vdim, "degree": degree, "dim": tta.algebra.dim,
        "words": list(tta.algebra.basis_labels),
        "hder": hder_to_json(hd),
        "check": check_report_to_json(rep),
    }
    violations = [] if rep.ok else [str(rep.violation)]
    return rep.ok, results, violations


COMMANDS = {
    "check": cmd_check,
    "cohomology": cmd_cohomology,
    "classify-central": cmd_classify_central,
    "extend-abelian": cmd_extend_abelian,
    "cocycle-from-section": cmd_cocycle_from_section,
    "deform-verify": cmd_deform_verify,
    "deform-obstruct": cmd_deform_obstruct,
    "deform-extend": cmd_deform_extend,
    "deform-trivialize": cmd_deform_trivialize,
    "free-tensor": cmd_free_tensor,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hderlab",
        description="Workbench for associative algebras with higher derivations")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="JSON problem file")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        return p

    add("check", "verify algebra, higher derivation, and bimodule sections")
    p = add("cohomology", "cohomology in one degree")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coefficients", choices=["adjoint", "trivial", "file"],
                   default="adjoint")
    add("classify-central", "central extensions per second-cohomology class")
    p = add("extend-abelian", "build the abelian extension of a 2-cocycle")
    p.add_argument("--cocycle", default="cocycle",
                   help="top-level key holding the cocycle (default: cocycle)")
    p = add("cocycle-from-section", "read the twisting data off a section")
    p.add_argument("--cocycle", default="cocycle",
                   help="top-level key holding the cocycle (default: cocycle)")
    add("deform-verify", "check the order-by-order deformation equations")
    add("deform-obstruct", "obstruction cochain and its coboundary test")
    p = add("deform-extend", "extend a deformation order by order")
    p.add_argument("--to", type=int, default=None, help="target order (default: order+1)")
    p = add("deform-trivialize", "gauge a deformation back to the trivial one")
    p.add_argument("--to", type=int, default=None, help="target order (default: stored order)")
    p = add("free-tensor", "induced higher derivation on a truncated tensor algebra")
    p.add_argument("--degree", type=int, default=None, help="truncation degree")
    return parser


def _emit(command: str, ok: bool, results: dict, violations: list[str],
          as_json: bool, elapsed_ms: int) -> None:
    if as_json:
        report = {"ok": ok, "command": command, "results": results,
                  "violations": violations, "timing_ms": 0}
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    print(f"command: {command}")
    print(f"ok: {'yes' if ok else 'no'}")
    for v in violations:
        print(f"violation: {v}")
    if results:
        print(json.dumps(results, indent=2, sort_keys=True))
    print(f"timing_ms: {elapsed_ms}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command]
    start = time.perf_counter()
    try:
        doc = _load(args.file)
        ok, results, violations = handler(doc, args)
    except (ParseError, ShapeError, CapExceeded) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotACocycleError, ValueError) as exc:
        # well-formed input, mathematically rejected (not a cocycle, not a
        # section, an unverified deformation, ...)
        elapsed = int((time.perf_counter() - start) * 1000)
        _emit(args.command, False, {}, [str(exc)], args.json, elapsed)
        return EXIT_NEGATIVE
    elapsed = int((time.perf_counter() - start) * 1000)
    _emit(args.command, ok, results, violations, args.json, elapsed)
    return EXIT_OK if ok else EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
