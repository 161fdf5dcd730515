"""Command line entry point.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .cohomology import (
    cohomology_report, dolbeault_class_predicate, dolbeault_cohomology, mu_bar_cohomology,
    n0_closedness_predicate, native_dbar, native_dolbeault_class, nq_closedness_predicate,
)
from .deformation import deform_structure, maurer_cartan
from .errors import (
    AlmostComplexError, InvalidFrame, ManifestError, MCViolation, PreconditionViolation,
    SingularTransition,
)
from .frame import validate_frame
from .manifest import parse_manifest, terms_json
from .report import emit_report, run_suite, run_suites
from .suites import SUITES

DEFORM_CHECKS = ("mc", "n0-closed", "n0-class", "nq-closed")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="almostcx", description=__doc__.splitlines()[0])
    p.add_argument("--manifest", required=True, help="manifest JSON file")
    p.add_argument("--seed", type=int, default=None, help="seed for random inputs (u64)")
    p.add_argument("--max-degree", type=int, default=None, help="cap on total form degree")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="check d² = 0 for the structure data")

    c = sub.add_parser("check", help="run an identity suite")
    c.add_argument("--suite", choices=SUITES + ("all",), default="all")
    c.add_argument("--format", choices=("json", "text"), default="text")

    h = sub.add_parser("cohomology", help="μ̄- and Dolbeault cohomology of invariant forms")
    h.add_argument("--p", type=int)
    h.add_argument("--q", type=int)

    d = sub.add_parser("deform", help="evaluate a deformation criterion for a named φ and form")
    d.add_argument("--check", choices=DEFORM_CHECKS, required=True)
    d.add_argument("--phi", required=True)
    d.add_argument("--form")

    r = sub.add_parser("report", help="run the manifest's tasks and write a report")
    r.add_argument("--out", required=True)
    r.add_argument("--format", choices=("json", "text"), default="json")
    return p


def _cmd_validate(m, args) -> int:
    rep = validate_frame(m.spec())
    for k, v in rep.residuals.items():
        print(f"{'ok  ' if not v else 'FAIL'}  {k}" + (f"  residual {v}" if v else ""))
    if not rep.conjugation_ok:
        print("FAIL  conjugation closure")
    return 0 if rep.passed else 1


def _cmd_cohomology(m, args) -> int:
    spec = m.spec()
    validate_frame(spec, strict=True)
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise ManifestError("--p and --q go together")
        if not (0 <= args.p <= spec.n and 0 <= args.q <= spec.n):
            raise ManifestError(f"bidegree ({args.p},{args.q}) outside 0..{spec.n}")
        mb = mu_bar_cohomology(spec, args.p, args.q)
        dol = dolbeault_cohomology(spec, args.p, args.q)
        print(f"invariant cohomology ({args.p},{args.q}): dim H_mubar = {mb.dim}, "
              f"dim H_Dol = {dol.dim}")
        for r in dol.representatives:
            print(f"  {r}")
        return 0
    print(cohomology_report(spec).table())
    return 0


def _cmd_deform(m, args) -> int:
    spec = m.spec()
    validate_frame(spec, strict=True)
    if args.phi not in m.beltrami:
        raise ManifestError(f"no Beltrami differential named {args.phi!r}")
    phi = m.beltrami[args.phi]
    if args.check == "mc":
        mc = maurer_cartan(spec, phi)
        print("MC(φ) = 0" if not mc else f"MC(φ) = {mc}")
        return 0 if not mc else 1
    if not args.form or args.form not in m.forms:
        raise ManifestError(f"--form must name a manifest form, got {args.form!r}")
    form = m.forms[args.form]
    try:
        ds = deform_structure(spec, phi)
    except SingularTransition as e:
        print(f"singular transition: {e}")
        return 2
    try:
        if args.check == "n0-closed":
            pred, native = n0_closedness_predicate(ds, form), not native_dbar(ds, form)
        elif args.check == "n0-class":
            pred, native = dolbeault_class_predicate(ds, form), native_dolbeault_class(ds, form)
        else:
            pred, native = nq_closedness_predicate(ds, form), not native_dbar(ds, form)
    except MCViolation as e:
        print(f"precondition: {e}")
        return 1
    except PreconditionViolation as e:
        print(f"precondition {e.hypothesis}: {e}")
        return 1
    except ValueError as e:
        raise ManifestError(str(e)) from None
    print(json.dumps({"check": args.check, "criterion": pred, "native": native,
                      "agree": pred == native}, sort_keys=True))
    return 0 if pred == native else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        m = parse_manifest(args.manifest).with_overrides(args.seed, args.max_degree)
        if args.command == "validate":
            return _cmd_validate(m, args)
        if args.command == "check":
            rep = run_suite(m, args.suite)
            sys.stdout.write(emit_report(rep, args.format))
            return 0 if rep.passed else 1
        if args.command == "cohomology":
            return _cmd_cohomology(m, args)
        if args.command == "deform":
            return _cmd_deform(m, args)
        if args.command == "report":
            rep = run_suites(m, m.tasks)
            emit_report(rep, args.format, args.out)
            c = rep.counts
            print(f"{args.out}: {c['pass']} passed, {c['fail']} failed, {c['skip']} skipped")
            return 0 if rep.passed else 1
    except ManifestError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return 2
    except InvalidFrame as e:
        print(f"invalid frame: {e}", file=sys.stderr)
        if e.residual is not None:
            print(json.dumps({"residual": terms_json(e.residual)}), file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2
    except AlmostComplexError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
