"""Command-line interface.

Every subcommand prints one JSON report to standard output and exits with
0 when all checks pass, 1 when a check fails (the report is still printed)
and 2 when the input is malformed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .ambient import AmbientCategory, AmbientPatch, corestriction
from .catkernel import (
    FiniteAsComputable,
    FiniteCategory,
    FunctorData,
    validate_finite_category,
)
from .csystem import builtin_csystem, validate_csystem, validate_homomorphism
from .figures import render_report
from .image import check_injective_on_morphisms, image_csystem, restricted_hom
from .kan import LanUniverse, stabilization_probe
from .pipeline import StrictifyJob, verify_theorem
from .presheaf import Presheaf
from .report import MalformedInputError, Report, merge_reports


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInputError(f"{path} must hold a JSON object")
    return data


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check_category(args) -> int:
    cat = FiniteCategory.from_json(_load_json(args.file), name=args.file)
    rep = validate_finite_category(cat)
    _emit(rep.to_dict())
    return 0 if rep.passed else 1


def _cmd_check_csystem(args) -> int:
    cs = builtin_csystem(args.name)
    rep = validate_csystem(cs, args.bound)
    _emit(rep.to_dict())
    return 0 if rep.passed else 1


def _cmd_image(args) -> int:
    cs = builtin_csystem(args.name)
    patch = AmbientPatch.from_json(_load_json(args.ambient))
    ambient = AmbientCategory(cs, patch, args.bound + 2)
    M = corestriction(cs, ambient)
    inj = check_injective_on_morphisms(M, args.bound)
    if not inj.passed:
        _emit(inj.to_dict())
        return 1
    ccp = image_csystem(cs, M)
    rep = merge_reports(
        f"image[{args.name}]",
        [
            inj,
            validate_csystem(ccp, args.bound),
            validate_homomorphism(restricted_hom(cs, M, ccp), args.bound),
        ],
    )
    _emit(rep.to_dict())
    return 0 if rep.passed else 1


def _full_subcategory(cat: FiniteCategory, objects: list[str]) -> FiniteCategory:
    keep = set(objects)
    unknown = keep - set(cat.objects)
    if unknown:
        raise MalformedInputError(
            f"subcategory references unknown objects: {sorted(unknown)}"
        )
    morphisms = {
        f: dc for f, dc in cat.morphisms.items() if dc[0] in keep and dc[1] in keep
    }
    composition = {}
    external = set()
    for (f, g), h in cat.composition.items():
        if f in morphisms and g in morphisms:
            if h in morphisms:
                composition[(f, g)] = h
            else:
                external.add((f, g))
    for f, g in cat.external:
        if f in morphisms and g in morphisms:
            external.add((f, g))
    return FiniteCategory(
        objects=tuple(sorted(keep)),
        morphisms=morphisms,
        identities={x: cat.identities[x] for x in sorted(keep)},
        composition=composition,
        external=frozenset(external),
        name=f"{cat.name}-sub",
    )


def _input_presheaf(source: FiniteAsComputable, data: dict) -> Presheaf:
    try:
        at_table = {
            str(y): tuple(str(e) for e in elems)
            for y, elems in data["at"].items()
        }
        raw_restrict = {
            str(f): {str(a): str(b) for a, b in table.items()}
            for f, table in data.get("restrict", {}).items()
        }
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInputError(f"bad presheaf record: {exc}") from exc

    identities = set(source.cat.identities.values())

    def at(y):
        return at_table.get(y, ())

    def restrict(f, e):
        if f in identities:
            return e
        table = raw_restrict.get(f)
        if table is None or e not in table:
            raise MalformedInputError(f"presheaf restriction along {f} misses {e}")
        return table[e]

    return Presheaf(source, at, restrict, label="input")


def _presheaf_checks(source: FiniteAsComputable, P: Presheaf, rep: Report) -> None:
    cat = source.cat
    ok, witness = True, None
    for f, (a, b) in sorted(cat.morphisms.items()):
        for e in P.at(b):
            if P.restrict(f, e) not in P.at(a):
                ok, witness = False, f"restriction along {f} leaves the value set"
                break
        if not ok:
            break
    rep.add("restriction-endpoints", ok, witness)

    ok, witness = True, None
    for (f, g), h in sorted(cat.composition.items()):
        if h not in cat.morphisms:
            continue
        cod = cat.cod(g)
        for e in P.at(cod):
            if P.restrict(f, P.restrict(g, e)) != P.restrict(h, e):
                ok, witness = False, f"restriction not functorial on ({f},{g})"
                break
        if not ok:
            break
    rep.add("restriction-functorial", ok, witness)


def _cmd_kan(args) -> int:
    data = _load_json(args.file)
    try:
        cat_data = data["category"]
        sub_objects = [str(x) for x in data["subcategory"]]
        presheaf_data = data["presheaf"]
    except KeyError as exc:
        raise MalformedInputError(f"kan input misses {exc}") from exc
    grades = {str(k): int(v) for k, v in data.get("grades", {}).items()}

    cat = FiniteCategory.from_json(cat_data, name="ambient")
    laws = validate_finite_category(cat)
    if not laws.passed:
        _emit(laws.to_dict())
        return 1
    sub = _full_subcategory(cat, sub_objects)
    target = FiniteAsComputable(cat, grades)
    source = FiniteAsComputable(sub, {x: grades.get(x, 0) for x in sub.objects})
    i = FunctorData(source, target, lambda x: x, lambda f: f, name="i")
    P = _input_presheaf(source, presheaf_data)

    rep = Report("kan")
    _presheaf_checks(source, P, rep)
    if not rep.passed:
        _emit(rep.to_dict())
        return 1

    phi = LanUniverse(i, args.truncation)
    phi_next = LanUniverse(i, args.truncation + 1)
    lan = phi.extend(P)
    values = {}
    for c in sorted(cat.objects):
        values[c] = len(lan.at(c))
        probe = stabilization_probe(
            i, P, c, args.truncation, phi=phi, phi_next=phi_next
        )
        rep.add(f"stable[{c}]", probe.passed, probe.first_witness())
    rep.notes["values"] = values
    _emit(rep.to_dict())
    return 0 if rep.passed else 1


def _cmd_verify_theorem(args) -> int:
    job = StrictifyJob.from_json(_load_json(args.jobfile), name=args.jobfile)
    report = verify_theorem(job)
    print(report.to_json())
    if args.report_dir:
        render_report(report, args.report_dir)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# entry points


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstrict",
        description="Bounded verification of C-system strictification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-category", help="validate a finite category file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_check_category)

    p = sub.add_parser("check-csystem", help="validate a built-in C-system")
    p.add_argument("name")
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(handler=_cmd_check_csystem)

    p = sub.add_parser("image", help="build and validate an image C-system")
    p.add_argument("name")
    p.add_argument("--ambient", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(handler=_cmd_image)

    p = sub.add_parser("kan", help="extend a presheaf along a subcategory inclusion")
    p.add_argument("file")
    p.add_argument("--truncation", type=int, required=True)
    p.set_defaults(handler=_cmd_kan)

    p = sub.add_parser("verify-theorem", help="run every strictification gate")
    p.add_argument("jobfile")
    p.add_argument("--report-dir", default=None)
    p.set_defaults(handler=_cmd_verify_theorem)

    return parser


def cli_main(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, matching the malformed-input code
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except MalformedInputError as exc:
        _emit({"error": str(exc)})
        return 2


def main(argv=None) -> int:
    return cli_main(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
