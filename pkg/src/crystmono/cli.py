"""Command line front end for the verification suite.

Two commands:

    crystmono verify {all | table1 | pproj | diagram NAME | group NAME}
    crystmono show {diagram | group} NAME

``verify`` runs the machine checks and prints one block per case with a
line per claim; ``show`` prints the underlying dataset as JSON, in a form
that can be parsed and re-verified.  Exit codes: 0 all claims hold, 1 at
least one fails, 2 usage or unknown name, 3 a search hit its bound before
deciding.
"""

import argparse
import json
import sys
import time

from .affine import (
    AffineError,
    DualFrame,
    reference_closure,
    reference_group,
    reference_names,
    reflection_order_multiset,
    verify_crystallographic,
)
from .classify import (
    ClassifyError,
    kernel_characters,
    proj_rows,
    table_rows,
    verify_proj_row,
    verify_table_row,
)
from .cyclo import CycloField, parse_value, render_value
from .linalg import HermitianGram, matrix, vector
from .monodromy import (
    CheckResult,
    Cycle,
    Diagram,
    DiagramError,
    Edge,
    diagram,
    diagram_names,
    quotient_basis,
    verify_diagram,
)

_EXIT = {"pass": 0, "fail": 1, "inconclusive": 3}


def _worst(verdicts) -> str:
    out = "pass"
    for v in verdicts:
        if v == "fail":
            return "fail"
        if v == "inconclusive":
            out = "inconclusive"
    return out


def _check_dicts(checks) -> list:
    return [
        {"claim_id": c.claim_id, "claim": c.claim, "verdict": c.verdict, "witness": c.witness}
        for c in checks
    ]


def _report(case, checks, *, chi=None, character=None, group=None, resolved=None, timing=None) -> dict:
    return {
        "case": case,
        "chi": chi,
        "character": character,
        "group": group,
        "checks": _check_dicts(checks),
        "resolved_choices": dict(resolved) if resolved else {},
        "verdict": _worst(c.verdict for c in checks),
        "timing": timing,
    }


def _clock(args):
    start = time.perf_counter()

    def stop():
        return round(time.perf_counter() - start, 3) if args.timings else None

    return stop


def diagram_report(d: Diagram, args) -> dict:
    stop = _clock(args)
    checks = list(verify_diagram(d))
    case = verify_crystallographic(d, max_group=args.max_group, word_bound=args.max_words)
    checks.extend(case.checks)
    return _report(
        d.name,
        checks,
        chi=d.chi_label,
        character=render_value(d.chi),
        group=d.expected_group,
        resolved=d.resolved_choices,
        timing=stop(),
    )


def table_report(row, args) -> dict:
    stop = _clock(args)
    checks = verify_table_row(row)
    pair = kernel_characters(row.case)
    character = None
    if pair is not None:
        character = render_value(pair[0] if args.chi == "primary" else pair[1])
    return _report(
        row.notation,
        checks,
        chi=args.chi if pair is not None else None,
        character=character,
        group=row.group,
        timing=stop(),
    )


def proj_report(row, args) -> dict:
    stop = _clock(args)
    checks = verify_proj_row(row)
    return _report(f"Pproj-{row.id}", checks, timing=stop())


def group_report(name: str, args) -> dict:
    """Re-derive one crystallographic linear-part model from its generators."""
    stop = _clock(args)
    ref = reference_group(name)
    closure = reference_closure(name, args.max_group)
    multiset = reflection_order_multiset(closure)
    declared = {int(k): v for k, v in ref.declared_reflections.items()}
    checks = (
        CheckResult(
            "linear_order",
            f"the stated generators close to a group of order {ref.declared_order}",
            "pass" if len(closure) == ref.declared_order else "fail",
            f"linear order {len(closure)}",
        ),
        CheckResult(
            "reflection_multiset",
            "reflection orders with multiplicity match the declared counts",
            "pass" if multiset == declared else "fail",
            f"derived {multiset}, declared {declared}",
        ),
    )
    return _report(name, checks, group=name, timing=stop())


def _print_report(r: dict) -> None:
    head = f"[{r['verdict']}] {r['case']}"
    if r["chi"]:
        head += f"  chi={r['chi']}"
    if r["character"]:
        head += f"  character={r['character']}"
    if r["group"]:
        head += f"  group={r['group']}"
    print(head)
    for c in r["checks"]:
        print(f"  {c['verdict']:<12} {c['claim_id']:<22} {c['witness']}")
    if r["resolved_choices"]:
        print(f"  resolved choices: {r['resolved_choices']}")
    if r["timing"] is not None:
        print(f"  time: {r['timing']}s")


def _emit(doc: dict, args) -> int:
    for r in doc["reports"]:
        _print_report(r)
    print(f"verdict: {doc['verdict']}")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
    return _EXIT[doc["verdict"]]


def run_verify(args) -> int:
    reports = []
    if args.target == "all":
        reports += sorted((table_report(r, args) for r in table_rows()), key=lambda r: r["case"])
        reports += sorted((proj_report(r, args) for r in proj_rows()), key=lambda r: r["case"])
        reports += [diagram_report(diagram(n, args.chi), args) for n in sorted(diagram_names())]
        target = "all"
    elif args.target == "table1":
        reports = sorted((table_report(r, args) for r in table_rows()), key=lambda r: r["case"])
        target = "table1"
    elif args.target == "pproj":
        reports = sorted((proj_report(r, args) for r in proj_rows()), key=lambda r: r["case"])
        target = "pproj"
    elif args.target == "diagram":
        reports = [diagram_report(diagram(args.name, args.chi), args)]
        target = f"diagram {args.name}"
    elif args.target == "group":
        reports = [group_report(args.name, args)]
        linked = [n for n in sorted(diagram_names()) if diagram(n, args.chi).expected_group == args.name]
        reports += [diagram_report(diagram(n, args.chi), args) for n in linked]
        target = f"group {args.name}"
    else:
        print(f"error: unknown verify target {args.target!r}", file=sys.stderr)
        return 2

    doc = {
        "schema": "1",
        "target": target,
        "chi": args.chi,
        "reports": reports,
        "verdict": _worst(r["verdict"] for r in reports),
    }
    return _emit(doc, args)


def show_diagram_payload(d: Diagram) -> dict:
    q = quotient_basis(d)
    frame = DualFrame(q) if d.expected_group is not None and d.tau >= 2 else None
    payload = {
        "schema": "1",
        "kind": "diagram",
        "name": d.name,
        "ring": d.ring,
        "chi": d.chi_label,
        "character": render_value(d.chi),
        "kernel_characters": [render_value(x) for x in d.kernel_chi_pair],
        "tau": d.tau,
        "classical_order": d.classical_order,
        "expected_group": d.expected_group,
        "omitted_root": d.omitted_root,
        "cycles": [
            {
                "id": c.id,
                "self_pairing": c.self_pairing,
                "order": c.order,
                "eigenvalue": render_value(c.eigenvalue),
            }
            for c in d.cycles
        ],
        "edges": [
            {"src": e.src, "dst": e.dst, "value": render_value(e.value), "braid": e.braid}
            for e in d.edges
        ],
        "gram": [[render_value(x) for x in row] for row in d.gram.gram],
        "kernel_vector": [render_value(x) for x in d.kernel_vector],
        "relation": [render_value(x) for x in d.relation] if d.relation is not None else None,
        "resolved_choices": dict(d.resolved_choices),
        "rejected_choices": [
            {"assignment": dict(choice), "violates": why} for choice, why in d.rejected_choices
        ],
    }
    if frame is not None:
        payload["frame"] = {
            "alpha0": render_value(frame.alpha0),
            "a": [render_value(x) for x in frame.a],
            "dual_form": [[render_value(x) for x in row] for row in frame.dual_gram.gram],
        }
    else:
        payload["frame"] = None
    return payload


def diagram_from_payload(payload: dict) -> Diagram:
    """Rebuild a diagram from its ``show`` dump; derived sections are ignored."""
    field = CycloField(3 if payload["ring"] == "Z[w]" else 4)

    def val(text):
        return parse_value(text, field)

    pair = tuple(val(x) for x in payload["kernel_characters"])
    chi_label = payload["chi"]
    return Diagram(
        name=payload["name"],
        ring=payload["ring"],
        field=field,
        chi_label=chi_label,
        chi=pair[0] if chi_label == "primary" else pair[1],
        kernel_chi_pair=pair,
        cycles=tuple(
            Cycle(c["id"], c["self_pairing"], c["order"], val(c["eigenvalue"]))
            for c in payload["cycles"]
        ),
        edges=tuple(
            Edge(e["src"], e["dst"], val(e["value"]), (e["value"],), e["braid"])
            for e in payload["edges"]
        ),
        gram=HermitianGram(matrix(field, [[val(x) for x in row] for row in payload["gram"]])),
        relation=vector(field, [val(x) for x in payload["relation"]])
        if payload["relation"] is not None
        else None,
        kernel_vector=vector(field, [val(x) for x in payload["kernel_vector"]]),
        omitted_root=payload["omitted_root"],
        expected_group=payload["expected_group"],
        tau=payload["tau"],
        classical_order=payload["classical_order"],
        resolved_choices=dict(payload["resolved_choices"]),
        rejected_choices=tuple(
            (dict(r["assignment"]), r["violates"]) for r in payload["rejected_choices"]
        ),
    )


def show_group_payload(name: str) -> dict:
    """The stored linear-part model, echoing the dataset's own value spellings."""
    from .affine import _raw_groups

    ref = reference_group(name)  # validates the model before showing it
    raw = _raw_groups()[name]
    rule = ref.lattice_rule
    basis = None
    if rule["kind"] == "ring":
        basis = ["1", "w" if rule["ring"] == "Z[w]" else "i"]
    return {
        "schema": "1",
        "kind": "group",
        "name": ref.name,
        "ring": ref.ring,
        "rank": ref.rank,
        "order": ref.declared_order,
        "reflection_orders": dict(raw["reflection_orders"]),
        "form": [list(row) for row in raw["form"]],
        "generators": [
            {"root": list(g["root"]), "eigenvalue": g["eigenvalue"]} for g in raw["generators"]
        ],
        "braids": [list(b) for b in raw["braids"]],
        "lattice_rule": dict(rule),
        "lattice_basis": basis,
        "provenance": ref.provenance,
    }


def run_show(args) -> int:
    if args.kind == "diagram":
        payload = show_diagram_payload(diagram(args.name, args.chi))
    elif args.kind == "group":
        payload = show_group_payload(args.name)
    else:
        print(f"error: unknown show kind {args.kind!r}", file=sys.stderr)
        return 2
    text = json.dumps(payload, indent=2) + "\n"
    sys.stdout.write(text)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="crystmono",
        description="Exact verification of the symmetric cubic-point monodromy catalogue.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the machine checks for a target")
    v.add_argument("target", metavar="TARGET", help="all | table1 | pproj | diagram | group")
    v.add_argument("name", nargs="?", help="diagram or group name when TARGET needs one")

    s = sub.add_parser("show", help="print a dataset as JSON")
    s.add_argument("kind", metavar="KIND", help="diagram | group")
    s.add_argument("name", help="which dataset to print")

    for cmd in (v, s):
        cmd.add_argument("--chi", choices=("primary", "conj"), default="primary",
                         help="which of the two kernel characters to work with")
        cmd.add_argument("--json", metavar="PATH", help="also write the JSON document to PATH")
    v.add_argument("--max-words", type=int, default=12, metavar="N",
                   help="word-length bound for the translation search")
    v.add_argument("--max-group", type=int, default=2000, metavar="N",
                   help="size bound for group closures")
    v.add_argument("--seed-free", action="store_true",
                   help="reserved; every computation is already deterministic")
    v.add_argument("--timings", action="store_true",
                   help="record wall-clock time per case (reports stop being byte-stable)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        if args.target in ("diagram", "group") and args.name is None:
            print(f"error: verify {args.target} needs a name", file=sys.stderr)
            return 2
        if args.target in ("all", "table1", "pproj") and args.name is not None:
            print(f"error: verify {args.target} takes no name", file=sys.stderr)
            return 2
    try:
        if args.command == "verify":
            return run_verify(args)
        return run_show(args)
    except (DiagramError, AffineError, ClassifyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
