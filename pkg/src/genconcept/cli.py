"""Command-line entry point.

Exit codes: 0 success, 2 argument or input errors, 3 theorem violation,
4 concept-count ceiling exceeded.  All JSON documents carry format_version 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, io, rules, synth
from .errors import (
    ConceptCeilingError,
    GenconceptError,
    TheoremViolationError,
)
from .generalize import (
    Mode,
    generalize_attributes,
    propose_groupings,
    scheme_from_json,
)
from .lattice import (
    DEFAULT_CEILING,
    count_concepts,
    enumerate_concepts,
    iceberg_intents,
    lattice_to_dot,
    lattice_to_json,
)

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_THEOREM = 3
EXIT_CEILING = 4


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}")


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_scheme(path: str, ctx):
    doc = json.loads(Path(path).read_text())
    return scheme_from_json(doc, ctx)


def _dump_json(doc: dict, out: str | None) -> None:
    _write_output(json.dumps(doc, indent=2) + "\n", out)


def cmd_lattice(args) -> int:
    ctx = io.load_context(args.context)
    if args.count:
        print(count_concepts(ctx, args.ceiling))
        return EXIT_OK
    if args.iceberg:
        if args.minsupp is None:
            raise GenconceptError("--iceberg needs --minsupp")
        rows = iceberg_intents(ctx, args.minsupp, args.ceiling)
        doc = {
            "format_version": 1,
            "context": ctx.name,
            "minsupp": str(args.minsupp),
            "intents": [
                {"intent": ctx.attribute_names(i), "support": str(s)} for i, s in rows
            ],
        }
        _dump_json(doc, args.output)
        return EXIT_OK
    lat = enumerate_concepts(ctx, args.ceiling)
    if args.dot:
        _write_output(lattice_to_dot(lat), args.output)
    else:
        _dump_json(lattice_to_json(lat), args.output)
    return EXIT_OK


def cmd_generalize(args) -> int:
    ctx = io.load_context(args.context)
    scheme = _load_scheme(args.scheme, ctx)
    result = generalize_attributes(ctx, scheme)
    _write_output(io.write_cxt(result), args.output)
    return EXIT_OK


def cmd_appose(args) -> int:
    from .context import apposition

    first = io.load_context(args.first)
    second = io.load_context(args.second)
    _write_output(io.write_cxt(apposition(first, second)), args.output)
    return EXIT_OK


def cmd_project(args) -> int:
    ctx = io.load_context(args.context)
    keep = ctx.attribute_set(name.strip() for name in args.keep.split(","))
    _write_output(io.write_cxt(ctx.project_attributes(keep)), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    ctx = io.load_context(args.context)
    scheme = _load_scheme(args.scheme, ctx)
    scheme.validate(ctx)
    verdicts = []
    for group in scheme.groups:
        cls = analysis.classify_group(ctx, group.members, scheme.mode, group.alpha)
        verdicts.append((group, cls))
    if args.json:
        doc = {
            "format_version": 1,
            "context": ctx.name,
            "mode": scheme.mode.value,
            "groups": [
                {
                    "name": g.name,
                    "kind": c.kind.value,
                    "not_generalization_witnesses": [
                        {"member": ctx.attributes[m], "object": ctx.objects[o]}
                        for m, o in c.not_generalization
                    ],
                    "not_specialization_witnesses": [
                        {"member": ctx.attributes[m], "object": ctx.objects[o]}
                        for m, o in c.not_specialization
                    ],
                }
                for g, c in verdicts
            ],
        }
        _dump_json(doc, args.output)
    else:
        lines = [f"{g.name}: {c.kind.value}" for g, c in verdicts]
        _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    ctx = io.load_context(args.context)
    scheme = _load_scheme(args.scheme, ctx)
    report = analysis.size_report(ctx, scheme, args.ceiling)
    doc: dict = {"format_version": 1, "context": ctx.name, "sizes": report.to_json_dict()}
    text = [report.format_text()]
    if scheme.mode is Mode.FORALL:
        theorem = analysis.verify_forall_theorem(ctx, scheme, args.ceiling)
        doc["forall_theorem"] = theorem.to_json_dict()
        text.append(
            f"universal check: after={theorem.sizes.size_after} <= "
            f"apposed={theorem.size_apposed} = before={theorem.sizes.size_before}"
        )
    if scheme.mode is Mode.EXISTS:
        theorem = analysis.verify_exists_distributive(ctx, scheme, args.ceiling)
        doc["exists_distributive"] = theorem.to_json_dict()
        text.append(
            "distributive check: "
            + ("holds" if theorem.applicable else f"inapplicable ({theorem.reason})")
        )
        if scheme.is_partition(ctx):
            source = enumerate_concepts(ctx, args.ceiling)
            target = enumerate_concepts(generalize_attributes(ctx, scheme), args.ceiling)
            phi = analysis.build_phi(source, target, scheme)
            psi = analysis.build_psi(source, target, scheme)
            phi_onto, phi_missing = analysis.check_surjective(phi)
            psi_onto, psi_missing = analysis.check_surjective(psi)
            doc["maps"] = {
                "phi_surjective": phi_onto,
                "phi_uncovered": list(phi_missing),
                "psi_surjective": psi_onto,
                "psi_uncovered": list(psi_missing),
            }
            text.append(
                f"phi surjective: {phi_onto}; psi surjective: {psi_onto}"
            )
    if args.json:
        _dump_json(doc, args.output)
    else:
        _write_output("\n".join(text) + "\n", args.output)
    return EXIT_OK


def cmd_rules(args) -> int:
    ctx = io.load_context(args.context)
    mined = rules.mine_strong_rules(ctx, args.minsupp, args.minconf, args.ceiling)
    if args.diff:
        if not args.scheme:
            raise GenconceptError("--diff needs --scheme")
        scheme = _load_scheme(args.scheme, ctx)
        after_ctx = generalize_attributes(ctx, scheme)
        after = rules.mine_strong_rules(after_ctx, args.minsupp, args.minconf, args.ceiling)
        diff = rules.diff_rulesets(mined, after, ctx, after_ctx, scheme)
        doc = {
            "format_version": 1,
            "only_before": rules.rules_to_json(ctx, diff.only_before)["rules"],
            "only_after": rules.rules_to_json(after_ctx, diff.only_after)["rules"],
            "shared": [
                {
                    "before": rules.rules_to_json(ctx, [b])["rules"][0],
                    "after": rules.rules_to_json(after_ctx, [a])["rules"][0],
                }
                for b, a in diff.shared
            ],
        }
        _dump_json(doc, args.output)
        return EXIT_OK
    if args.csv:
        _write_output(rules.rules_to_csv(ctx, mined), args.output)
    else:
        _dump_json(rules.rules_to_json(ctx, mined), args.output)
    return EXIT_OK


def cmd_propose(args) -> int:
    ctx = io.load_context(args.context)
    proposals = propose_groupings(ctx, args.minsupp, Mode(args.mode), ceiling=args.ceiling)
    doc = {
        "format_version": 1,
        "context": ctx.name,
        "minsupp": str(args.minsupp),
        "mode": args.mode,
        "proposals": [
            {
                "name": p.name,
                "members": ctx.attribute_names(p.members),
                "support": str(p.support),
                "residual": p.residual,
            }
            for p in proposals
        ],
    }
    _dump_json(doc, args.output)
    return EXIT_OK


def cmd_synth(args) -> int:
    ctx = synth.generate_context(args.objects, args.attributes, args.density, args.seed)
    _write_output(io.write_cxt(ctx), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = synth.SweepGrid(
        args.objects,
        args.attributes,
        args.density,
        tuple(int(f) for f in args.fanouts.split(",")),
        tuple(Mode(m) for m in args.modes.split(",")),
        args.seeds,
        args.seed_base,
    )
    records = synth.sweep(grid, args.ceiling)
    _write_output(synth.records_to_csv(records), args.output)
    return EXIT_OK


def cmd_plot_data(args) -> int:
    records = synth.records_from_csv(Path(args.csv).read_text())
    lines = ["fanout,median_ratio"]
    for fanout, ratio in synth.median_ratios_by_fanout(records):
        lines.append(f"{fanout},{float(ratio)!r}")
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_export_nested(args) -> int:
    ctx = io.load_context(args.context)
    scheme = _load_scheme(args.scheme, ctx)
    _dump_json(analysis.nested_structure(ctx, scheme, args.ceiling), args.output)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import run_server

    run_server(
        listen=args.listen,
        state_dir=args.state_dir,
        ceiling=args.ceiling,
        static_dir=args.static_dir,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genconcept",
        description="Concept lattices with attribute/object grouping transforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, scheme=False):
        p.add_argument("context", help="input context (.cxt, .csv, .json)")
        if scheme:
            p.add_argument("--scheme", required=True, help="grouping scheme JSON file")
        p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        p.add_argument(
            "--ceiling",
            type=int,
            default=DEFAULT_CEILING,
            help="concept-count ceiling before aborting",
        )

    p = sub.add_parser("lattice", help="enumerate or count concepts")
    add_common(p)
    p.add_argument("--count", action="store_true", help="print only the concept count")
    p.add_argument("--dot", action="store_true", help="emit the covering diagram as DOT")
    p.add_argument("--iceberg", action="store_true", help="list frequent closed intents")
    p.add_argument("--minsupp", type=_fraction, default=None)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("generalize", help="apply a grouping scheme, write .cxt")
    add_common(p, scheme=True)
    p.set_defaults(func=cmd_generalize)

    p = sub.add_parser("appose", help="appose two contexts over the same objects")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_appose)

    p = sub.add_parser("project", help="project onto a comma-separated attribute list")
    add_common(p)
    p.add_argument("--keep", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("classify", help="classify each group of a scheme")
    add_common(p, scheme=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("analyze", help="size report, theorem checks, order maps")
    add_common(p, scheme=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("rules", help="mine strong rules; --diff compares across a scheme")
    add_common(p)
    p.add_argument("--minsupp", type=_fraction, required=True)
    p.add_argument("--minconf", type=_fraction, required=True)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--diff", action="store_true")
    p.add_argument("--scheme", default=None)
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("propose", help="grouping proposals for the wizard flow")
    add_common(p)
    p.add_argument("--minsupp", type=_fraction, required=True)
    p.add_argument("--mode", choices=[Mode.EXISTS.value, Mode.FORALL.value], required=True)
    p.set_defaults(func=cmd_propose)

    p = sub.add_parser("synth", help="generate a Bernoulli context")
    p.add_argument("--objects", type=int, required=True)
    p.add_argument("--attributes", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="fanout sweep over synthetic contexts")
    p.add_argument("--objects", type=int, required=True)
    p.add_argument("--attributes", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--fanouts", required=True, help="comma-separated fanout list")
    p.add_argument("--modes", default=Mode.EXISTS.value)
    p.add_argument("--seeds", type=int, default=1, help="seeds per cell")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot-data", help="median reduction ratio per fanout from a sweep CSV")
    p.add_argument("csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("export-nested", help="two-level nested diagram structure as JSON")
    add_common(p, scheme=True)
    p.set_defaults(func=cmd_export_nested)

    p = sub.add_parser("serve", help="run the grouping wizard HTTP service")
    p.add_argument("--listen", default=None, help="host:port (or GENCONCEPT_LISTEN)")
    p.add_argument("--state-dir", default=None, help="directory for session logs")
    p.add_argument("--static-dir", default=None, help="wizard UI assets to serve at /ui")
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TheoremViolationError as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except ConceptCeilingError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except (GenconceptError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
