#!/usr/bin/env python3
"""Walk the worked examples end to end and print what each step shows.

Loads the two bundled contexts, applies the three grouping transforms,
compares lattice sizes, classifies the groups, and mines the headline
implications.  Useful as a smoke test and as executable documentation.
"""

from fractions import Fraction
from pathlib import Path

from genconcept.analysis import classify_group, size_report
from genconcept.generalize import Mode, propose_groupings, scheme_from_json
from genconcept.io import load_context
from genconcept.lattice import count_concepts
from genconcept.generalize import generalize_attributes
from genconcept.rules import is_valid_implication

import json

DATA = Path(__file__).parent.parent / "tests" / "data"


def main() -> None:
    small = load_context(DATA / "smallcxt.cxt")
    init = load_context(DATA / "initlattice.cxt")

    print(f"small context: {count_concepts(small)} concepts")
    merge = scheme_from_json(json.loads((DATA / "scheme-merge-m12.json").read_text()), small)
    report = size_report(small, merge)
    print(
        f"after merging m1, m2 existentially: {report.size_after} concepts "
        f"(delta {report.delta:+d}) -- grouping can grow the lattice"
    )

    for scheme_file in ("scheme-exists-abcd", "scheme-forall-stuv", "scheme-alpha-efh"):
        scheme = scheme_from_json(
            json.loads((DATA / f"{scheme_file}.json").read_text()), init
        )
        merged = generalize_attributes(init, scheme)
        report = size_report(init, scheme)
        kinds = {
            g.name: classify_group(init, g.members, scheme.mode, g.alpha).kind.value
            for g in scheme.groups
        }
        print(
            f"{scheme.mode.value:>6} grouping: {report.size_before} -> "
            f"{report.size_after} concepts; classes {kinds}"
        )
        if scheme.mode is Mode.EXISTS:
            d, a = merged.attribute_set(["D"]), merged.attribute_set(["A"])
            print(f"        implication D => A valid: {is_valid_implication(merged, d, a)}")
        if scheme.mode is Mode.ALPHA:
            h, f = merged.attribute_set(["H"]), merged.attribute_set(["F"])
            print(f"        implication H => F valid: {is_valid_implication(merged, h, f)}")

    print("wizard proposals on the small context at minsupp 3/5:")
    for p in propose_groupings(small, Fraction(3, 5), Mode.EXISTS):
        flag = " (residual, below threshold)" if p.residual else ""
        members = ", ".join(small.attribute_names(p.members))
        print(f"  {p.name}: {{{members}}} support {p.support}{flag}")


if __name__ == "__main__":
    main()
