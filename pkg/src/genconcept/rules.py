"""Association rules over closed itemsets, and the before/after diff.

Rule generation stays on closed-intent pairs: every frequent itemset has a
frequent closed closure with equal support, so nothing is lost and the
candidate space collapses to the iceberg lattice.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .context import FormalContext, SupportValue, mask_of
from .errors import ArgumentError
from .generalize import GroupingScheme
from .lattice import DEFAULT_CEILING, iceberg_intents

__all__ = [
    "AssociationRule",
    "RuleDiff",
    "diff_rulesets",
    "is_valid_implication",
    "mine_strong_rules",
    "rules_to_csv",
    "rules_to_json",
]


@dataclass(frozen=True)
class AssociationRule:
    premise: frozenset[int]
    conclusion: frozenset[int]
    support: SupportValue
    confidence: Fraction

    def __post_init__(self) -> None:
        if self.premise & self.conclusion:
            raise ArgumentError("premise and conclusion must be disjoint")

    def key(self) -> tuple[frozenset[int], frozenset[int]]:
        return (self.premise, self.conclusion)


def is_valid_implication(
    ctx: FormalContext, premise: Iterable[int], conclusion: Iterable[int]
) -> bool:
    """True iff every object with all premise attributes has the conclusion."""
    p = mask_of(premise, ctx.n_attributes, "attribute index")
    c = mask_of(conclusion, ctx.n_attributes, "attribute index")
    return ctx.extent_mask(p) & ~ctx.extent_mask(c) == 0


def mine_strong_rules(
    ctx: FormalContext,
    minsupp: Fraction,
    minconf: Fraction,
    ceiling: int = DEFAULT_CEILING,
) -> list[AssociationRule]:
    """Rules B1 -> B2∖B1 over frequent closed intents B1 ⊂ B2.

    The rule support is the support of the union (= of B2); confidence
    divides by the premise support.  Output order is lectic by premise,
    then by conclusion source.
    """
    if not 0 < minconf <= 1:
        raise ArgumentError(f"minconf must be in (0, 1], got {minconf}")
    frequent = iceberg_intents(ctx, minsupp, ceiling)  # validates minsupp
    rules = []
    for premise, psupp in frequent:
        for total, tsupp in frequent:
            if premise < total:
                conf = Fraction(tsupp.count, psupp.count)
                if conf >= minconf:
                    rules.append(
                        AssociationRule(premise, total - premise, tsupp, conf)
                    )
    return rules


@dataclass(frozen=True)
class RuleDiff:
    """Three-way split of rule sets across a generalization."""

    only_before: tuple[AssociationRule, ...]
    only_after: tuple[AssociationRule, ...]
    shared: tuple[tuple[AssociationRule, AssociationRule], ...]


def diff_rulesets(
    before: Iterable[AssociationRule],
    after: Iterable[AssociationRule],
    ctx_before: FormalContext,
    ctx_after: FormalContext,
    scheme: GroupingScheme,
) -> RuleDiff:
    """Match rules after renaming every member to its group's name.

    A renamed conclusion that collapses into the premise cannot match any
    mined rule and stays in only_before.
    """
    member_to_group = scheme.member_to_group(ctx_before)
    groups = scheme.effective_groups(ctx_before)

    def rename(attrs: frozenset[int]) -> frozenset[int]:
        out = set()
        for m in attrs:
            if m not in member_to_group:
                raise ArgumentError(
                    f"attribute {ctx_before.attributes[m]!r} is not covered by the scheme"
                )
            out.add(ctx_after.attribute_index(groups[member_to_group[m]].name))
        return frozenset(out)

    after = list(after)
    after_by_key = {}
    for rule in after:
        after_by_key.setdefault(rule.key(), rule)
    only_before = []
    shared = []
    matched_after_keys = set()
    for rule in before:
        premise = rename(rule.premise)
        conclusion = rename(rule.conclusion) - premise
        if not conclusion:
            only_before.append(rule)
            continue
        image = after_by_key.get((premise, conclusion))
        if image is None:
            only_before.append(rule)
        else:
            shared.append((rule, image))
            matched_after_keys.add((premise, conclusion))
    only_after = [r for r in after if r.key() not in matched_after_keys]
    return RuleDiff(tuple(only_before), tuple(only_after), tuple(shared))


def _names(ctx: FormalContext, attrs: frozenset[int]) -> str:
    return ",".join(ctx.attribute_names(attrs))


def rules_to_csv(ctx: FormalContext, rules: Iterable[AssociationRule]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["premise", "conclusion", "support", "confidence"])
    for r in rules:
        writer.writerow(
            [_names(ctx, r.premise), _names(ctx, r.conclusion), str(r.support), str(r.confidence)]
        )
    return buf.getvalue()


def rules_to_json(ctx: FormalContext, rules: Iterable[AssociationRule]) -> dict:
    return {
        "format_version": 1,
        "context": ctx.name,
        "rules": [
            {
                "premise": ctx.attribute_names(r.premise),
                "conclusion": ctx.attribute_names(r.conclusion),
                "support": str(r.support),
                "confidence": str(r.confidence),
            }
            for r in rules
        ],
    }
