"""What grouping does to the lattice: classification, order maps, sizes.

Classification works on column inclusions directly (the union/intersection
column against each member column), which gives the same verdict as the
attribute-concept order in the apposed lattice at linear cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .context import FormalContext, apposition, bits, mask_of
from .errors import PreconditionError, TheoremViolationError
from .generalize import (
    Axis,
    GroupingScheme,
    Mode,
    generalize_attributes,
    group_column,
)
from .lattice import (
    DEFAULT_CEILING,
    ConceptLattice,
    count_concepts,
    enumerate_concepts,
    is_object_reduced,
    iter_concept_masks,
)

__all__ = [
    "ConceptMap",
    "ExistsDistributiveReport",
    "ForallTheoremReport",
    "GenClassification",
    "GenKind",
    "SizeReport",
    "SizeStep",
    "build_phi",
    "build_psi",
    "check_surjective",
    "classify_group",
    "nested_structure",
    "projection_classes",
    "size_report",
    "verify_exists_distributive",
    "verify_forall_theorem",
]


class GenKind(str, Enum):
    GENERALIZATION = "generalization"
    SPECIALIZATION = "specialization"
    EQUIVALENT = "equivalent"
    APPROXIMATION = "approximation"


@dataclass(frozen=True)
class GenClassification:
    """Verdict for one group, with witness objects for failed inclusions.

    not_generalization lists (member, object) with the object in the member
    column but not the group column; not_specialization the converse.
    """

    kind: GenKind
    not_generalization: tuple[tuple[int, int], ...] = ()
    not_specialization: tuple[tuple[int, int], ...] = ()


def classify_group(
    ctx: FormalContext,
    members: Iterable[int],
    mode: Mode,
    alpha: Fraction | None = None,
) -> GenClassification:
    members = sorted(set(members))
    if not members:
        raise PreconditionError("cannot classify an empty group")
    col = group_column(ctx, members, mode, alpha)
    not_gen = []
    not_spec = []
    for m in members:
        mcol = ctx.cols[m]
        missing = mcol & ~col  # breaks "group column contains member column"
        if missing:
            not_gen.append((m, (missing & -missing).bit_length() - 1))
        extra = col & ~mcol  # breaks "group column inside member column"
        if extra:
            not_spec.append((m, (extra & -extra).bit_length() - 1))
    if not not_gen and not not_spec:
        kind = GenKind.EQUIVALENT
    elif not not_gen:
        kind = GenKind.GENERALIZATION
    elif not not_spec:
        kind = GenKind.SPECIALIZATION
    else:
        kind = GenKind.APPROXIMATION
    return GenClassification(kind, tuple(not_gen), tuple(not_spec))


# -- order-preserving maps into the generalized lattice -------------------------


@dataclass(frozen=True)
class ConceptMap:
    """Total map from source-lattice concepts to target-lattice concepts."""

    kind: str  # "phi" | "psi"
    source: ConceptLattice
    target: ConceptLattice
    mapping: tuple[int, ...]

    def image(self) -> frozenset[int]:
        return frozenset(self.mapping)


def _check_partition_exists(ctx: FormalContext, scheme: GroupingScheme) -> None:
    if scheme.axis is not Axis.ATTRIBUTES or scheme.mode is not Mode.EXISTS:
        raise PreconditionError("the order maps need an existential attribute scheme")
    if not scheme.is_partition(ctx):
        raise PreconditionError("the order maps need a partition of the attributes")


def _check_target(
    ctx: FormalContext, scheme: GroupingScheme, target: ConceptLattice
) -> FormalContext:
    generalized = generalize_attributes(ctx, scheme)
    if (
        generalized.attributes != target.context.attributes
        or generalized.rows != target.context.rows
    ):
        raise PreconditionError(
            "target lattice was not built from this context and scheme"
        )
    return generalized


def build_phi(
    source: ConceptLattice, target: ConceptLattice, scheme: GroupingScheme
) -> ConceptMap:
    """(A, B) ↦ join of the generalized object concepts over A."""
    ctx = source.context
    _check_partition_exists(ctx, scheme)
    gen = _check_target(ctx, scheme, target)
    mapping = []
    for extent in source.extent_masks:
        closed = gen.extent_mask(gen.intent_mask(extent))
        mapping.append(target.index_by_extent_mask(closed))
    return ConceptMap("phi", source, target, tuple(mapping))


def build_psi(
    source: ConceptLattice, target: ConceptLattice, scheme: GroupingScheme
) -> ConceptMap:
    """(A, B) ↦ meet of the generalized attribute concepts over B.

    An empty intent meets over nothing and lands on the target top.
    """
    ctx = source.context
    _check_partition_exists(ctx, scheme)
    gen = _check_target(ctx, scheme, target)
    member_to_group = scheme.member_to_group(ctx)
    mapping = []
    for intent in source.intent_masks:
        ext = gen.full_objects
        for m in bits(intent):
            ext &= gen.cols[member_to_group[m]]
        mapping.append(target.index_by_extent_mask(gen.extent_mask(gen.intent_mask(ext))))
    return ConceptMap("psi", source, target, tuple(mapping))


def check_surjective(cmap: ConceptMap) -> tuple[bool, tuple[int, ...]]:
    """Surjectivity verdict plus the unhit target concept indices."""
    hit = cmap.image()
    uncovered = tuple(i for i in range(len(cmap.target)) if i not in hit)
    return not uncovered, uncovered


# -- projection equivalence classes ----------------------------------------------


def projection_classes(
    lat: ConceptLattice, attrs: Iterable[int]
) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Partition concepts by the restriction of their intents to ``attrs``.

    Two concepts land in the same class iff their intents agree on the
    projection attributes; the class count equals the concept count of the
    projected context.
    """
    mask = mask_of(attrs, lat.context.n_attributes, "attribute index")
    classes: dict[int, list[int]] = {}
    for i, intent in enumerate(lat.intent_masks):
        classes.setdefault(intent & mask, []).append(i)
    return [
        (frozenset(bits(key)), tuple(members))
        for key, members in sorted(classes.items(), key=lambda kv: kv[1][0])
    ]


# -- size accounting ----------------------------------------------------------------


@dataclass(frozen=True)
class SizeStep:
    label: str
    size_before: int
    size_after: int


@dataclass(frozen=True)
class SizeReport:
    size_before: int
    size_after: int
    steps: tuple[SizeStep, ...] = ()

    @property
    def delta(self) -> int:
        return self.size_after - self.size_before

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.size_before, self.size_after)

    def to_json_dict(self) -> dict:
        return {
            "size_before": self.size_before,
            "size_after": self.size_after,
            "delta": self.delta,
            "ratio": str(self.ratio),
            "steps": [
                {"label": s.label, "size_before": s.size_before, "size_after": s.size_after}
                for s in self.steps
            ],
        }

    def format_text(self) -> str:
        sign = "+" if self.delta >= 0 else ""
        lines = [
            f"concepts before: {self.size_before}",
            f"concepts after:  {self.size_after}",
            f"delta:           {sign}{self.delta}",
            f"ratio:           {self.ratio} ({float(self.ratio):.4g})",
        ]
        for s in self.steps:
            lines.append(f"  step {s.label}: {s.size_before} -> {s.size_after}")
        return "\n".join(lines)


def size_report(
    ctx: FormalContext,
    schemes: GroupingScheme | Iterable[GroupingScheme],
    ceiling: int = DEFAULT_CEILING,
) -> SizeReport:
    """Sizes before/after applying one scheme or a sequence of schemes."""
    if isinstance(schemes, GroupingScheme):
        schemes = [schemes]
    size_before = count_concepts(ctx, ceiling)
    current = ctx
    prev = size_before
    steps = []
    for k, scheme in enumerate(schemes, start=1):
        current = generalize_attributes(current, scheme)
        size = count_concepts(current, ceiling)
        steps.append(SizeStep(f"{k}:{scheme.mode.value}", prev, size))
        prev = size
    return SizeReport(size_before, prev, tuple(steps))


# -- theorem checks -------------------------------------------------------------------


@dataclass(frozen=True)
class ForallTheoremReport:
    sizes: SizeReport
    size_apposed: int
    group_extents: tuple[tuple[str, bool], ...]  # (group name, column is an original extent)

    def to_json_dict(self) -> dict:
        doc = self.sizes.to_json_dict()
        doc["size_apposed"] = self.size_apposed
        doc["group_columns_are_extents"] = {n: ok for n, ok in self.group_extents}
        return doc


def verify_forall_theorem(
    ctx: FormalContext, scheme: GroupingScheme, ceiling: int = DEFAULT_CEILING
) -> ForallTheoremReport:
    """Universal grouping cannot grow the lattice; apposition keeps its size.

    Checks that every group column is an extent of the original context and
    that |B(G,S,J)| ≤ |B(G,M∪S,I∪J)| = |B(G,M,I)|.  A failure is raised as a
    theorem violation: it means a bug, not a data condition.
    """
    if scheme.mode is not Mode.FORALL:
        raise PreconditionError("this check applies to universal schemes")
    generalized = generalize_attributes(ctx, scheme)
    witnesses = []
    for group, col in zip(
        scheme.effective_groups(ctx),
        generalized.cols,
    ):
        is_extent = ctx.extent_mask(ctx.intent_mask(col)) == col
        witnesses.append((group.name, is_extent))
    size_before = count_concepts(ctx, ceiling)
    size_after = count_concepts(generalized, ceiling)
    size_apposed = count_concepts(apposition(ctx, generalized), ceiling)
    report = ForallTheoremReport(
        SizeReport(size_before, size_after), size_apposed, tuple(witnesses)
    )
    if not all(ok for _, ok in witnesses):
        bad = [n for n, ok in witnesses if not ok]
        raise TheoremViolationError(f"universal columns are not extents: {bad}")
    if not (size_after <= size_apposed == size_before):
        raise TheoremViolationError(
            f"size inequality failed: after={size_after} apposed={size_apposed} "
            f"before={size_before}"
        )
    return report


@dataclass(frozen=True)
class ExistsDistributiveReport:
    applicable: bool
    reason: str
    sizes: SizeReport | None
    group_extents: tuple[tuple[str, bool], ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "sizes": self.sizes.to_json_dict() if self.sizes else None,
            "group_columns_are_extents": {n: ok for n, ok in self.group_extents},
        }


def verify_exists_distributive(
    ctx: FormalContext, scheme: GroupingScheme, ceiling: int = DEFAULT_CEILING
) -> ExistsDistributiveReport:
    """Existential grouping shrinks distributive, object-reduced contexts.

    When the hypotheses fail the result is marked inapplicable rather than
    treated as a violation; the counterexample context that grows 7 -> 8
    must not read as a failure.
    """
    if scheme.mode is not Mode.EXISTS:
        raise PreconditionError("this check applies to existential schemes")
    if not is_object_reduced(ctx):
        return ExistsDistributiveReport(False, "context is not object reduced", None)
    lat = enumerate_concepts(ctx, ceiling)
    if not lat.is_distributive():
        return ExistsDistributiveReport(False, "lattice is not distributive", None)
    generalized = generalize_attributes(ctx, scheme)
    witnesses = []
    for group, col in zip(scheme.effective_groups(ctx), generalized.cols):
        is_extent = ctx.extent_mask(ctx.intent_mask(col)) == col
        witnesses.append((group.name, is_extent))
    size_after = count_concepts(generalized, ceiling)
    report = ExistsDistributiveReport(
        True, "hypotheses hold", SizeReport(len(lat), size_after), tuple(witnesses)
    )
    if not all(ok for _, ok in witnesses):
        bad = [n for n, ok in witnesses if not ok]
        raise TheoremViolationError(f"existential columns are not extents: {bad}")
    if size_after > len(lat):
        raise TheoremViolationError(
            f"size increased under the theorem's hypotheses: {len(lat)} -> {size_after}"
        )
    return report


# -- nested two-level structure ---------------------------------------------------------


def nested_structure(
    ctx: FormalContext, scheme: GroupingScheme, ceiling: int = DEFAULT_CEILING
) -> dict:
    """Two-level nested diagram data: outer generalized, inner original.

    Every outer node holds a copy of the inner lattice; a copy node is
    ``realized`` when the union of the outer and inner intents is closed in
    the apposed context, i.e. the pair is an actual combined concept.
    """
    generalized = generalize_attributes(ctx, scheme)
    combined = apposition(ctx, generalized)
    shift = ctx.n_attributes
    outer = enumerate_concepts(generalized, ceiling)
    inner = enumerate_concepts(ctx, ceiling)
    combined_intents = set()
    for intent, _ in iter_concept_masks(combined, ceiling):
        combined_intents.add(intent)
    cells = []
    for oi, o_intent in enumerate(outer.intent_masks):
        realized = [
            ii
            for ii, i_intent in enumerate(inner.intent_masks)
            if (i_intent | (o_intent << shift)) in combined_intents
        ]
        cells.append({"outer": oi, "realized": realized})
    gen_io = generalized
    return {
        "format_version": 1,
        "context": ctx.name,
        "outer": {
            "attributes": list(gen_io.attributes),
            "concepts": [
                {
                    "extent": gen_io.object_names(c.extent),
                    "intent": gen_io.attribute_names(c.intent),
                }
                for c in outer.concepts
            ],
            "covers": [list(e) for e in outer.covers],
        },
        "inner": {
            "attributes": list(ctx.attributes),
            "concepts": [
                {
                    "extent": ctx.object_names(c.extent),
                    "intent": ctx.attribute_names(c.intent),
                }
                for c in inner.concepts
            ],
            "covers": [list(e) for e in inner.covers],
        },
        "cells": cells,
    }
