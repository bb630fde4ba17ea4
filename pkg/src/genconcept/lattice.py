"""Concept enumeration and the concept lattice.

Enumeration is Ganter-style next-closure over attribute bitmasks, which
yields intents in lectic order; that order is the canonical concept order
everywhere (golden files, JSON exports, rule mining).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

from .context import FormalContext, SupportValue, bits, mask_of
from .errors import ArgumentError, ConceptCeilingError, DimensionError

__all__ = [
    "DEFAULT_CEILING",
    "Concept",
    "ConceptLattice",
    "count_concepts",
    "enumerate_concepts",
    "iceberg_intents",
    "is_object_reduced",
    "iter_concept_masks",
    "lattice_to_dot",
    "lattice_to_json",
]

# Real data sets can reach hundreds of millions of concepts; desk runs must
# fail fast instead of looping for hours.
DEFAULT_CEILING = 10**7


@dataclass(frozen=True)
class Concept:
    extent: frozenset[int]
    intent: frozenset[int]


def iter_concept_masks(
    ctx: FormalContext, ceiling: int = DEFAULT_CEILING
) -> Iterator[tuple[int, int]]:
    """Yield (intent_mask, extent_mask) for every concept in lectic order."""
    ctx._require_derivable()
    n = ctx.n_attributes
    full = ctx.full_attributes
    extent = ctx.full_objects
    intent = ctx.intent_mask(extent)
    extent = ctx.extent_mask(intent)
    produced = 0
    while True:
        produced += 1
        if produced > ceiling:
            raise ConceptCeilingError(ceiling)
        yield intent, extent
        if intent == full:
            return
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if intent & bit:
                continue
            below = bit - 1
            ext = ctx.extent_mask((intent & below) | bit)
            candidate = ctx.intent_mask(ext)
            if candidate & below == intent & below:
                intent, extent = candidate, ext
                break


def count_concepts(ctx: FormalContext, ceiling: int = DEFAULT_CEILING) -> int:
    """Number of concepts, streamed without storing the lattice."""
    count = 0
    for _ in iter_concept_masks(ctx, ceiling):
        count += 1
    return count


def enumerate_concepts(
    ctx: FormalContext, ceiling: int = DEFAULT_CEILING
) -> "ConceptLattice":
    intents = []
    extents = []
    for intent, extent in iter_concept_masks(ctx, ceiling):
        intents.append(intent)
        extents.append(extent)
    return ConceptLattice(ctx, tuple(intents), tuple(extents))


class ConceptLattice:
    """All concepts of a context in lectic order, with lattice structure."""

    def __init__(
        self,
        context: FormalContext,
        intent_masks: tuple[int, ...],
        extent_masks: tuple[int, ...],
    ):
        self.context = context
        self.intent_masks = intent_masks
        self.extent_masks = extent_masks
        self._by_extent = {e: i for i, e in enumerate(extent_masks)}
        self._by_intent = {b: i for i, b in enumerate(intent_masks)}

    def __len__(self) -> int:
        return len(self.intent_masks)

    @cached_property
    def concepts(self) -> tuple[Concept, ...]:
        return tuple(
            Concept(frozenset(bits(e)), frozenset(bits(b)))
            for b, e in zip(self.intent_masks, self.extent_masks)
        )

    # -- lookups -------------------------------------------------------------

    def index_of(self, concept: Concept) -> int:
        mask = mask_of(concept.extent, self.context.n_objects, "object index")
        idx = self._by_extent.get(mask)
        if idx is None or self.concepts[idx].intent != concept.intent:
            raise ArgumentError("concept does not belong to this lattice")
        return idx

    def index_by_extent_mask(self, mask: int) -> int:
        idx = self._by_extent.get(mask)
        if idx is None:
            raise ArgumentError("no concept with that extent in this lattice")
        return idx

    @cached_property
    def gamma(self) -> tuple[int, ...]:
        """gamma[g] = index of the object concept (g″, g′)."""
        ctx = self.context
        return tuple(
            self._by_extent[ctx.extent_mask(ctx.intent_mask(1 << g))]
            for g in range(ctx.n_objects)
        )

    @cached_property
    def mu(self) -> tuple[int, ...]:
        """mu[m] = index of the attribute concept (m′, m″)."""
        ctx = self.context
        return tuple(
            self._by_extent[ctx.cols[m]] for m in range(ctx.n_attributes)
        )

    @property
    def top(self) -> int:
        return self._by_extent[self.context.full_objects]

    @property
    def bottom(self) -> int:
        return self._by_intent[self.context.full_attributes]

    # -- order ---------------------------------------------------------------

    def leq_index(self, i: int, j: int) -> bool:
        return self.extent_masks[i] & ~self.extent_masks[j] == 0

    def leq(self, c1: Concept, c2: Concept) -> bool:
        return self.leq_index(self.index_of(c1), self.index_of(c2))

    def meet_index(self, indices: Iterable[int]) -> int:
        ext = self.context.full_objects
        for i in indices:
            ext &= self.extent_masks[i]
        # an intersection of extents is again an extent
        return self._by_extent[self.context.extent_mask(self.context.intent_mask(ext))]

    def join_index(self, indices: Iterable[int]) -> int:
        it = self.context.full_attributes
        for i in indices:
            it &= self.intent_masks[i]
        return self._by_intent[self.context.intent_mask(self.context.extent_mask(it))]

    def meet(self, concepts: Iterable[Concept]) -> Concept:
        return self.concepts[self.meet_index(self.index_of(c) for c in concepts)]

    def join(self, concepts: Iterable[Concept]) -> Concept:
        return self.concepts[self.join_index(self.index_of(c) for c in concepts)]

    # -- covering relation -----------------------------------------------------

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Transitive reduction of the order as (child, parent) pairs.

        Pairwise extent containment filtered to immediate neighbours;
        quadratic, which is fine at desk scale.
        """
        order = sorted(range(len(self)), key=lambda i: self.extent_masks[i].bit_count())
        edges = []
        for pos, c in enumerate(order):
            ec = self.extent_masks[c]
            parents: list[int] = []
            for d in order[pos + 1:]:
                ed = self.extent_masks[d]
                if ec & ~ed or ec == ed:
                    continue
                if any(self.extent_masks[p] & ~ed == 0 for p in parents):
                    continue  # a known parent lies below d, so d is not a cover
                parents.append(d)
            edges.extend((c, p) for p in parents)
        return tuple(sorted(edges))

    # -- structural predicates ---------------------------------------------------

    def is_distributive(self) -> bool:
        """Exhaustive x∧(y∨z) = (x∧y)∨(x∧z) over all index triples."""
        n = len(self)
        meet = [[self.meet_index((i, j)) for j in range(n)] for i in range(n)]
        join = [[self.join_index((i, j)) for j in range(n)] for i in range(n)]
        for x in range(n):
            mx = meet[x]
            for y in range(n):
                jy = join[y]
                mxy = mx[y]
                for z in range(n):
                    if mx[jy[z]] != join[mxy][mx[z]]:
                        return False
        return True


def is_object_reduced(ctx: FormalContext) -> bool:
    """No row equals the intersection of the other rows containing it.

    The empty intersection counts as the full attribute set, so a row with
    every attribute and no duplicate is reducible by convention.
    """
    for g, row in enumerate(ctx.rows):
        inter = ctx.full_attributes
        for h, other in enumerate(ctx.rows):
            if h != g and row & ~other == 0:
                inter &= other
        if inter == row:
            return False
    return True


def iceberg_intents(
    ctx: FormalContext,
    minsupp: Fraction,
    ceiling: int = DEFAULT_CEILING,
) -> list[tuple[frozenset[int], SupportValue]]:
    """Closed intents with support ≥ minsupp, in lectic order."""
    if not 0 < minsupp <= 1:
        raise ArgumentError(f"minsupp must be in (0, 1], got {minsupp}")
    out = []
    n = ctx.n_objects
    for intent, extent in iter_concept_masks(ctx, ceiling):
        supp = SupportValue(extent.bit_count(), n)
        if supp.fraction >= minsupp:
            out.append((frozenset(bits(intent)), supp))
    return out


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def lattice_to_dot(lat: ConceptLattice) -> str:
    """Covering diagram with reduced labeling.

    Each node label carries the attributes introduced there (the m with
    μm = node) on the first line and the objects introduced there (γg =
    node) on the second, matching the usual diagram convention of attribute
    labels above and object labels below a node.
    """
    ctx = lat.context
    attr_at: dict[int, list[str]] = {}
    for m, idx in enumerate(lat.mu):
        attr_at.setdefault(idx, []).append(ctx.attributes[m])
    obj_at: dict[int, list[str]] = {}
    for g, idx in enumerate(lat.gamma):
        obj_at.setdefault(idx, []).append(ctx.objects[g])
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=ellipse];"]
    for i in range(len(lat)):
        top = _dot_escape(", ".join(attr_at.get(i, [])))
        bottom = _dot_escape(", ".join(obj_at.get(i, [])))
        lines.append(f'  c{i} [label="{top}\\n{bottom}"];')
    for child, parent in lat.covers:
        lines.append(f"  c{child} -> c{parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_json(lat: ConceptLattice) -> dict:
    ctx = lat.context
    return {
        "format_version": 1,
        "context": ctx.name,
        "concepts": [
            {
                "extent": ctx.object_names(c.extent),
                "intent": ctx.attribute_names(c.intent),
            }
            for c in lat.concepts
        ],
        "covers": [list(edge) for edge in lat.covers],
        "object_concept": {ctx.objects[g]: i for g, i in enumerate(lat.gamma)},
        "attribute_concept": {ctx.attributes[m]: i for m, i in enumerate(lat.mu)},
    }
