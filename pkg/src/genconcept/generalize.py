"""Grouping transforms on contexts.

Covers the three attribute generalizations (existential, universal, and
threshold-fraction), their duals on objects, the nine group-to-group
relation cases of a hypercontext, taxonomy roll-up, and the proposal
engine behind the interactive grouping wizard.

Threshold comparisons are exact rationals with inclusive ≥, never floats;
boundary cases like "7 courses out of |s|" must not flip on rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .context import FormalContext, SupportValue, bits, mask_of
from .errors import ArgumentError, FormatError, SchemeError, TaxonomyError
from .lattice import DEFAULT_CEILING, iceberg_intents

__all__ = [
    "Axis",
    "Group",
    "GroupingProposal",
    "GroupingScheme",
    "HyperRelationSpec",
    "Mode",
    "TaxNode",
    "Taxonomy",
    "generalize_alpha",
    "generalize_attributes",
    "generalize_exists",
    "generalize_forall",
    "generalize_objects",
    "group_column",
    "hypercontext",
    "merged_name",
    "propose_groupings",
    "roll_up",
    "scheme_from_json",
    "scheme_to_json",
    "taxonomy_from_json",
    "taxonomy_to_json",
]


class Axis(str, Enum):
    ATTRIBUTES = "attributes"
    OBJECTS = "objects"


class Mode(str, Enum):
    EXISTS = "exists"
    FORALL = "forall"
    ALPHA = "alpha"


@dataclass(frozen=True)
class Group:
    """One named group of axis members, with a threshold in alpha mode."""

    name: str
    members: frozenset[int]
    alpha: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))


@dataclass(frozen=True)
class GroupingScheme:
    axis: Axis
    mode: Mode
    groups: tuple[Group, ...]
    keep_ungrouped: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "axis", Axis(self.axis))
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "groups", tuple(self.groups))

    def axis_size(self, ctx: FormalContext) -> int:
        return ctx.n_attributes if self.axis is Axis.ATTRIBUTES else ctx.n_objects

    def axis_names(self, ctx: FormalContext) -> tuple[str, ...]:
        return ctx.attributes if self.axis is Axis.ATTRIBUTES else ctx.objects

    def grouped_members(self) -> frozenset[int]:
        out: set[int] = set()
        for g in self.groups:
            out |= g.members
        return frozenset(out)

    def validate(self, ctx: FormalContext) -> None:
        size = self.axis_size(ctx)
        names = set()
        for g in self.groups:
            if not g.name:
                raise SchemeError("group names must be non-empty")
            if g.name in names:
                raise SchemeError(f"duplicate group name {g.name!r}")
            names.add(g.name)
            if not g.members:
                raise SchemeError(f"group {g.name!r} is empty")
            mask_of(g.members, size, f"{self.axis.value[:-1]} index")
            if self.mode is Mode.ALPHA:
                if g.alpha is None:
                    raise SchemeError(f"group {g.name!r} needs a threshold in alpha mode")
                if not 0 < g.alpha <= 1:
                    raise SchemeError(
                        f"group {g.name!r} threshold {g.alpha} not in (0, 1]"
                    )
        if not self.keep_ungrouped and self.grouped_members() != frozenset(range(size)):
            raise SchemeError(
                "groups must cover the axis unless keep_ungrouped is set"
            )
        axis_names = self.axis_names(ctx)
        ungrouped = self._ungrouped(size)
        for i in ungrouped:
            if axis_names[i] in names:
                raise SchemeError(
                    f"group name {axis_names[i]!r} collides with a pass-through member"
                )

    def _ungrouped(self, size: int) -> list[int]:
        if not self.keep_ungrouped:
            return []
        grouped = self.grouped_members()
        return [i for i in range(size) if i not in grouped]

    def effective_groups(self, ctx: FormalContext) -> list[Group]:
        """Declared groups followed by pass-through singletons in axis order."""
        names = self.axis_names(ctx)
        singles = [
            Group(names[i], frozenset((i,)), Fraction(1) if self.mode is Mode.ALPHA else None)
            for i in self._ungrouped(self.axis_size(ctx))
        ]
        return list(self.groups) + singles

    def is_partition(self, ctx: FormalContext) -> bool:
        total = 0
        union: set[int] = set()
        for g in self.effective_groups(ctx):
            total += len(g.members)
            union |= g.members
        return total == len(union) == self.axis_size(ctx)

    def member_to_group(self, ctx: FormalContext) -> dict[int, int]:
        """Member index -> effective group position; requires a partition."""
        if not self.is_partition(ctx):
            raise SchemeError("this operation requires a partition of the axis")
        out: dict[int, int] = {}
        for pos, g in enumerate(self.effective_groups(ctx)):
            for m in g.members:
                out[m] = pos
        return out


# -- JSON documents (members are referenced by name) --------------------------


def scheme_to_json(scheme: GroupingScheme, ctx: FormalContext) -> dict:
    names = scheme.axis_names(ctx)
    groups = []
    for g in scheme.groups:
        doc: dict = {"name": g.name, "members": [names[i] for i in sorted(g.members)]}
        if g.alpha is not None:
            doc["alpha"] = str(g.alpha)
        groups.append(doc)
    return {
        "format_version": 1,
        "axis": scheme.axis.value,
        "mode": scheme.mode.value,
        "keep_ungrouped": scheme.keep_ungrouped,
        "groups": groups,
    }


def scheme_from_json(doc: dict, ctx: FormalContext) -> GroupingScheme:
    try:
        axis = Axis(doc["axis"])
        mode = Mode(doc["mode"])
        raw_groups = doc["groups"]
    except (KeyError, ValueError, TypeError):
        raise FormatError("scheme document needs axis, mode, groups") from None
    lookup = ctx.attribute_index if axis is Axis.ATTRIBUTES else ctx.object_index
    groups = []
    for raw in raw_groups:
        try:
            name = raw["name"]
            members = frozenset(lookup(n) for n in raw["members"])
        except (KeyError, TypeError):
            raise FormatError("each group needs a name and members") from None
        alpha = Fraction(raw["alpha"]) if "alpha" in raw else None
        groups.append(Group(name, members, alpha))
    scheme = GroupingScheme(axis, mode, tuple(groups), bool(doc.get("keep_ungrouped", False)))
    scheme.validate(ctx)
    return scheme


# -- column kernel -------------------------------------------------------------


def group_column(
    ctx: FormalContext,
    members: Iterable[int],
    mode: Mode,
    alpha: Fraction | None = None,
) -> int:
    """Object bitmask of the generalized column for one attribute group."""
    member_mask = mask_of(members, ctx.n_attributes, "attribute index")
    size = member_mask.bit_count()
    if size == 0:
        raise SchemeError("empty group has no column")
    if mode is Mode.EXISTS:
        col = 0
        for m in bits(member_mask):
            col |= ctx.cols[m]
        return col
    if mode is Mode.FORALL:
        col = ctx.full_objects
        for m in bits(member_mask):
            col &= ctx.cols[m]
        return col
    if alpha is None:
        raise SchemeError("alpha mode needs a threshold")
    col = 0
    for g, row in enumerate(ctx.rows):
        if Fraction((row & member_mask).bit_count(), size) >= alpha:
            col |= 1 << g
    return col


def _apply_attribute_scheme(ctx: FormalContext, scheme: GroupingScheme) -> FormalContext:
    scheme.validate(ctx)
    groups = scheme.effective_groups(ctx)
    columns = [
        group_column(ctx, g.members, scheme.mode, g.alpha) for g in groups
    ]
    rows = tuple(
        sum(1 << j for j, col in enumerate(columns) if col >> g & 1)
        for g in range(ctx.n_objects)
    )
    return FormalContext(
        ctx.objects, tuple(g.name for g in groups), rows, ctx.name
    )


def generalize_attributes(ctx: FormalContext, scheme: GroupingScheme) -> FormalContext:
    if scheme.axis is not Axis.ATTRIBUTES:
        raise SchemeError("attribute transform got an object-axis scheme")
    return _apply_attribute_scheme(ctx, scheme)


def _expect_mode(scheme: GroupingScheme, mode: Mode) -> None:
    if scheme.mode is not mode:
        raise SchemeError(f"expected a {mode.value}-mode scheme, got {scheme.mode.value}")


def generalize_exists(ctx: FormalContext, scheme: GroupingScheme) -> FormalContext:
    """g J s iff some member of s holds for g; the column is the union."""
    _expect_mode(scheme, Mode.EXISTS)
    return generalize_attributes(ctx, scheme)


def generalize_forall(ctx: FormalContext, scheme: GroupingScheme) -> FormalContext:
    """g J s iff every member of s holds for g; the column is the intersection."""
    _expect_mode(scheme, Mode.FORALL)
    return generalize_attributes(ctx, scheme)


def generalize_alpha(ctx: FormalContext, scheme: GroupingScheme) -> FormalContext:
    """g J s iff the fraction of members holding for g is ≥ the group threshold."""
    _expect_mode(scheme, Mode.ALPHA)
    return generalize_attributes(ctx, scheme)


def generalize_objects(ctx: FormalContext, scheme: GroupingScheme) -> FormalContext:
    """Row-wise dual: group objects under the scheme's mode."""
    if scheme.axis is not Axis.OBJECTS:
        raise SchemeError("object transform got an attribute-axis scheme")
    as_attrs = replace(scheme, axis=Axis.ATTRIBUTES)
    return _apply_attribute_scheme(ctx.transpose(), as_attrs).transpose()


# -- hypercontext ---------------------------------------------------------------


def _threshold_for(
    value: Fraction | Mapping[str, Fraction] | None,
    group: Group,
    which: str,
) -> Fraction:
    if isinstance(value, Mapping):
        try:
            value = value[group.name]
        except KeyError:
            raise ArgumentError(f"no {which} threshold for group {group.name!r}") from None
    if value is None:
        raise ArgumentError(f"hypercontext case needs the {which} threshold")
    if not 0 < value <= 1:
        raise ArgumentError(f"{which} threshold {value} not in (0, 1]")
    return value


@dataclass(frozen=True)
class HyperRelationSpec:
    """Which of the nine group-to-group relation cases to apply.

    Cases 1-6 are pure quantifier combinations and ignore thresholds.
    Case 7 asks that an alpha_a share of the object group each reach a
    beta_b share of the attribute group; case 8 swaps the nesting; case 9
    thresholds the incidence density of the rectangle (alpha_a).
    """

    case: int
    alpha_a: Fraction | Mapping[str, Fraction] | None = None
    beta_b: Fraction | Mapping[str, Fraction] | None = None

    def __post_init__(self) -> None:
        if self.case not in range(1, 10):
            raise ArgumentError(f"hypercontext case must be 1..9, got {self.case}")
        if self.case == 9 and isinstance(self.alpha_a, Mapping):
            raise ArgumentError("case 9 takes a single density threshold")


def _hyper_bit(
    ctx: FormalContext,
    spec: HyperRelationSpec,
    obj_group: Group,
    attr_group: Group,
) -> bool:
    b_mask = mask_of(attr_group.members, ctx.n_attributes, "attribute index")
    objs = sorted(obj_group.members)
    n_a = len(objs)
    n_b = b_mask.bit_count()
    rows = [ctx.rows[g] & b_mask for g in objs]
    case = spec.case
    if case == 1:
        return any(rows)
    if case == 2:
        return all(r == b_mask for r in rows)
    if case == 3:
        return all(rows)
    if case == 4:
        inter = b_mask
        for r in rows:
            inter &= r
        return inter != 0
    if case == 5:
        union = 0
        for r in rows:
            union |= r
        return union == b_mask
    if case == 6:
        return any(r == b_mask for r in rows)
    if case == 7:
        beta = _threshold_for(spec.beta_b, attr_group, "beta_b")
        alpha = _threshold_for(spec.alpha_a, obj_group, "alpha_a")
        hits = sum(1 for r in rows if Fraction(r.bit_count(), n_b) >= beta)
        return Fraction(hits, n_a) >= alpha
    if case == 8:
        alpha = _threshold_for(spec.alpha_a, obj_group, "alpha_a")
        beta = _threshold_for(spec.beta_b, attr_group, "beta_b")
        hits = 0
        for m in bits(b_mask):
            holders = sum(1 for r in rows if r >> m & 1)
            if Fraction(holders, n_a) >= alpha:
                hits += 1
        return Fraction(hits, n_b) >= beta
    # case 9: density of the rectangle
    alpha = _threshold_for(spec.alpha_a, obj_group, "density")
    filled = sum(r.bit_count() for r in rows)
    return Fraction(filled, n_a * n_b) >= alpha


def hypercontext(
    ctx: FormalContext,
    object_scheme: GroupingScheme,
    attribute_scheme: GroupingScheme,
    spec: HyperRelationSpec,
) -> FormalContext:
    """Group both axes at once; bit (A, B) is set per the selected case."""
    if object_scheme.axis is not Axis.OBJECTS:
        raise SchemeError("hypercontext needs an object-axis scheme first")
    if attribute_scheme.axis is not Axis.ATTRIBUTES:
        raise SchemeError("hypercontext needs an attribute-axis scheme second")
    object_scheme.validate(ctx)
    attribute_scheme.validate(ctx)
    obj_groups = object_scheme.effective_groups(ctx)
    attr_groups = attribute_scheme.effective_groups(ctx)
    rows = tuple(
        sum(
            1 << j
            for j, bg in enumerate(attr_groups)
            if _hyper_bit(ctx, spec, ag, bg)
        )
        for ag in obj_groups
    )
    return FormalContext(
        tuple(g.name for g in obj_groups),
        tuple(g.name for g in attr_groups),
        rows,
        ctx.name,
    )


# -- taxonomy roll-up ------------------------------------------------------------


@dataclass(frozen=True)
class TaxNode:
    name: str
    children: tuple["TaxNode", ...] = ()


@dataclass(frozen=True)
class Taxonomy:
    """Rooted forest whose leaves name attributes of some context."""

    roots: tuple[TaxNode, ...]

    def __post_init__(self) -> None:
        names = [n.name for n in self.walk()]
        if len(set(names)) != len(names):
            raise TaxonomyError("taxonomy node names must be unique")

    def walk(self) -> list[TaxNode]:
        out: list[TaxNode] = []
        stack = list(self.roots)
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(node.children)
        return out

    def node(self, name: str) -> TaxNode:
        for n in self.walk():
            if n.name == name:
                return n
        raise TaxonomyError(f"unknown taxonomy node {name!r}")

    def leaves_under(self, name: str) -> list[str]:
        node = self.node(name)
        leaves = []
        stack = [node]
        while stack:
            n = stack.pop()
            if n.children:
                stack.extend(n.children)
            else:
                leaves.append(n.name)
        return sorted(leaves)

    def is_ancestor(self, upper: str, lower: str) -> bool:
        node = self.node(upper)
        stack = list(node.children)
        while stack:
            n = stack.pop()
            if n.name == lower:
                return True
            stack.extend(n.children)
        return False


def _tax_node_from_json(doc: dict) -> TaxNode:
    try:
        name = doc["name"]
    except (KeyError, TypeError):
        raise FormatError("taxonomy node needs a name") from None
    children = tuple(_tax_node_from_json(c) for c in doc.get("children", []))
    return TaxNode(name, children)


def taxonomy_from_json(doc) -> Taxonomy:
    if isinstance(doc, list):
        return Taxonomy(tuple(_tax_node_from_json(d) for d in doc))
    return Taxonomy((_tax_node_from_json(doc),))


def _tax_node_to_json(node: TaxNode) -> dict:
    out: dict = {"name": node.name}
    if node.children:
        out["children"] = [_tax_node_to_json(c) for c in node.children]
    return out


def taxonomy_to_json(tax: Taxonomy) -> dict | list:
    docs = [_tax_node_to_json(r) for r in tax.roots]
    return docs[0] if len(docs) == 1 else docs


def roll_up(
    ctx: FormalContext,
    tax: Taxonomy,
    cut: Iterable[str],
    keep_ungrouped: bool = True,
) -> GroupingScheme:
    """One existential group per cut node, members = its descendant leaves.

    The cut must be an antichain; with unique node names that guarantees
    the covered leaves are partitioned.
    """
    cut = list(dict.fromkeys(cut))
    if not cut:
        raise TaxonomyError("empty roll-up cut")
    for a in cut:
        for b in cut:
            if a != b and tax.is_ancestor(a, b):
                raise TaxonomyError(f"cut is not an antichain: {a!r} is above {b!r}")
    groups = []
    covered: set[str] = set()
    for name in cut:
        leaves = tax.leaves_under(name)
        doubled = covered.intersection(leaves)
        if doubled:
            raise TaxonomyError(f"leaves double-covered by the cut: {sorted(doubled)}")
        covered.update(leaves)
        members = frozenset(ctx.attribute_index(leaf) for leaf in leaves)
        groups.append(Group(name, members))
    scheme = GroupingScheme(Axis.ATTRIBUTES, Mode.EXISTS, tuple(groups), keep_ungrouped)
    scheme.validate(ctx)
    return scheme


# -- grouping proposals -----------------------------------------------------------


@dataclass(frozen=True)
class GroupingProposal:
    """A candidate group for user validation in the wizard flow."""

    name: str
    members: frozenset[int]
    support: SupportValue
    residual: bool = False
    status: str = "pending"


def merged_name(names: Sequence[str], taken: Iterable[str] = ()) -> str:
    """Deterministic display name for a merge, e.g. m1+m2 -> m12."""
    prefix = names[0]
    for n in names[1:]:
        while not n.startswith(prefix):
            prefix = prefix[:-1]
    if prefix:
        base = prefix + "".join(n[len(prefix):] for n in names)
    else:
        base = "+".join(names)
    taken = set(taken)
    while base in taken:
        base += "'"
    return base


def propose_groupings(
    ctx: FormalContext,
    minsupp: Fraction,
    mode: Mode,
    restrict: Iterable[int] | None = None,
    taken_names: Iterable[str] = (),
    ceiling: int = DEFAULT_CEILING,
) -> list[GroupingProposal]:
    """Candidate groups for the semi-automatic generalization flow.

    Existential flow: frequent attributes stay untouched; infrequent ones
    are packed greedily (descending support, first fit) until the union
    column reaches minsupp; leftovers below the threshold become a flagged
    residual group.  Universal flow: the closed intents of size ≥ 2 with
    support ≥ minsupp, ranked by support.
    """
    if not 0 < minsupp <= 1:
        raise ArgumentError(f"minsupp must be in (0, 1], got {minsupp}")
    if mode is Mode.ALPHA:
        raise ArgumentError("no proposal flow is defined for alpha mode")
    if restrict is None:
        pool = frozenset(range(ctx.n_attributes))
    else:
        pool = frozenset(restrict)
        mask_of(pool, ctx.n_attributes, "attribute index")
    taken = set(ctx.attributes) | set(taken_names)
    n = ctx.n_objects

    if mode is Mode.FORALL:
        proposals = []
        for intent, supp in iceberg_intents(ctx, minsupp, ceiling):
            if len(intent) < 2 or not intent <= pool:
                continue
            name = merged_name(ctx.attribute_names(intent), taken)
            taken.add(name)
            proposals.append(GroupingProposal(name, intent, supp))
        proposals.sort(key=lambda p: (-p.support.fraction, ctx.attribute_names(p.members)))
        return proposals

    infrequent = [
        m
        for m in sorted(pool)
        if Fraction(ctx.cols[m].bit_count(), n) < minsupp
    ]
    infrequent.sort(key=lambda m: (-ctx.cols[m].bit_count(), m))
    proposals = []
    current: list[int] = []
    union = 0
    for m in infrequent:
        current.append(m)
        union |= ctx.cols[m]
        if Fraction(union.bit_count(), n) >= minsupp:
            name = merged_name(ctx.attribute_names(current), taken)
            taken.add(name)
            proposals.append(
                GroupingProposal(name, frozenset(current), SupportValue(union.bit_count(), n))
            )
            current, union = [], 0
    if current:
        name = merged_name(ctx.attribute_names(current), taken)
        proposals.append(
            GroupingProposal(
                name,
                frozenset(current),
                SupportValue(union.bit_count(), n),
                residual=True,
            )
        )
    return proposals
