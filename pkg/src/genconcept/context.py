"""Binary formal contexts and their derivation operators.

A context is a triple (objects, attributes, incidence).  Incidence is kept
as one int bitmask per object row; identity is positional, names exist only
for I/O.  All operations are pure and contexts are immutable, so instances
can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Iterator

from .errors import AppositionError, DegenerateContextError, DimensionError

__all__ = [
    "FormalContext",
    "SupportValue",
    "apposition",
    "bits",
    "mask_of",
]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


def mask_of(indices: Iterable[int], size: int, kind: str = "index") -> int:
    """Pack an index set into a bitmask, validating the range."""
    m = 0
    for i in indices:
        if not 0 <= i < size:
            raise DimensionError(f"{kind} {i} out of range 0..{size - 1}")
        m |= 1 << i
    return m


@total_ordering
@dataclass(frozen=True)
class SupportValue:
    """Exact support count/total; total is always the number of objects."""

    count: int
    total: int

    def __post_init__(self) -> None:
        if self.total <= 0 or not 0 <= self.count <= self.total:
            raise ValueError(f"invalid support {self.count}/{self.total}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.total)

    def __float__(self) -> float:
        return self.count / self.total

    def __str__(self) -> str:
        return f"{self.count}/{self.total}"

    def _value(self, other) -> Fraction:
        if isinstance(other, SupportValue):
            return other.fraction
        return Fraction(other)

    def __eq__(self, other) -> bool:
        try:
            return self.fraction == self._value(other)
        except TypeError:
            return NotImplemented

    def __lt__(self, other) -> bool:
        return self.fraction < self._value(other)

    def __hash__(self) -> int:
        return hash(self.fraction)


def _check_distinct(names: tuple[str, ...], what: str) -> None:
    if len(set(names)) != len(names):
        seen = set()
        dup = next(n for n in names if n in seen or seen.add(n))
        raise DimensionError(f"duplicate {what} name {dup!r}")


@dataclass(frozen=True)
class FormalContext:
    """Immutable binary context over named objects and attributes."""

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]  # rows[g] has bit m set iff object g has attribute m
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "rows", tuple(self.rows))
        _check_distinct(self.objects, "object")
        _check_distinct(self.attributes, "attribute")
        if len(self.rows) != len(self.objects):
            raise DimensionError(
                f"{len(self.rows)} rows for {len(self.objects)} objects"
            )
        limit = 1 << len(self.attributes)
        for g, row in enumerate(self.rows):
            if not 0 <= row < limit:
                raise DimensionError(f"row {g} does not fit {len(self.attributes)} attributes")

    @classmethod
    def from_bools(
        cls,
        objects: Iterable[str],
        attributes: Iterable[str],
        table: Iterable[Iterable[bool]],
        name: str = "",
    ) -> "FormalContext":
        attrs = tuple(attributes)
        rows = []
        for cells in table:
            cells = list(cells)
            if len(cells) != len(attrs):
                raise DimensionError(
                    f"row of width {len(cells)} for {len(attrs)} attributes"
                )
            rows.append(sum(1 << j for j, c in enumerate(cells) if c))
        return cls(tuple(objects), attrs, tuple(rows), name)

    # -- basic geometry ----------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @cached_property
    def cols(self) -> tuple[int, ...]:
        """Column bitmasks: cols[m] has bit g set iff g has attribute m."""
        cols = [0] * self.n_attributes
        for g, row in enumerate(self.rows):
            gbit = 1 << g
            for m in bits(row):
                cols[m] |= gbit
        return tuple(cols)

    @cached_property
    def full_objects(self) -> int:
        return (1 << self.n_objects) - 1

    @cached_property
    def full_attributes(self) -> int:
        return (1 << self.n_attributes) - 1

    def incidence(self, g: int, m: int) -> bool:
        self._check_object(g)
        self._check_attribute(m)
        return bool(self.rows[g] >> m & 1)

    def _check_object(self, g: int) -> None:
        if not 0 <= g < self.n_objects:
            raise DimensionError(f"object index {g} out of range 0..{self.n_objects - 1}")

    def _check_attribute(self, m: int) -> None:
        if not 0 <= m < self.n_attributes:
            raise DimensionError(
                f"attribute index {m} out of range 0..{self.n_attributes - 1}"
            )

    def _require_derivable(self) -> None:
        if self.n_objects == 0 or self.n_attributes == 0:
            raise DegenerateContextError("derivation requires objects and attributes")

    # -- name lookup (I/O boundary only) -----------------------------------

    @cached_property
    def _object_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.objects)}

    @cached_property
    def _attribute_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.attributes)}

    def object_index(self, name: str) -> int:
        try:
            return self._object_index[name]
        except KeyError:
            raise DimensionError(f"unknown object {name!r}") from None

    def attribute_index(self, name: str) -> int:
        try:
            return self._attribute_index[name]
        except KeyError:
            raise DimensionError(f"unknown attribute {name!r}") from None

    def object_set(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.object_index(n) for n in names)

    def attribute_set(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.attribute_index(n) for n in names)

    def object_names(self, indices: Iterable[int]) -> list[str]:
        return [self.objects[i] for i in sorted(indices)]

    def attribute_names(self, indices: Iterable[int]) -> list[str]:
        return [self.attributes[i] for i in sorted(indices)]

    # -- mask-level kernel (used by the enumeration loops) ------------------

    def extent_mask(self, intent: int) -> int:
        """Objects having every attribute in ``intent``; all of G for 0."""
        ext = self.full_objects
        for m in bits(intent):
            ext &= self.cols[m]
        return ext

    def intent_mask(self, extent: int) -> int:
        """Attributes shared by every object in ``extent``; all of M for 0."""
        it = self.full_attributes
        for g in bits(extent):
            it &= self.rows[g]
        return it

    # -- derivation operators ------------------------------------------------

    def derive_objects(self, objects: Iterable[int]) -> frozenset[int]:
        """A ↦ A′: the attributes shared by all objects in A (M for A = ∅)."""
        self._require_derivable()
        mask = mask_of(objects, self.n_objects, "object index")
        return frozenset(bits(self.intent_mask(mask)))

    def derive_attributes(self, attrs: Iterable[int]) -> frozenset[int]:
        """B ↦ B′: the objects having all attributes in B (G for B = ∅)."""
        self._require_derivable()
        mask = mask_of(attrs, self.n_attributes, "attribute index")
        return frozenset(bits(self.extent_mask(mask)))

    def closure_attributes(self, attrs: Iterable[int]) -> frozenset[int]:
        """B ↦ B″; the result is closed and contains B."""
        self._require_derivable()
        mask = mask_of(attrs, self.n_attributes, "attribute index")
        return frozenset(bits(self.intent_mask(self.extent_mask(mask))))

    def closure_objects(self, objects: Iterable[int]) -> frozenset[int]:
        """A ↦ A″ on the object side."""
        self._require_derivable()
        mask = mask_of(objects, self.n_objects, "object index")
        return frozenset(bits(self.extent_mask(self.intent_mask(mask))))

    def support(self, attrs: Iterable[int]) -> SupportValue:
        """|B′| / |G| as an exact rational."""
        self._require_derivable()
        mask = mask_of(attrs, self.n_attributes, "attribute index")
        return SupportValue(self.extent_mask(mask).bit_count(), self.n_objects)

    # -- structural operations -----------------------------------------------

    def project_attributes(self, keep: Iterable[int]) -> "FormalContext":
        """Restrict to the given attribute columns, keeping their order."""
        kept = sorted(set(keep))
        if not kept:
            raise DimensionError("projection needs at least one attribute")
        for m in kept:
            self._check_attribute(m)
        attrs = tuple(self.attributes[m] for m in kept)
        rows = tuple(
            sum(1 << j for j, m in enumerate(kept) if row >> m & 1)
            for row in self.rows
        )
        return FormalContext(self.objects, attrs, rows, self.name)

    def transpose(self) -> "FormalContext":
        """Swap objects and attributes (rows become columns)."""
        return FormalContext(self.attributes, self.objects, self.cols, self.name)

    def to_bool_table(self) -> list[list[bool]]:
        return [
            [bool(row >> m & 1) for m in range(self.n_attributes)]
            for row in self.rows
        ]


def _freshen(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def apposition(first: FormalContext, second: FormalContext) -> FormalContext:
    """Put two contexts over the same objects side by side.

    Attribute names of the second factor that collide with the first are
    suffixed with ' until unique, so group letters may be reused.
    """
    if first.objects != second.objects:
        raise AppositionError("apposition requires identical object lists")
    taken = set(first.attributes)
    renamed = []
    for n in second.attributes:
        fresh = _freshen(n, taken)
        taken.add(fresh)
        renamed.append(fresh)
    shift = first.n_attributes
    rows = tuple(
        r1 | (r2 << shift) for r1, r2 in zip(first.rows, second.rows)
    )
    return FormalContext(
        first.objects,
        first.attributes + tuple(renamed),
        rows,
        first.name,
    )
