"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: argument-level problems exit 2,
theorem violations exit 3, resource ceilings exit 4.
"""


class GenconceptError(Exception):
    """Base class for all package errors."""


class DimensionError(GenconceptError):
    """An object/attribute index or name does not exist in the context."""


class DegenerateContextError(GenconceptError):
    """Operation requires a context with at least one object and attribute."""


class FormatError(GenconceptError):
    """Malformed .cxt / CSV / JSON input."""


class AppositionError(GenconceptError):
    """The two contexts cannot be apposed (object lists differ)."""


class ArgumentError(GenconceptError):
    """A threshold, scheme, or flag value is out of its allowed range."""


class SchemeError(ArgumentError):
    """A grouping scheme violates its invariants."""


class TaxonomyError(ArgumentError):
    """A taxonomy or roll-up cut violates its invariants."""


class ConceptCeilingError(GenconceptError):
    """Concept enumeration exceeded the configured ceiling."""

    def __init__(self, ceiling: int):
        super().__init__(
            f"concept count exceeded the configured ceiling of {ceiling}"
        )
        self.ceiling = ceiling


class PreconditionError(GenconceptError):
    """A documented operation precondition does not hold for the input."""


class TheoremViolationError(GenconceptError):
    """A guaranteed lattice-size inequality failed; indicates a bug."""
