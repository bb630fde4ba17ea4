"""Concept lattices with existential/universal/threshold grouping."""

from .context import FormalContext, SupportValue, apposition
from .errors import (
    ArgumentError,
    AppositionError,
    ConceptCeilingError,
    DegenerateContextError,
    DimensionError,
    FormatError,
    GenconceptError,
    PreconditionError,
    SchemeError,
    TaxonomyError,
    TheoremViolationError,
)
from .generalize import (
    Axis,
    Group,
    GroupingProposal,
    GroupingScheme,
    HyperRelationSpec,
    Mode,
    Taxonomy,
    TaxNode,
    generalize_alpha,
    generalize_attributes,
    generalize_exists,
    generalize_forall,
    generalize_objects,
    hypercontext,
    propose_groupings,
    roll_up,
)
from .lattice import (
    Concept,
    ConceptLattice,
    count_concepts,
    enumerate_concepts,
    iceberg_intents,
    is_object_reduced,
)

__version__ = "0.1.0"
