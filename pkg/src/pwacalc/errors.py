"""Exceptions shared across the package."""


class PwacalcError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(PwacalcError):
    """Operands live in incompatible spaces."""


class EmptyPolyhedron(PwacalcError):
    """An operation that needs a nonempty polyhedron received an empty one."""


class AmbientNotSolid(PwacalcError):
    """The ambient set has empty interior where a solid one is required."""


class InvariantViolation(PwacalcError):
    """An internal structural invariant failed; indicates a bug or bad input."""


class NoCellFound(PwacalcError):
    """Evaluation point lies in no cell of the map."""


class NotAFunctionGraph(PwacalcError):
    """The polyhedral set is not the graph of a (total, single-valued) map."""


class NotConvex(PwacalcError):
    """A convexity-only construction was applied to a non-convex map."""


class FormTooLarge(PwacalcError):
    """A canonical-form construction exceeded the configured member cap."""


class NonzeroOffsetProduced(PwacalcError):
    """A linear-form construction produced an affine member with an offset."""


class OracleFailure(PwacalcError):
    """A function oracle failed to produce a usable value."""


class ExpressionError(PwacalcError):
    """An expression string could not be parsed."""


class MalformedInput(PwacalcError):
    """A serialized document does not match its schema."""
