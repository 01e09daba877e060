"""Exception hierarchy shared by all equichow modules."""


class EquichowError(Exception):
    """Base class for every error raised by this package."""


class IncompatibleRingError(EquichowError):
    """Operands live over different variable tables or coefficient domains."""


class ParseError(EquichowError):
    """Expression or ring-file parse failure, carrying the offending offset."""

    def __init__(self, message, text="", pos=0):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(self._render())

    def _render(self):
        if not self.text:
            return f"{self.message} (at offset {self.pos})"
        line = self.text.replace("\n", " ")
        return f"{self.message} at offset {self.pos}\n  {line}\n  {' ' * self.pos}^"


class ExprSyntaxError(ParseError):
    pass


class UnknownIdentifierError(ParseError):
    pass


class RingConstructionError(EquichowError):
    """A presentation failed validation; ``pair`` names the offending relations."""

    def __init__(self, message, pair=()):
        self.pair = tuple(pair)
        super().__init__(message)


class NonMonicRelationError(RingConstructionError):
    pass


class DuplicateLeadingVariableError(RingConstructionError):
    pass


class ConfluenceError(RingConstructionError):
    pass


class TriangularizationError(RingConstructionError):
    pass


class VariableCollisionError(RingConstructionError):
    pass


class RelationNotKilledError(EquichowError):
    """A candidate ring map sends a source relation to a nonzero element."""

    def __init__(self, relation, image):
        self.relation = relation
        self.image = image
        super().__init__(f"relation {relation} is not killed: maps to {image}")


class OpaqueRelationError(EquichowError):
    """Reduction needed a relation whose coefficients are deliberately unknown."""


class DegreeBoundError(EquichowError):
    """A result reached the degree where an omitted relation would fire."""


class NotSymmetricError(EquichowError):
    def __init__(self, message, transposition):
        self.transposition = transposition
        super().__init__(message)


class PreconditionError(EquichowError):
    pass


class DomainError(EquichowError):
    pass
