"""Exception types shared across the engine."""

from __future__ import annotations


class ImagespaceError(Exception):
    """Base class for all engine errors."""


# --- lookup failures ---------------------------------------------------------

class UnknownClass(ImagespaceError):
    pass


class UnknownProperty(ImagespaceError):
    pass


class UnknownInstance(ImagespaceError):
    pass


class UnknownOntology(ImagespaceError):
    pass


class RestrictionOnUnknownProperty(ImagespaceError):
    pass


# --- parsing -----------------------------------------------------------------

class MalformedXml(ImagespaceError):
    pass


class UnknownConstruct(ImagespaceError):
    """Raised in strict mode for XML tags outside the supported subset."""


class DanglingReference(ImagespaceError):
    """A referenced identifier was never declared and is not a datatype name."""


# --- consistency / storage ---------------------------------------------------

class InconsistentDoc(ImagespaceError):
    """The document fails the consistency checks."""

    def __init__(self, violations=(), message: str = "ontology is inconsistent"):
        self.violations = list(violations)
        super().__init__(message)


class InconsistentInputDoc(InconsistentDoc):
    """An operation requiring a consistent input document received an inconsistent one."""


class ValidationFailed(ImagespaceError):
    """Instance data failed validation against the ontology."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"{len(self.violations)} validation violation(s)")


class AlreadyInitialized(ImagespaceError):
    pass


class ConnectionFailure(ImagespaceError):
    pass


class ConstraintViolation(ImagespaceError):
    pass


# --- queries -----------------------------------------------------------------

class QuerySyntaxError(ImagespaceError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at offset {position})")


class UnsafeQuery(ImagespaceError):
    """A head variable does not occur in any body atom."""


# --- visualization -----------------------------------------------------------

class CyclicHierarchy(ImagespaceError):
    pass


class MissingPosition(ImagespaceError):
    pass
