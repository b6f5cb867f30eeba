"""Shared exception types."""


class MalformedInput(ValueError):
    """Syntactically invalid word, point or file."""


class DomainError(ValueError):
    """Arguments outside an operation's domain (e.g. center outside base)."""


class UnsupportedCase(ValueError):
    """Structurally valid input that the construction deliberately does not cover."""


class InvalidMap(ValueError):
    """A piecewise map whose regions do not partition the space."""


class InstanceRejected(ValueError):
    """A synthesis instance that fails the engine's preconditions."""


class LiftRejected(ValueError):
    """A map that fails the monotonicity/invariance hypotheses of lifting."""
