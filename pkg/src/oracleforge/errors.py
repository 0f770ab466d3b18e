"""Exception types shared across the package."""
from __future__ import annotations


class OracleForgeError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(OracleForgeError):
    """Source text does not fit the supported test subset.

    Carries the byte offset where parsing stopped and a short
    description of what was expected there.
    """

    def __init__(self, position: int, expected: str):
        super().__init__(f"parse error at offset {position}: expected {expected}")
        self.position = position
        self.expected = expected


class NoOracle(OracleForgeError):
    """A test contains neither an assertion nor an expected-exception shape.

    Stripping reports this through a result kind rather than raising; the
    exception exists for callers that want to insist on an oracle.
    """


class NoAssignment(OracleForgeError):
    """The prefix does not end with an assignment, so there is no return value."""


class InvalidOracle(OracleForgeError):
    """An assertion oracle references a variable the prefix does not define."""


class ScorerUnavailable(OracleForgeError):
    """An external scorer endpoint cannot be reached or broke the protocol."""


class MissingTruth(OracleForgeError):
    """A prediction group has no ground-truth entry."""


class LengthMismatch(OracleForgeError):
    """Paired label sequences differ in length."""
