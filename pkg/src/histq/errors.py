"""Exception hierarchy for the histories engine."""


class HistQError(Exception):
    """Base class for all engine errors."""


class SpaceMismatch(HistQError):
    """Operands live on different Hilbert spaces."""


class DynamicsMismatch(HistQError):
    """Histories refer to different dynamics schedules."""


class NotNormalized(HistQError):
    """A state vector expected to be normalized is not."""


class InvalidOperator(HistQError):
    """Matrix fails a structural invariant (hermiticity, idempotence, unitarity)."""


class MixedKinds(HistQError):
    """Tensor product of heterogeneous object kinds."""


class NonOrthonormalInputs(HistQError):
    """Partial-map input vectors are not mutually orthonormal."""


class NonOrthonormalOutputs(HistQError):
    """Partial-map output vectors are not mutually orthonormal."""


class TooManyVectors(HistQError):
    """More partial-map pairs than the space dimension."""


class FamilyError(HistQError):
    """Base class for family validation failures."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}


class NotExhaustive(FamilyError):
    """Elementary histories do not cover the initial event."""


class NonOrthogonal(FamilyError):
    """Two elementary histories overlap, or slot projectors fail to commute."""


class Inconsistent(FamilyError):
    """Off-diagonal decoherence residual exceeds the consistency tolerance."""


class ScenarioFileError(HistQError):
    """Scenario document failed to parse or resolve."""

    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location
