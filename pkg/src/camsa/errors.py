"""Exception types raised across the scoring pipeline."""


class CamsaError(Exception):
    """Base class for all domain errors."""


# --- trajectory file / model errors ---

class MalformedFile(CamsaError):
    pass


class WrongKeypointCount(MalformedFile):
    pass


class NonPositiveFps(MalformedFile):
    pass


class NonMonotonicFrames(MalformedFile):
    pass


# --- geometry ---

class DegeneratePolygon(CamsaError):
    pass


class NonPositiveRadius(CamsaError):
    pass


class SeriesTooShort(CamsaError):
    pass


# --- ball tracking ---

class DimensionMismatch(CamsaError):
    pass


class PathOutOfBounds(CamsaError):
    pass


# --- segmentation ---

class SegmentationError(CamsaError):
    pass


class MissingPhase(SegmentationError):
    def __init__(self, action: int, detail: str = ""):
        self.action = action
        super().__init__(f"no durable dwell found for action {action}" + (f": {detail}" if detail else ""))


class OutOfOrder(SegmentationError):
    def __init__(self, action: int, before: int):
        self.action = action
        self.before = before
        super().__init__(f"zone {action} entered durably before zone {before}")


class NoKickDetected(SegmentationError):
    def __init__(self, detail: str = "ball never launched"):
        super().__init__(detail)


# --- scoring ---

class PhaseMismatch(CamsaError):
    pass


class NoBallObservations(CamsaError):
    pass


class MissingRect(CamsaError):
    pass


class NoReversalFound(CamsaError):
    pass


class NegativeTime(CamsaError):
    pass


class EmptyCohort(CamsaError):
    pass


class LayoutInvalid(CamsaError):
    """Raised when scoring is attempted with layouts that fail validation."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


# --- synthesis ---

class InvalidScript(CamsaError):
    pass
