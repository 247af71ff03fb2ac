"""Exception hierarchy shared by every module of the package."""


class PosetError(Exception):
    """Base class for all errors raised by posetclf."""


class ValidationError(PosetError):
    """Malformed input: bad files, flags or structures."""


class CycleDetected(ValidationError):
    pass


class NonImmediateCover(ValidationError):
    pass


class NotACover(PosetError):
    pass


class SpaceTooLarge(PosetError):
    pass


class NoGreatestElement(PosetError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SpaceMismatch(ValidationError):
    pass


class OverlappingClasses(ValidationError):
    pass


class UnknownValue(ValidationError):
    def __init__(self, feature, value, line=None):
        self.feature = feature
        self.value = value
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown value {value!r} for feature {feature!r}{where}")


class ReservedLabelCollision(ValidationError):
    pass


class TooFewObjectsPerClass(ValidationError):
    pass
