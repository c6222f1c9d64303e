"""Exception types shared across the package."""


class GradecmError(Exception):
    pass


class DivisionByZero(GradecmError, ZeroDivisionError):
    pass


class AmbientMismatch(GradecmError):
    pass


class SubstitutionDomainError(GradecmError):
    pass


class BudgetExceeded(GradecmError):
    pass


class ZeroColonDivisor(GradecmError):
    pass


class ZeroRing(GradecmError):
    pass


class UnitIdeal(GradecmError):
    pass


class OutsideSupport(GradecmError):
    pass


class WitnessSearchFailed(GradecmError):
    """A generic-combination regularity witness failed a colon test; this
    indicates a bug, since the witness provably exists."""


class LevelTooLow(GradecmError):
    pass


class BadCharacteristic(GradecmError):
    pass


class DslError(GradecmError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class DuplicateName(DslError):
    pass


class UnknownReference(DslError):
    pass


class UnsupportedField(DslError):
    pass
