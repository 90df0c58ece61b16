"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SsgraphError(Exception):
    exit_code = 2


class ValidationError(SsgraphError):
    exit_code = 2


class MissingData(SsgraphError):
    exit_code = 3


class VerificationFailure(SsgraphError):
    exit_code = 4


class FieldTooLarge(ValidationError):
    pass


class ZeroPolynomial(ValidationError):
    pass


class NotSquarefree(ValidationError):
    pass


class WrongGroupStructure(ValidationError):
    pass


class BadKernelOrder(ValidationError):
    pass


class EqualPrimes(ValidationError):
    pass


class OverfullVertex(ValidationError):
    pass


class BadDegree(ValidationError):
    pass


class NotMonic(ValidationError):
    pass


class CongruenceFailure(ValidationError):
    pass


class ExactDivisionFailure(ValidationError):
    pass


class CuspInput(ValidationError):
    pass


class SmallLevel(ValidationError):
    pass


class InconsistentTable(ValidationError):
    pass


class NonIntegralSolution(ValidationError):
    pass


class GonalityUnknown(ValidationError):
    pass


class UnsupportedFormat(ValidationError):
    pass


class UnknownLevel(MissingData):
    pass


class MissingClassNumber(MissingData):
    pass


class NormalizationFailure(VerificationFailure):
    pass


class StrategyMismatch(VerificationFailure):
    pass


class ChecksumMismatch(ValidationError):
    pass


class MalformedData(ValidationError):
    pass
