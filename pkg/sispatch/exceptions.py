# -*- coding: utf-8 -*-
"""
Every error this library raises lives here. Errors fall in three
families which the command line maps onto exit codes: invalid input,
numerical failure and unmet mathematical preconditions.
"""
__title__ = 'sispatch'
__license__ = 'MIT'


class SisPatchException(Exception):
    pass


class ValidationError(SisPatchException):
    """Input data violates the model assumptions
    """
    pass


class NumericalError(SisPatchException):
    """A numerical kernel failed or produced an inconsistent answer
    """
    pass


class PreconditionError(SisPatchException):
    """The inputs are valid but the requested object does not exist
    """
    pass


# validation
class NonQuasiPositive(ValidationError):
    pass


class Reducible(ValidationError):
    pass


class NegativeEntry(ValidationError):
    pass


class NotIrreducible(ValidationError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NonPositiveDegree(ValidationError):
    pass


class InvalidParameters(ValidationError):
    pass


class TiePatch(ValidationError):
    def __init__(self, message, ties=()):
        super().__init__(message)
        self.ties = tuple(ties)


class EmptyRiskSet(ValidationError):
    pass


class AllGammaZero(ValidationError):
    pass


class ZeroGamma(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class InconsistentRatio(ValidationError):
    pass


class ScenarioError(ValidationError):
    """Scenario document could not be parsed or does not match the schema.
    `location` is either "line L, column C" or a dotted field path.
    """
    def __init__(self, message, location=None):
        if location:
            message = '%s: %s' % (location, message)
        super().__init__(message)
        self.location = location


# numerical
class NoConvergence(NumericalError):
    pass


class Singular(NumericalError):
    pass


class BadBracket(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class NoSignChange(NumericalError):
    pass


class LeftBox(NumericalError):
    pass


class BoxViolation(NumericalError):
    pass


class ResidualTooLarge(NumericalError):
    pass


class EmptyJMinus(NumericalError):
    pass


class NegativeState(NumericalError):
    pass


class InconsistentClassification(NumericalError):
    pass


# preconditions
class SubThreshold(PreconditionError):
    def __init__(self, message, r0=None):
        super().__init__(message)
        self.r0 = r0


class DegenerateH(PreconditionError):
    def __init__(self, message, patches=()):
        super().__init__(message)
        self.patches = tuple(patches)
