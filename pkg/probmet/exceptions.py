class ProbMetException(Exception):
    def __init__(self, *args, **kwargs):
        self.context = kwargs.pop("context", None)
        super().__init__(*args)


class InputError(ProbMetException):
    pass


class NumberFormatError(InputError):
    pass


class StepFunctionError(InputError):
    pass


class SchemaError(InputError):
    """
    Raised for files that do not match the space, metric or morphism schema.
    ``errors`` holds ``path: message`` lines.
    """

    def __init__(self, *args, errors=None, **kwargs):
        self.errors = list(errors or [])
        super().__init__(*args, **kwargs)


class DomainError(InputError):
    pass


class UnknownPoints(InputError):
    pass


class TNormMismatch(InputError):
    pass


class FormMismatch(InputError):
    pass


class EmptySource(InputError):
    pass


class CarrierTooLarge(InputError):
    pass


class CarrierMismatch(InputError):
    pass


class PointIdCollision(InputError):
    pass


class UnknownTNorm(InputError):
    pass


class TNormNotAttested(InputError):
    pass


class UsageError(InputError):
    pass


class PropertyFailure(ProbMetException):
    pass


class InvalidSpace(PropertyFailure):
    def __init__(self, *args, report=None, **kwargs):
        self.report = report
        super().__init__(*args, **kwargs)


class NotNonExpansive(PropertyFailure):
    def __init__(self, *args, report=None, **kwargs):
        self.report = report
        super().__init__(*args, **kwargs)


class NoWitness(PropertyFailure):
    pass


class CospanDisagreement(PropertyFailure):
    pass


class NotFactorizable(PropertyFailure):
    pass


class InternalDisagreement(ProbMetException):
    pass
