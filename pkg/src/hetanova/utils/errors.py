"""
Exception types for hetanova

InputError subclasses describe caller mistakes (bad files, flags, layouts).
NumericalError subclasses describe failures inside the numerical engines.
The CLI maps the two families to exit codes 2 and 3.
"""


class HetAnovaError(Exception):
    """Base class for every error raised by hetanova."""

    exit_code = 1


class InputError(HetAnovaError):
    """Invalid input: files, flags, layouts or settings."""

    exit_code = 2


class NumericalError(HetAnovaError):
    """A numerical procedure could not produce a usable result."""

    exit_code = 3


class DimensionMismatch(InputError):
    pass


class EmptyCell(InputError):
    pass


class CellCountMismatch(InputError):
    pass


class InvalidLayout(InputError):
    pass


class InvalidSettings(InputError):
    pass


class InvalidDF(InputError):
    pass


class InvalidFamilyParams(InputError):
    pass


class InvalidConfig(InputError):
    pass


class UnsupportedCombination(InputError):
    pass


class UnknownPreset(InputError):
    pass


class DegenerateCell(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class ExcessiveNonConvergence(NumericalError):
    pass


class NotPSD(NumericalError):
    pass


class NestingViolation(NumericalError):
    pass


class DegenerateCellWarning(UserWarning):
    """A cell has zero sample variance; every test on it will fail."""
