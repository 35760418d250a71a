"""Exception hierarchy.

Every error carries the CLI exit code it maps to: 1 for a mathematical
negative verdict, 2 for bad input, 3 for a numerical failure.
"""


class HolodegError(Exception):
    exit_code = 3

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self)}


class InputError(HolodegError, ValueError):
    exit_code = 2


class DimensionMismatch(InputError):
    pass


class DegenerateSlice(InputError):
    pass


class NonTransverseLine(InputError):
    pass


class ZeroOnBoundary(InputError):
    """The map vanishes (below zero tolerance) at a sampled boundary point."""


class ZeroOnSliceBoundary(ZeroOnBoundary):
    pass


class SingularMap(InputError):
    pass


class NumericalFailure(HolodegError):
    exit_code = 3


class NoConvergence(NumericalFailure):
    pass


class IrregularZero(NumericalFailure):
    """A zero with (numerically) singular Jacobian; perturb the map and retry."""


class SuspectMissedZeros(NumericalFailure):
    pass


class OracleDisagreement(NumericalFailure):
    pass


class TCapExceeded(NumericalFailure):
    pass


class NoValidB(NumericalFailure):
    pass


class SliceBoundaryZero(NumericalFailure):
    pass


class Verdict(HolodegError):
    """Base for outcomes that are answers rather than failures."""

    exit_code = 1


class DataExtends(Verdict):
    """No witness exists: the data extends holomorphically."""


class IsComplexLinear(Verdict):
    pass
