"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HexablockError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class NotAContraction(HexablockError):
    pass


class NotCommuting(HexablockError):
    def __init__(self, i: int, j: int, residual: float):
        super().__init__(f"entries {i} and {j} do not commute (residual {residual:.3e})")
        self.pair = (i, j)
        self.residual = residual


class NotNormal(HexablockError):
    def __init__(self, index: int, residual: float):
        super().__init__(f"entry {index} is not normal (residual {residual:.3e})")
        self.index = index
        self.residual = residual


class NotHermitianPSD(HexablockError):
    pass


class WrongShape(HexablockError):
    pass


class DenominatorNearZero(HexablockError):
    pass


class NotInClosedTetrablock(HexablockError):
    pass


class UnknownEnsemble(HexablockError):
    pass


class NotEUnitary(HexablockError):
    pass


class NotB2Unitary(HexablockError):
    pass


class TwistDoesNotCommute(HexablockError):
    pass


class X3NotContraction(HexablockError):
    pass


class DefectRankZeroWithNonzeroRHS(HexablockError):
    pass


class HypothesisFailed(HexablockError):
    def __init__(self, message: str, residuals: dict[str, float] | None = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class DegreeExceedsDepth(HexablockError):
    pass


class CertificateInvalid(HexablockError):
    pass


class ModelConditionsFail(HexablockError):
    pass
