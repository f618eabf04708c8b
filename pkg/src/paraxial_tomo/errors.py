"""Exception hierarchy shared by every module.

Input problems (bad files, bad parameters, mismatched grids) derive from
``InputError`` and map to CLI exit code 2. Numerical breakdowns derive from
``NumericalError`` and map to exit code 1.
"""

from __future__ import annotations

from typing import Optional


class ParaxialTomoError(Exception):
    """Root of all toolkit errors."""


class InputError(ParaxialTomoError, ValueError):
    """Invalid caller input or malformed file."""


class NumericalError(ParaxialTomoError, ArithmeticError):
    """A numerical procedure could not complete."""


class ShapeMismatch(InputError):
    """Operands have incompatible shapes."""


class GridMismatch(InputError):
    """Operands live on different grids."""


class UnsupportedFormat(InputError):
    """File is not in a recognized format."""


class CorruptHeader(InputError):
    """File header is malformed or inconsistent."""


class TruncatedPayload(InputError):
    """File ends before the payload announced by its header."""


class TooFewSamples(InputError):
    """Not enough samples for the requested operation."""


class ZeroTruth(InputError):
    """Reference field has zero norm."""


class CFLViolation(InputError):
    """Time step violates the stability bound."""


class UnknownKey(InputError):
    """Configuration file names a key that is not recognized."""

    def __init__(self, key: str, line: int):
        self.key = key
        self.line = line
        super().__init__(f"line {line}: unknown key '{key}'")


class ConfigSyntaxError(InputError):
    """Configuration line is not of the form ``key = value``."""

    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        super().__init__(f"line {line}: expected 'key = value', got '{text}'")


class ValueOutOfRange(InputError):
    """A named value is outside its admissible range."""

    def __init__(self, key: str, detail: Optional[str] = None):
        self.key = key
        self.detail = detail
        message = f"value out of range for '{key}'"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class SingularPivot(NumericalError):
    """Thomas elimination met a vanishing pivot."""

    def __init__(self, index: int, magnitude: float):
        self.index = index
        self.magnitude = magnitude
        super().__init__(f"pivot {index} has magnitude {magnitude:.3e}")


class ConjugatePointOrBlowup(NumericalError):
    """Riccati linearization lost invertibility of Y or an invariant."""

    def __init__(self, tau: float, reason: str):
        self.tau = tau
        self.reason = reason
        super().__init__(f"tau={tau:.6g}: {reason}")


class ConjugatePoint(NumericalError):
    """det of the transversal Jacobi block vanished or changed sign."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"conjugate point near t={t:.6g}")


class CoefficientDegenerate(NumericalError):
    """Westervelt coefficient c^-2 - 2*beta*p left the admissible regime."""

    def __init__(self, step: int, minimum: float):
        self.step = step
        self.minimum = minimum
        super().__init__(f"time step {step}: coefficient fell to {minimum:.3e}")


class DegenerateIdentity(NumericalError):
    """Both sides of the integral identity vanish although beta does not."""


class CalibrationFailed(NumericalError):
    """Amplitude calibration produced a non-positive or non-finite scale."""
