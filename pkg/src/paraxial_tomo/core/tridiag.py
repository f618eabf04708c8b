"""Thomas elimination for complex tridiagonal systems.

The factorization is computed once and reused for every right-hand side,
which is how the envelope march applies the same Crank-Nicolson operator
at every x step. Right-hand sides may carry trailing columns; each column
is solved independently in the same sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from paraxial_tomo.errors import ShapeMismatch, SingularPivot

PIVOT_TOLERANCE = 1e-14


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    """Matrix with ``diag`` on the main diagonal, ``lower`` below and ``upper`` above.

    ``lower[i]`` couples row i + 1 to unknown i, ``upper[i]`` couples row i
    to unknown i + 1.
    """

    lower: np.ndarray = field(repr=False)
    diag: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        lower = np.array(self.lower, dtype=np.complex128, copy=True).ravel()
        diag = np.array(self.diag, dtype=np.complex128, copy=True).ravel()
        upper = np.array(self.upper, dtype=np.complex128, copy=True).ravel()
        n = diag.size
        if n == 0:
            raise ShapeMismatch("tridiagonal system needs at least one row")
        if lower.size != n - 1 or upper.size != n - 1:
            raise ShapeMismatch(
                f"off-diagonals must have length {n - 1}, got {lower.size} and {upper.size}"
            )
        for array in (lower, diag, upper):
            array.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def constant(cls, n: int, lower: complex, diag: complex, upper: complex) -> "TridiagonalSystem":
        """Toeplitz system with constant bands."""
        return cls(
            lower=np.full(n - 1, lower, dtype=np.complex128),
            diag=np.full(n, diag, dtype=np.complex128),
            upper=np.full(n - 1, upper, dtype=np.complex128),
        )

    @property
    def size(self) -> int:
        return self.diag.size

    def conjugate_transpose(self) -> "TridiagonalSystem":
        return TridiagonalSystem(
            lower=np.conj(self.upper), diag=np.conj(self.diag), upper=np.conj(self.lower)
        )

    def matvec(self, u: np.ndarray) -> np.ndarray:
        """Multiply the system by ``u`` (shape (n,) or (n, k))."""
        u = np.asarray(u)
        if u.shape[0] != self.size:
            raise ShapeMismatch(f"vector has {u.shape[0]} rows, system has {self.size}")
        diag = self.diag.reshape((-1,) + (1,) * (u.ndim - 1))
        lower = self.lower.reshape((-1,) + (1,) * (u.ndim - 1))
        upper = self.upper.reshape((-1,) + (1,) * (u.ndim - 1))
        out = diag * u
        out[1:] += lower * u[:-1]
        out[:-1] += upper * u[1:]
        return out

    def to_dense(self) -> np.ndarray:
        dense = np.diag(self.diag)
        if self.size > 1:
            dense += np.diag(self.lower, -1) + np.diag(self.upper, 1)
        return dense

    def factor(self) -> "ThomasFactor":
        """Run the forward elimination once.

        Raises:
            SingularPivot: If a pivot magnitude drops below 1e-14 times the
                largest coefficient magnitude.
        """
        n = self.size
        scale = max(
            float(np.max(np.abs(self.diag))),
            float(np.max(np.abs(self.lower))) if n > 1 else 0.0,
            float(np.max(np.abs(self.upper))) if n > 1 else 0.0,
        )
        threshold = PIVOT_TOLERANCE * scale

        pivots = np.empty(n, dtype=np.complex128)
        multipliers = np.zeros(n, dtype=np.complex128)
        pivots[0] = self.diag[0]
        if abs(pivots[0]) <= threshold:
            raise SingularPivot(0, abs(pivots[0]))
        for i in range(1, n):
            multipliers[i] = self.lower[i - 1] / pivots[i - 1]
            pivots[i] = self.diag[i] - multipliers[i] * self.upper[i - 1]
            if abs(pivots[i]) <= threshold:
                raise SingularPivot(i, abs(pivots[i]))

        return ThomasFactor(
            pivots=pivots, multipliers=multipliers, upper=self.upper.copy()
        )


@dataclass(frozen=True, eq=False)
class ThomasFactor:
    """LU factors of a tridiagonal matrix: unit-lower multipliers and pivots."""

    pivots: np.ndarray = field(repr=False)
    multipliers: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.pivots.size

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve for one or several right-hand sides.

        Args:
            rhs: Array of shape (n,) or (n, k).

        Returns:
            Solution with the shape of ``rhs``.

        Raises:
            ShapeMismatch: If the leading dimension does not match.
        """
        rhs = np.asarray(rhs)
        n = self.size
        if rhs.ndim == 0 or rhs.shape[0] != n:
            raise ShapeMismatch(f"rhs has shape {rhs.shape}, system has {n} rows")

        work = np.array(rhs, dtype=np.complex128, copy=True)
        multipliers = self.multipliers
        for i in range(1, n):
            work[i] -= multipliers[i] * work[i - 1]

        pivots = self.pivots
        upper = self.upper
        work[n - 1] /= pivots[n - 1]
        for i in range(n - 2, -1, -1):
            work[i] -= upper[i] * work[i + 1]
            work[i] /= pivots[i]
        return work


def tridiag_solve(system: TridiagonalSystem, rhs: np.ndarray) -> np.ndarray:
    """Solve ``system @ u = rhs`` by Thomas elimination.

    Raises:
        ShapeMismatch: If ``rhs`` does not have ``system.size`` rows.
        SingularPivot: If elimination meets a vanishing pivot.
    """
    rhs = np.asarray(rhs)
    if rhs.ndim == 0 or rhs.shape[0] != system.size:
        raise ShapeMismatch(f"rhs has shape {rhs.shape}, system has {system.size} rows")
    return system.factor().solve(rhs)
