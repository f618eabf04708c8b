"""Curvature input D(tau) of the beam Riccati equation."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np

from paraxial_tomo.errors import ValueOutOfRange
from paraxial_tomo.formats.rf64 import read_rf64

SYMMETRY_TOLERANCE = 1e-12

# Column order of tabulated profiles after the leading tau column.
TABLE_ENTRIES = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def _check_symmetric(matrix: np.ndarray, where: str) -> None:
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOLERANCE * scale:
        raise ValueOutOfRange("riccati.profile", f"D is not symmetric at {where}")


@dataclass(frozen=True, eq=False)
class CurvatureProfile:
    """Real symmetric 3x3 matrix function tau -> D(tau) on [tau_min, tau_max]."""

    tau_min: float
    tau_max: float
    evaluate: Callable[[float], np.ndarray] = field(repr=False)
    label: str = "custom"

    def __post_init__(self) -> None:
        if not self.tau_max > self.tau_min:
            raise ValueOutOfRange(
                "riccati.tau_max", f"empty interval [{self.tau_min}, {self.tau_max}]"
            )

    def __call__(self, tau: float) -> np.ndarray:
        return self.evaluate(tau)

    @property
    def length(self) -> float:
        return self.tau_max - self.tau_min

    @classmethod
    def flat(cls, tau_min: float = 0.0, tau_max: float = 1.0) -> "CurvatureProfile":
        zero = np.zeros((3, 3))
        return cls(tau_min, tau_max, lambda tau: zero, "flat")

    @classmethod
    def constant(cls, kappa: float, tau_min: float = 0.0, tau_max: float = 1.0) -> "CurvatureProfile":
        """D = kappa * diag(0, 1, 1): constant curvature transverse to the geodesic."""
        matrix = kappa * np.diag([0.0, 1.0, 1.0])
        return cls(tau_min, tau_max, lambda tau: matrix, f"constant:{kappa!r}")

    @classmethod
    def from_table(cls, taus: np.ndarray, matrices: np.ndarray) -> "CurvatureProfile":
        """Piecewise-linear interpolation of sampled symmetric matrices.

        Raises:
            ValueOutOfRange: If sample times are not strictly increasing, fewer
                than two samples are given, or a sample is not symmetric.
        """
        taus = np.asarray(taus, dtype=np.float64)
        matrices = np.asarray(matrices, dtype=np.float64)
        if taus.ndim != 1 or taus.size < 2 or matrices.shape != (taus.size, 3, 3):
            raise ValueOutOfRange("riccati.profile", "table needs >= 2 samples of 3x3 matrices")
        if np.any(np.diff(taus) <= 0):
            raise ValueOutOfRange("riccati.profile", "table tau values must increase strictly")
        for tau, matrix in zip(taus, matrices):
            _check_symmetric(matrix, f"tau={tau}")

        flat_entries = matrices.reshape(taus.size, 9)

        def evaluate(tau: float) -> np.ndarray:
            if tau < taus[0] - 1e-12 or tau > taus[-1] + 1e-12:
                raise ValueOutOfRange("riccati.profile", f"tau={tau} outside tabulated range")
            return np.array(
                [np.interp(tau, taus, flat_entries[:, k]) for k in range(9)]
            ).reshape(3, 3)

        return cls(float(taus[0]), float(taus[-1]), evaluate, "table")

    @classmethod
    def from_rf64(cls, path: Union[str, Path]) -> "CurvatureProfile":
        """Read a real RF64 table with rows (tau, D11, D12, D13, D22, D23, D33)."""
        table = read_rf64(path)
        values = np.asarray(table.values)
        if np.iscomplexobj(values) or values.shape[1] != 7:
            raise ValueOutOfRange("riccati.profile", f"{path}: need a real table with 7 columns")
        matrices = np.zeros((values.shape[0], 3, 3))
        for column, (i, j) in enumerate(TABLE_ENTRIES, start=1):
            matrices[:, i, j] = values[:, column]
            matrices[:, j, i] = values[:, column]
        return cls.from_table(values[:, 0], matrices)

    @classmethod
    def from_spec(
        cls, spec: str, tau_min: float = 0.0, tau_max: float = 1.0, base_dir: Path | None = None
    ) -> "CurvatureProfile":
        """Parse ``flat``, ``constant:<kappa>`` or ``table:<path>``."""
        kind, _, argument = spec.strip().partition(":")
        if kind == "flat" and not argument:
            return cls.flat(tau_min, tau_max)
        if kind == "constant":
            try:
                kappa = float(argument)
            except ValueError as exc:
                raise ValueOutOfRange("riccati.profile", f"bad curvature '{argument}'") from exc
            return cls.constant(kappa, tau_min, tau_max)
        if kind == "table" and argument:
            path = Path(argument)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            return cls.from_rf64(path)
        raise ValueOutOfRange("riccati.profile", f"unrecognized profile '{spec}'")
