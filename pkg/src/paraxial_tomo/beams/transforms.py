"""Jacobi-weighted and plain ray transforms along straight lines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple, Optional, Sequence

import numpy as np
from scipy import integrate, ndimage
from scipy.interpolate import CubicSpline

from paraxial_tomo.beams.riccati import RiccatiTrajectory
from paraxial_tomo.core.grid import Grid2D, RealField
from paraxial_tomo.errors import ConjugatePoint, ValueOutOfRange
from paraxial_tomo.phantom.shapes import disk

DET_FLOOR = 1e-12
DEFAULT_NODES = 1025
# bilinear samples per half cell along a line
XRAY_OVERSAMPLE = 4

QuadratureRule = Literal["simpson", "trapezoid"]


@dataclass(frozen=True, eq=False)
class TransversalJacobi:
    """Transverse 2x2 block of a real Jacobi field, sampled along the geodesic.

    ``ts`` is None for a block that does not depend on t.
    """

    ts: Optional[np.ndarray] = field(repr=False)
    blocks: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        blocks = np.asarray(self.blocks, dtype=np.float64)
        if self.ts is None:
            if blocks.shape != (2, 2):
                raise ValueOutOfRange("ytilde", "constant block must be 2x2")
        else:
            ts = np.asarray(self.ts, dtype=np.float64)
            if ts.ndim != 1 or blocks.shape != (ts.size, 2, 2):
                raise ValueOutOfRange("ytilde", "need one 2x2 block per sample time")
            if ts.size > 1 and np.any(np.diff(ts) <= 0):
                raise ValueOutOfRange("ytilde", "sample times must increase strictly")
            object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def identity(cls) -> "TransversalJacobi":
        return cls(None, np.eye(2))

    @classmethod
    def constant(cls, block: np.ndarray) -> "TransversalJacobi":
        return cls(None, np.asarray(block, dtype=np.float64))

    @classmethod
    def from_trajectory(cls, trajectory: RiccatiTrajectory) -> "TransversalJacobi":
        """Take Y[1:, 1:] of a real Jacobi-field trajectory.

        Raises:
            ValueOutOfRange: If the transverse block is not real.
        """
        block = trajectory.Y[:, 1:, 1:]
        scale = max(1.0, float(np.max(np.abs(block))))
        if np.max(np.abs(block.imag)) > 1e-12 * scale:
            raise ValueOutOfRange("ytilde", "transverse Jacobi block must be real")
        return cls(trajectory.taus, block.real)

    @property
    def interval(self) -> Optional[tuple[float, float]]:
        if self.ts is None:
            return None
        return (float(self.ts[0]), float(self.ts[-1]))

    def det(self, t: np.ndarray) -> np.ndarray:
        """det Ytilde(t), interpolated between samples with a cubic spline."""
        t = np.asarray(t, dtype=np.float64)
        if self.ts is None:
            return np.full(t.shape, float(np.linalg.det(self.blocks)))
        samples = np.linalg.det(self.blocks)
        lo, hi = self.interval
        if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
            raise ValueOutOfRange("interval", f"t outside the sampled range [{lo}, {hi}]")
        if self.ts.size == 1:
            return np.full(t.shape, float(samples[0]))
        if self.ts.size < 4:
            return np.interp(t, self.ts, samples)
        return CubicSpline(self.ts, samples)(t)

    def weight(self, t: np.ndarray) -> np.ndarray:
        """(det Ytilde)^(-1/2) on the principal branch.

        Raises:
            ConjugatePoint: If det vanishes or changes sign over ``t``.
        """
        t = np.asarray(t, dtype=np.float64)
        det = self.det(t)
        small = np.abs(det) < DET_FLOOR
        if np.any(small):
            raise ConjugatePoint(float(t[np.argmax(small)]))
        flips = np.nonzero(np.sign(det[1:]) != np.sign(det[:-1]))[0]
        if flips.size:
            raise ConjugatePoint(float(t[flips[0] + 1]))
        return 1.0 / np.sqrt(det.astype(np.complex128))


def _integrate(values: np.ndarray, t: np.ndarray, rule: QuadratureRule) -> complex:
    if rule == "simpson":
        quad = integrate.simpson
    elif rule == "trapezoid":
        quad = integrate.trapezoid
    else:
        raise ValueOutOfRange("rule", f"unknown quadrature rule '{rule}'")
    return complex(quad(values.real, x=t), quad(values.imag, x=t))


def jacobi_ray_transform(
    f: Callable[[np.ndarray], np.ndarray],
    ytilde: TransversalJacobi,
    interval: Optional[tuple[float, float]] = None,
    n_nodes: int = DEFAULT_NODES,
    rule: QuadratureRule = "simpson",
) -> complex:
    """Integral of f(gamma(t)) (det Ytilde(t))^(-1/2) over ``interval``.

    Args:
        f: Integrand along the geodesic, vectorized over t.
        ytilde: Transverse Jacobi block.
        interval: Integration range; defaults to the sampled range of ``ytilde``.
        n_nodes: Number of equispaced nodes (bumped to odd for Simpson).
        rule: Composite quadrature rule.

    Raises:
        ConjugatePoint: If det Ytilde vanishes or changes sign.
    """
    if interval is None:
        interval = ytilde.interval
        if interval is None:
            raise ValueOutOfRange("interval", "a constant Jacobi block needs an explicit interval")
    t_min, t_max = interval
    if n_nodes < 2:
        raise ValueOutOfRange("n_nodes", f"need at least two nodes, got {n_nodes}")
    if t_max <= t_min:
        return 0j
    if rule == "simpson" and n_nodes % 2 == 0:
        n_nodes += 1

    t = np.linspace(t_min, t_max, n_nodes)
    values = np.asarray(f(t), dtype=np.complex128) * ytilde.weight(t)
    return _integrate(values, t, rule)


class Line2D:
    """Straight line {s n + t d}: d = (cos phi, sin phi), n = (-sin phi, cos phi)."""

    __slots__ = ("offset", "angle")

    def __init__(self, offset: float, angle: float):
        self.offset = float(offset)
        self.angle = float(angle)

    def __repr__(self) -> str:
        return f"Line2D(offset={self.offset!r}, angle={self.angle!r})"

    @classmethod
    def from_points(cls, p: tuple[float, float], q: tuple[float, float]) -> "Line2D":
        dx, dy = q[0] - p[0], q[1] - p[1]
        if dx == 0 and dy == 0:
            raise ValueOutOfRange("line", "points coincide")
        angle = math.atan2(dy, dx)
        return cls(-math.sin(angle) * p[0] + math.cos(angle) * p[1], angle)

    @property
    def direction(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])

    @property
    def normal(self) -> np.ndarray:
        return np.array([-math.sin(self.angle), math.cos(self.angle)])

    def point(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=np.float64)
        base = self.offset * self.normal
        d = self.direction
        return base[0] + t * d[0], base[1] + t * d[1]


def line_interval(line: Line2D, grid: Grid2D) -> Optional[tuple[float, float]]:
    """Parameter range of ``line`` inside the closed square domain, or None."""
    half = 0.5 * grid.length_L
    base = line.offset * line.normal
    d = line.direction
    t_min, t_max = -math.inf, math.inf
    for axis in range(2):
        if abs(d[axis]) < 1e-15:
            if abs(base[axis]) > half:
                return None
            continue
        a = (-half - base[axis]) / d[axis]
        b = (half - base[axis]) / d[axis]
        t_min = max(t_min, min(a, b))
        t_max = min(t_max, max(a, b))
    if t_max <= t_min:
        return None
    return (t_min, t_max)


class XrayResult(NamedTuple):
    value: float
    intersects: bool


def field_sampler(field: RealField, line: Line2D) -> Callable[[np.ndarray], np.ndarray]:
    """Bilinear samples of ``field`` along ``line``, zero outside the domain."""
    grid = field.grid
    half = 0.5 * grid.length_L

    def sample(t: np.ndarray) -> np.ndarray:
        x, y = line.point(t)
        coords = [(x + half) / grid.spacing_x, (y + half) / grid.spacing_y]
        return ndimage.map_coordinates(field.values, coords, order=1, mode="constant", cval=0.0)

    return sample


def xray_nodes(length: float, grid: Grid2D, oversample: int = XRAY_OVERSAMPLE) -> int:
    """Node count giving spacing at most min(dx, dy) / (2 oversample)."""
    spacing = min(grid.spacing_x, grid.spacing_y) / (2.0 * oversample)
    return max(2, math.ceil(length / spacing) + 1)


def xray_transform(
    field: RealField, line: Line2D, oversample: int = XRAY_OVERSAMPLE
) -> XrayResult:
    """Line integral of ``field`` by bilinear sampling and the composite trapezoid rule.

    This is the Jacobi-weighted transform with Ytilde = I. The default
    node spacing is min(dx, dy) / 8.

    Returns:
        XrayResult with ``intersects`` False (and value 0) when the line
        misses the domain.
    """
    interval = line_interval(line, field.grid)
    if interval is None:
        return XrayResult(0.0, False)
    n_nodes = xray_nodes(interval[1] - interval[0], field.grid, oversample)
    value = jacobi_ray_transform(
        field_sampler(field, line),
        TransversalJacobi.identity(),
        interval,
        n_nodes=n_nodes,
        rule="trapezoid",
    )
    return XrayResult(float(value.real), True)


class ChordCheck(NamedTuple):
    offset: float
    measured: float
    exact: float

    @property
    def error(self) -> float:
        return abs(self.measured - self.exact)


def unit_disk_chords(
    n: int = 1101,
    offsets: Sequence[float] = (0.0, 0.3, 0.6, 0.9),
    angle: float = 0.0,
) -> list[ChordCheck]:
    """X-ray transform of the unit disk against the chord length 2 sqrt(1 - d^2).

    The disk is rasterized with a one-cell edge ramp on a square of side 2.2.
    """
    grid = Grid2D.square(n, 2.2)
    unit = disk(grid, radius=1.0).field
    checks = []
    for d in offsets:
        measured = xray_transform(unit, Line2D(d, angle)).value
        checks.append(ChordCheck(float(d), measured, 2.0 * math.sqrt(max(0.0, 1.0 - d * d))))
    return checks
