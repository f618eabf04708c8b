"""Image-quality metrics against a ground-truth phantom."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from paraxial_tomo.core.grid import RealField
from paraxial_tomo.errors import ZeroTruth

PSNR_CAP_DB = 300.0


class ImageMetrics(NamedTuple):
    relative_l2: float
    ncc: float
    psnr_db: float


def normalized_cross_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """Centered cosine similarity; 0 when either image is constant."""
    a = a - a.mean()
    b = b - b.mean()
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    if denom == 0.0:
        return 0.0
    return float(np.clip(np.vdot(a.ravel(), b.ravel()).real / denom, -1.0, 1.0))


def psnr_unit(recon: np.ndarray, truth: np.ndarray) -> float:
    """Peak signal-to-noise ratio for a [0, 1] dynamic range, capped at 300 dB."""
    mse = float(np.mean((recon - truth) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return float(min(PSNR_CAP_DB, 10.0 * np.log10(1.0 / mse)))


def metrics(recon: RealField, truth: RealField) -> ImageMetrics:
    """Relative L2 error, NCC and PSNR of ``recon`` against ``truth``.

    Raises:
        GridMismatch: If the fields live on different grids.
        ZeroTruth: If ``truth`` is identically zero.
    """
    truth.grid.require_same(recon.grid, "reconstruction")
    t = truth.values
    r = recon.values
    truth_norm = float(np.linalg.norm(t))
    if truth_norm == 0.0:
        raise ZeroTruth("ground truth has zero norm")
    return ImageMetrics(
        relative_l2=float(np.linalg.norm(r - t) / truth_norm),
        ncc=normalized_cross_correlation(r, t),
        psnr_db=psnr_unit(r, t),
    )
