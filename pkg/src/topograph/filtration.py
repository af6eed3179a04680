"""Scalar filtration fields derived from raster images."""

from __future__ import annotations

import enum

import numpy as np

from .image_io import RasterImage

# largest |5-point Laplacian| for samples in [0, 1]
_LAPLACIAN_BOUND = 8.0


class FiltrationKind(str, enum.Enum):
    INTENSITY = "intensity"
    GRADIENT = "gradient"

    @classmethod
    def parse(cls, name) -> "FiltrationKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown filtration {name!r}; expected one of: {valid}") from None


def intensity_filtration(img: RasterImage) -> np.ndarray:
    """Grayscale values as-is; RGB as the Euclidean norm over channels / sqrt(3)."""
    data = img.data
    if img.channels == 1:
        return data[0].copy()
    return np.minimum(np.sqrt(np.sum(data * data, axis=0)) / np.sqrt(3.0), 1.0)


def laplacian(g) -> np.ndarray:
    """4-neighbour Laplacian with clamp-to-edge padding."""
    g = np.asarray(g, dtype=np.float64)
    p = np.pad(g, 1, mode="edge")
    return p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * g


def gradient_filtration(img: RasterImage) -> np.ndarray:
    """Mean |Laplacian| over channels, scaled into [0, 1]."""
    mag = np.mean([np.abs(laplacian(ch)) for ch in img.data], axis=0)
    return mag / _LAPLACIAN_BOUND


def apply_filtration(img: RasterImage, kind) -> np.ndarray:
    kind = FiltrationKind.parse(kind)
    if kind is FiltrationKind.INTENSITY:
        return intensity_filtration(img)
    return gradient_filtration(img)
