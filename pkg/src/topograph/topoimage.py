"""Patch-wise TopoImage construction.

Each non-overlapping square patch is min-max normalized, its persistence
diagram is vectorized into a persistence image, and the flattened image is
written into every pixel of the patch footprint.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cubical import compute_diagram
from .filtration import FiltrationKind, apply_filtration
from .image_io import RasterImage
from .persistence_image import PIConfig, flatten, vectorize

log = logging.getLogger(__name__)

CANDIDATE_PATCH_SIZES = (7, 14, 28, 56, 112)


class PatchSizeError(ValueError):
    pass


@dataclass(frozen=True)
class PatchGrid:
    patch_size: int
    rows: int
    cols: int

    @classmethod
    def for_shape(cls, height: int, width: int, patch_size: int) -> "PatchGrid":
        if patch_size < 1 or height % patch_size or width % patch_size:
            raise PatchSizeError(
                f"patch size {patch_size} does not divide image of H={height}, W={width}"
            )
        return cls(patch_size, height // patch_size, width // patch_size)

    def __iter__(self):
        for r in range(self.rows):
            for c in range(self.cols):
                yield r, c

    def footprint(self, r: int, c: int) -> tuple[slice, slice]:
        s = self.patch_size
        return slice(r * s, (r + 1) * s), slice(c * s, (c + 1) * s)


@dataclass(frozen=True)
class TopoConfig:
    patch_size: int = 28
    pi: PIConfig = field(default_factory=PIConfig)
    filtrations: tuple[FiltrationKind, ...] = (FiltrationKind.INTENSITY, FiltrationKind.GRADIENT)

    def __post_init__(self):
        object.__setattr__(
            self, "filtrations", tuple(FiltrationKind.parse(f) for f in self.filtrations)
        )


def normalize_patch(values) -> np.ndarray:
    """Affine rescale to [0, 1]; a constant patch becomes all zeros."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("empty patch")
    lo, hi = v.min(), v.max()
    if hi <= lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def patch_vector(patch, pi: PIConfig) -> np.ndarray:
    return flatten(vectorize(compute_diagram(normalize_patch(patch)), pi))


def build_topoimage(g, cfg: TopoConfig = TopoConfig(), jobs: int = 1) -> np.ndarray:
    """TopoImage of a scalar grid as a float32 ``(C, H, W)`` array.

    ``jobs`` > 1 spreads patches over threads; the output does not depend on it.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 2:
        raise ValueError(f"expected a 2-D grid, got shape {g.shape}")
    grid = PatchGrid.for_shape(*g.shape, cfg.patch_size)
    cells = list(grid)

    def work(rc):
        return patch_vector(g[grid.footprint(*rc)], cfg.pi)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            vectors = list(pool.map(work, cells))
    else:
        vectors = [work(rc) for rc in cells]

    vecs = np.stack(vectors).reshape(grid.rows, grid.cols, -1).astype(np.float32)
    s = grid.patch_size
    out = np.repeat(np.repeat(vecs, s, axis=0), s, axis=1)
    return np.ascontiguousarray(out.transpose(2, 0, 1))


def build_multiview(img: RasterImage, cfg: TopoConfig = TopoConfig(), jobs: int = 1) -> list[np.ndarray]:
    if not cfg.filtrations:
        raise ValueError("at least one filtration is required")
    views = []
    for kind in cfg.filtrations:
        log.debug("building %s TopoImage for %dx%d image", kind.value, img.height, img.width)
        views.append(build_topoimage(apply_filtration(img, kind), cfg, jobs=jobs))
    return views


def suggest_patch_size(avg_object_pixels: float, image_side: int = 224) -> int:
    """Candidate patch size whose area is closest to the average object area."""
    if avg_object_pixels < 1:
        raise ValueError(f"average object size must be >= 1 pixel, got {avg_object_pixels}")
    sizes = [s for s in CANDIDATE_PATCH_SIZES if image_side % s == 0]
    if not sizes:
        raise PatchSizeError(f"no candidate patch size in {CANDIDATE_PATCH_SIZES} divides {image_side}")
    return min(sizes, key=lambda s: abs(s * s - avg_object_pixels))
