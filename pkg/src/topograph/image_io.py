"""PNG decoding, NPY tensor export and PNG previews."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import png

PathLike = Union[str, os.PathLike]

NPY_DTYPE = np.dtype("<f4")


class ImageFormatError(ValueError):
    """Raised for PNG files this package does not decode."""


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Planar image, ``data`` shaped ``(channels, height, width)``, samples in [0, 1]."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 2:
            data = data[None]
        if data.ndim != 3 or data.shape[0] not in (1, 3):
            raise ValueError(f"expected (1|3, H, W) samples, got shape {data.shape}")
        if data.shape[1] < 1 or data.shape[2] < 1:
            raise ValueError(f"empty image of shape {data.shape}")
        if not np.all((data >= 0.0) & (data <= 1.0)):
            raise ValueError("image samples must lie in [0, 1]")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def as_tensor(self) -> np.ndarray:
        return self.data.astype(np.float32)


def load_image(path: PathLike) -> RasterImage:
    """Decode an 8- or 16-bit grayscale/RGB PNG; alpha is dropped."""
    path = Path(path)
    try:
        width, height, rows, info = png.Reader(filename=str(path)).read()
        rows = [np.asarray(r) for r in rows]
    except FileNotFoundError:
        raise
    except (png.Error, OSError) as exc:
        raise ImageFormatError(f"{path}: unreadable PNG ({exc})") from exc

    if info.get("palette") is not None:
        raise ImageFormatError(f"{path}: unsupported color model 'palette'")
    bitdepth = info["bitdepth"]
    if bitdepth not in (8, 16):
        raise ImageFormatError(f"{path}: unsupported bit depth {bitdepth} (need 8 or 16)")

    planes = info["planes"]
    color = 1 if info["greyscale"] else 3
    arr = np.vstack(rows).astype(np.float64).reshape(height, width, planes)
    arr = arr[..., :color] / float(2**bitdepth - 1)
    return RasterImage(np.ascontiguousarray(arr.transpose(2, 0, 1)))


def save_png(samples, path: PathLike, bitdepth: int = 8) -> None:
    """Write integer samples shaped (H, W) or (H, W, 3) as a PNG."""
    samples = np.asarray(samples)
    greyscale = samples.ndim == 2
    h, w = samples.shape[:2]
    writer = png.Writer(width=w, height=h, greyscale=greyscale, bitdepth=bitdepth)
    dtype = np.uint16 if bitdepth > 8 else np.uint8
    with open(path, "wb") as fh:
        writer.write(fh, samples.astype(dtype).reshape(h, -1).tolist())


def as_tensor(t) -> np.ndarray:
    t = np.asarray(t)
    if t.ndim != 3:
        raise ValueError(f"tensor must be (C, H, W), got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("tensor contains non-finite values")
    return np.ascontiguousarray(t, dtype=NPY_DTYPE)


def export_tensor(t, path: PathLike) -> None:
    """Write a (C, H, W) tensor as NPY v1.0, little-endian float32, C order."""
    arr = as_tensor(t)
    with open(path, "wb") as fh:
        np.lib.format.write_array(fh, arr, version=(1, 0), allow_pickle=False)


def read_tensor(path: PathLike) -> np.ndarray:
    return np.load(path, allow_pickle=False)


def minmax_to_bytes(channel) -> np.ndarray:
    """Linear rescale to 0..255 with round-half-even; constant input gives zeros."""
    ch = np.asarray(channel, dtype=np.float64)
    lo, hi = ch.min(), ch.max()
    if hi <= lo:
        return np.zeros(ch.shape, dtype=np.uint8)
    return np.rint((ch - lo) / (hi - lo) * 255.0).astype(np.uint8)


def export_png_preview(t, channel: int, path: PathLike) -> None:
    arr = np.asarray(t)
    if not 0 <= channel < arr.shape[0]:
        raise IndexError(f"channel {channel} out of range for {arr.shape[0]} channels")
    save_png(minmax_to_bytes(arr[channel]), path)
