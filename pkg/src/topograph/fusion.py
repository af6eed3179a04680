"""Fusing multi-view TopoImages with the source image (forward pass only)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

DEFAULT_MID_CHANNELS = 16
BN_EPS = 1e-5

_ARRAYS = ("kernel", "bias", "bn_gamma", "bn_beta", "bn_mean", "bn_var")


@dataclass(frozen=True, eq=False)
class ConvBlockWeights:
    """3x3 conv + inference-mode batch norm + ReLU."""

    kernel: np.ndarray
    bias: np.ndarray
    bn_gamma: np.ndarray
    bn_beta: np.ndarray
    bn_mean: np.ndarray
    bn_var: np.ndarray
    bn_eps: float = BN_EPS

    def __post_init__(self):
        for name in _ARRAYS:
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        k = self.kernel
        if k.ndim != 4 or k.shape[2:] != (3, 3):
            raise ValueError(f"kernel must be (out, in, 3, 3), got {k.shape}")
        for name in _ARRAYS[1:]:
            if getattr(self, name).shape != (k.shape[0],):
                raise ValueError(f"{name} must have shape ({k.shape[0]},)")
        if np.any(self.bn_var < 0) or not self.bn_eps > 0:
            raise ValueError("batch-norm variance must be >= 0 and eps > 0")

    @property
    def in_channels(self) -> int:
        return self.kernel.shape[1]

    @property
    def out_channels(self) -> int:
        return self.kernel.shape[0]


@dataclass(frozen=True)
class ViewWeights:
    block1: ConvBlockWeights
    block2: ConvBlockWeights

    def __post_init__(self):
        if self.block1.out_channels != self.block2.in_channels:
            raise ValueError(
                f"block1 emits {self.block1.out_channels} channels, block2 expects {self.block2.in_channels}"
            )


def minmax(x) -> np.ndarray:
    """Rescale to [0, 1]; constant input maps to zeros."""
    x = np.asarray(x, dtype=np.float64)
    lo, hi = x.min(), x.max()
    if hi <= lo:
        return np.zeros_like(x)
    return (x - lo) / (hi - lo)


def _conv3x3(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    _, h, w = x.shape
    xp = np.pad(x, ((0, 0), (1, 1), (1, 1)))
    out = np.zeros((kernel.shape[0], h, w))
    for dy in range(3):
        for dx in range(3):
            out += np.tensordot(kernel[:, :, dy, dx], xp[:, dy : dy + h, dx : dx + w], axes=1)
    return out


def conv_block_forward(x, w: ConvBlockWeights) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or x.shape[0] != w.in_channels:
        raise ValueError(f"block expects {w.in_channels} input channels, got shape {x.shape}")
    y = _conv3x3(x, w.kernel) + w.bias[:, None, None]
    scale = w.bn_gamma / np.sqrt(w.bn_var + w.bn_eps)
    y = (y - w.bn_mean[:, None, None]) * scale[:, None, None] + w.bn_beta[:, None, None]
    return np.maximum(y, 0.0)


def compress(view, w: ViewWeights) -> np.ndarray:
    return conv_block_forward(conv_block_forward(view, w.block1), w.block2)


def _check_views(img: np.ndarray, views: Sequence) -> list[np.ndarray]:
    if img.ndim != 3:
        raise ValueError(f"image tensor must be (C, H, W), got {img.shape}")
    out = []
    for k, v in enumerate(views):
        v = np.asarray(v)
        if v.ndim != 3 or v.shape[1:] != img.shape[1:]:
            raise ValueError(f"view {k} has shape {v.shape}; image is {img.shape}")
        out.append(v)
    return out


def cmvfm_fuse(img, views: Sequence, weights: Sequence[ViewWeights]) -> np.ndarray:
    """Compress each view to the image's channels, add, normalize, then merge views."""
    img = np.asarray(img, dtype=np.float64)
    views = _check_views(img, views)
    if not views:
        raise ValueError("cmvfm needs at least one view")
    if len(weights) != len(views):
        raise ValueError(f"{len(weights)} weight sets for {len(views)} views")
    fused = []
    for k, (v, w) in enumerate(zip(views, weights)):
        if w.block1.in_channels != v.shape[0] or w.block2.out_channels != img.shape[0]:
            raise ValueError(
                f"view {k}: weights map {w.block1.in_channels}->{w.block2.out_channels} channels, "
                f"need {v.shape[0]}->{img.shape[0]}"
            )
        fused.append(minmax(img + compress(v, w)))
    if len(fused) == 1:
        return fused[0].astype(np.float32)
    total = fused[0].copy()
    for f in fused[1:]:
        total += f
    return minmax(total).astype(np.float32)


def fuse_concat(img, views: Sequence) -> np.ndarray:
    img = np.asarray(img)
    views = _check_views(img, views)
    return np.concatenate([img.astype(np.float32)] + [v.astype(np.float32) for v in views], axis=0)


def _group_mean(view: np.ndarray, n_groups: int) -> np.ndarray:
    c = view.shape[0]
    size = math.ceil(c / n_groups)
    bounds = [(k * size, min((k + 1) * size, c)) for k in range(n_groups)]
    if any(lo >= hi for lo, hi in bounds):
        raise ValueError(f"cannot split {c} channels into {n_groups} groups of size {size}")
    return np.stack([view[lo:hi].mean(axis=0) for lo, hi in bounds])


def fuse_meanpool(img, views: Sequence) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    views = _check_views(img, views)
    stack = [img] + [_group_mean(v.astype(np.float64), img.shape[0]) for v in views]
    return (sum(stack) / len(stack)).astype(np.float32)


def _block_dims(view_channels: int, img_channels: int, mid: int):
    return ((mid, view_channels), (img_channels, mid))


def init_weights(
    seed: int, view_channels: Sequence[int], img_channels: int, mid: int = DEFAULT_MID_CHANNELS
) -> list[ViewWeights]:
    """Deterministic stand-in weights: He-normal kernels, zero bias, identity BN."""
    rng = np.random.default_rng(seed)
    out = []
    for c in view_channels:
        blocks = []
        for n_out, n_in in _block_dims(c, img_channels, mid):
            std = math.sqrt(2.0 / (n_in * 9))
            blocks.append(
                ConvBlockWeights(
                    kernel=rng.normal(0.0, std, size=(n_out, n_in, 3, 3)),
                    bias=np.zeros(n_out),
                    bn_gamma=np.ones(n_out),
                    bn_beta=np.zeros(n_out),
                    bn_mean=np.zeros(n_out),
                    bn_var=np.ones(n_out),
                )
            )
        out.append(ViewWeights(*blocks))
    return out


def zero_weights(view_channels: Sequence[int], img_channels: int, mid: int = DEFAULT_MID_CHANNELS):
    """Weights whose compression path outputs exact zeros."""
    out = []
    for c in view_channels:
        blocks = [
            ConvBlockWeights(
                np.zeros((n_out, n_in, 3, 3)), np.zeros(n_out), np.zeros(n_out),
                np.zeros(n_out), np.zeros(n_out), np.ones(n_out),
            )
            for n_out, n_in in _block_dims(c, img_channels, mid)
        ]
        out.append(ViewWeights(*blocks))
    return out


def save_weights(weights: Sequence[ViewWeights], directory) -> None:
    """Write one NPY per array plus ``manifest.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {"views": []}
    for v, vw in enumerate(weights):
        entry = {}
        for b, block in enumerate((vw.block1, vw.block2), start=1):
            spec = {}
            for name in _ARRAYS:
                fname = f"v{v}_b{b}_{name}.npy"
                arr = np.asarray(getattr(block, name), dtype="<f4")
                with open(directory / fname, "wb") as fh:
                    np.lib.format.write_array(fh, arr, version=(1, 0), allow_pickle=False)
                spec[name] = fname
            spec["bn_eps"] = block.bn_eps
            entry[f"block{b}"] = spec
        manifest["views"].append(entry)
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def load_weights(directory) -> list[ViewWeights]:
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no manifest.json in {directory}")
    manifest = json.loads(manifest_path.read_text())
    out = []
    for entry in manifest["views"]:
        blocks = []
        for key in ("block1", "block2"):
            spec = entry[key]
            arrays = {name: np.load(directory / spec[name], allow_pickle=False) for name in _ARRAYS}
            blocks.append(ConvBlockWeights(**arrays, bn_eps=float(spec.get("bn_eps", BN_EPS))))
        out.append(ViewWeights(*blocks))
    return out
