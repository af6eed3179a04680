"""Patch-wise persistent homology features for images ("TopoImages")."""

from ._accel import backend
from .cubical import (
    CubicalComplex,
    PersistenceDiagram,
    PersistencePair,
    betti_at,
    build_complex,
    compute_diagram,
    persistence_h0,
    persistence_h1,
)
from .distance import wasserstein1
from .filtration import FiltrationKind, gradient_filtration, intensity_filtration, laplacian
from .fusion import cmvfm_fuse, conv_block_forward, fuse_concat, fuse_meanpool, init_weights
from .image_io import RasterImage, export_png_preview, export_tensor, load_image
from .oracle import oracle_diagram
from .persistence_image import PIConfig, PIMode, birth_persistence_points, flatten, vectorize
from .topoimage import (
    PatchGrid,
    TopoConfig,
    build_multiview,
    build_topoimage,
    normalize_patch,
    suggest_patch_size,
)

__version__ = "0.1.0"
