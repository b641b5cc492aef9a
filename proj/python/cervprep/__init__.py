"""Colposcopy image preprocessing.

Removes specular highlights by solving Laplace's equation over the masked
pixels and extracts the cervix region of interest by k-means clustering in
CIELAB chromaticity. Images are numpy arrays: uint8 (H, W, 3) for color,
bool (H, W) for masks.
"""

from ._core import (
    DegenerateInputError,
    IoError,
    delta_ab,
    detect_specular,
    dilate,
    fundamental_solution,
    generate_phantom,
    inpaint_image,
    inpaint_plane,
    kmeans,
    load_image,
    mask_boundary,
    rgb_to_lab,
    run_pipeline,
    save_image,
    srgb_to_lab,
    verify_radial_harmonicity,
    __version__,
)

__all__ = [
    "DegenerateInputError",
    "IoError",
    "delta_ab",
    "detect_specular",
    "dilate",
    "fundamental_solution",
    "generate_phantom",
    "inpaint_image",
    "inpaint_plane",
    "kmeans",
    "load_image",
    "mask_boundary",
    "rgb_to_lab",
    "run_pipeline",
    "save_image",
    "srgb_to_lab",
    "verify_radial_harmonicity",
    "__version__",
]
