"""LBP and LDP baseline codecs for accuracy and timing comparison.

Both encode the 8-neighborhood of each pixel, neighbors ordered clockwise
from the upper-left, MSB first, replicate border. LBP thresholds raw
intensities against the center; LDP tests sign agreement between the
center's and each neighbor's directional derivative, one 8-bit image per
direction (32 bits per pixel in total).
"""

from __future__ import annotations

import numpy as np

from .codec import CodeImage
from .derivatives import (
    DIRECTIONS,
    MAX_ORDER,
    check_descriptor_input,
    derivative_field,
    shift_clamped,
)
from .image import GrayImage

# (dx, dy) offsets clockwise from the upper-left neighbor; index 0 is the MSB.
NEIGHBOR_OFFSETS = (
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
)


def lbp_image(image: GrayImage) -> CodeImage:
    """Classic 8-neighbor binary pattern: bit set where neighbor >= center."""
    check_descriptor_input(image)
    center = image.pixels
    codes = np.zeros(center.shape, dtype=np.uint8)
    for i, (dx, dy) in enumerate(NEIGHBOR_OFFSETS):
        neighbor = shift_clamped(center, dx, dy)
        codes |= (neighbor >= center).astype(np.uint8) << (7 - i)
    return CodeImage(8, codes)


def ldp_image(image: GrayImage, order: int = 2) -> tuple[CodeImage, CodeImage, CodeImage, CodeImage]:
    """Four 8-bit derivative-pattern images, one per direction.

    For each direction the order n-1 derivative field is computed and bit i
    is set where the product of the center's and neighbor i's derivative is
    <= 0 (sign disagreement or either value zero).
    """
    if order < 2:
        raise ValueError(f"code order must be >= 2, got {order}")
    if order - 1 > MAX_ORDER:
        raise ValueError(f"code order must be <= {MAX_ORDER + 1}, got {order}")
    out = []
    for direction in DIRECTIONS:
        # int64: products of order-20 derivatives overflow int32.
        field = derivative_field(image, direction, order - 1).values.astype(np.int64)
        codes = np.zeros(field.shape, dtype=np.uint8)
        for i, (dx, dy) in enumerate(NEIGHBOR_OFFSETS):
            product = field * shift_clamped(field, dx, dy)
            codes |= (product <= 0).astype(np.uint8) << (7 - i)
        out.append(CodeImage(8, codes))
    return tuple(out)
