"""The 6-bit directional gradient micropattern.

Each pixel gets one code built from its four same-order directional
derivatives: the six ordered pairs (0°,45°), (0°,90°), (0°,135°),
(45°,90°), (45°,135°), (90°,135°) are compared with a strict greater-than
and packed most-significant bit first. An order-n code compares order n-1
derivatives, so the minimum order is 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .derivatives import DIRECTIONS, MAX_ORDER, derivative_field
from .image import GrayImage

# Pair listing order; index into (d0, d45, d90, d135). MSB first.
PAIR_ORDER = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

LDGP_BITS = 6


@dataclass(frozen=True)
class CodeImage:
    """Per-pixel descriptor codes; code_bits is 6 for LDGP, 8 for baselines."""

    code_bits: int
    codes: np.ndarray

    def __post_init__(self):
        self.codes.flags.writeable = False

    @property
    def width(self) -> int:
        return self.codes.shape[1]

    @property
    def height(self) -> int:
        return self.codes.shape[0]


def encode_pair(a: int, b: int) -> int:
    """1 if a > b, else 0. Ties fall to the else branch."""
    return 1 if a > b else 0


def ldgp_code(d0: int, d45: int, d90: int, d135: int) -> int:
    """Pack the six pairwise comparisons of one pixel's derivatives into 6 bits."""
    values = (d0, d45, d90, d135)
    code = 0
    for a, b in PAIR_ORDER:
        code = (code << 1) | encode_pair(values[a], values[b])
    return code


def ldgp_image(image: GrayImage, order: int = 2) -> CodeImage:
    """Encode the order-n 6-bit pattern for every pixel of an image.

    The four direction fields are computed at derivative order n-1, then
    each pixel's six pair comparisons are packed MSB first.
    """
    if order < 2:
        raise ValueError(f"code order must be >= 2, got {order}")
    if order - 1 > MAX_ORDER:
        raise ValueError(f"code order must be <= {MAX_ORDER + 1}, got {order}")
    fields = [derivative_field(image, d, order - 1).values for d in DIRECTIONS]
    codes = np.zeros(image.pixels.shape, dtype=np.uint8)
    for k, (a, b) in enumerate(PAIR_ORDER):
        codes |= (fields[a] > fields[b]).astype(np.uint8) << (LDGP_BITS - 1 - k)
    return CodeImage(LDGP_BITS, codes)
