"""Directional derivative fields of arbitrary order.

A derivative field of order k is the order k-1 field minus a copy of itself
shifted one pixel along the direction's neighbor offset; order 0 is the
image widened to signed integers. Off-image neighbor coordinates are clamped
to the nearest valid pixel (replicate border), so every field keeps the full
input dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .image import GrayImage

# |value| <= 255 * 2^order keeps int32 exact through order 20.
MAX_ORDER = 20


class Direction(Enum):
    """The four encoding directions with their (dx, dy) neighbor offsets.

    y grows downward (image row order): D0 is the right neighbor, D45
    upper-right, D90 up, D135 upper-left.
    """

    D0 = (1, 0)
    D45 = (1, -1)
    D90 = (0, -1)
    D135 = (-1, -1)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]


DIRECTIONS = (Direction.D0, Direction.D45, Direction.D90, Direction.D135)


@dataclass(frozen=True)
class DerivativeField:
    """Signed derivative values for one direction at one order."""

    direction: Direction
    order: int
    values: np.ndarray

    def __post_init__(self):
        self.values.flags.writeable = False

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def check_descriptor_input(image: GrayImage) -> None:
    """Images entering a descriptor pipeline need at least one neighbor each way."""
    if image.width < 2 or image.height < 2:
        raise ValueError(f"image must be at least 2x2, got {image.width}x{image.height}")


def shift_clamped(values: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """Array S with S[y, x] = values[clamp(y+dy), clamp(x+dx)]."""
    h, w = values.shape
    rows = np.clip(np.arange(h) + dy, 0, h - 1)
    cols = np.clip(np.arange(w) + dx, 0, w - 1)
    return values[rows[:, None], cols[None, :]]


def derivative_field(image: GrayImage, direction: Direction, order: int) -> DerivativeField:
    """Compute the order-n directional derivative field of an image.

    Applies the one-pixel difference operator n times; the result has the
    same dimensions as the input and values bounded by 255 * 2^n.
    """
    if order < 1:
        raise ValueError(f"derivative order must be >= 1, got {order}")
    if order > MAX_ORDER:
        raise ValueError(f"derivative order must be <= {MAX_ORDER}, got {order}")
    check_descriptor_input(image)
    values = image.pixels.astype(np.int32)
    for _ in range(order):
        values = values - shift_clamped(values, direction.dx, direction.dy)
    return DerivativeField(direction, order, values)
