"""Grayscale images, PGM/PNG loading, dataset ingestion and synthesis.

Pixels are stored as 8-bit unsigned intensities; all descriptor math
downstream widens to signed integers. Images and datasets are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_WHITESPACE = b" \t\n\r\v\f"
_IMAGE_SUFFIXES = (".pgm", ".png")


class ImageIOError(ValueError):
    """Raised when an image file cannot be read or is not a supported format."""


class DatasetError(ValueError):
    """Raised for empty, malformed, or inconsistent dataset inputs."""


@dataclass(frozen=True)
class GrayImage:
    """A 2-D grid of 8-bit intensities, row-major, immutable."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D pixel grid, got shape {arr.shape}")
        if arr.size == 0:
            raise ImageIOError("zero-dimension image")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"pixel dtype must be integer, got {arr.dtype}")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("pixel values must lie in [0, 255]")
        arr = np.array(arr, dtype=np.uint8)  # private copy; frozen below
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class DatasetEntry:
    image: GrayImage
    label: str
    path: str


@dataclass(frozen=True)
class LabeledDataset:
    """Ordered (image, label, path) entries; order is part of the contract."""

    entries: tuple[DatasetEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def image_count(self) -> int:
        return len(self.entries)

    @property
    def class_count(self) -> int:
        return len(set(e.label for e in self.entries))

    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    def paths(self) -> list[str]:
        return [e.path for e in self.entries]


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-delimited token, skipping '#' comments (PNM header rules)."""
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == ord("#"):
            nl = data.find(b"\n", pos)
            pos = n if nl < 0 else nl + 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise ImageIOError("unreadable file: truncated header")
    return data[start:pos], pos


def _parse_header_int(data, pos, what):
    token, pos = _next_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise ImageIOError(f"unreadable file: bad {what} field") from None
    return value, pos


def _parse_pgm(data: bytes) -> np.ndarray:
    magic, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise ImageIOError(f"unsupported format: PNM magic {magic!r}")
    width, pos = _parse_header_int(data, pos, "width")
    height, pos = _parse_header_int(data, pos, "height")
    maxval, pos = _parse_header_int(data, pos, "maxval")
    if width == 0 or height == 0:
        raise ImageIOError("zero-dimension image")
    if width < 0 or height < 0:
        raise ImageIOError("unreadable file: negative dimensions")
    if not 0 < maxval <= 255:
        raise ImageIOError(f"unsupported format: maxval {maxval} (only maxval <= 255)")
    count = width * height
    if magic == b"P5":
        # Raster begins after exactly one whitespace byte following maxval.
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise ImageIOError("unreadable file: missing raster separator")
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) < count:
            raise ImageIOError("unreadable file: truncated raster")
        return np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    samples = np.empty(count, dtype=np.uint8)
    for i in range(count):
        value, pos = _parse_header_int(data, pos, "sample")
        if not 0 <= value <= 255:
            raise ImageIOError("unreadable file: sample out of range")
        samples[i] = value
    return samples.reshape(height, width)


def _to_luma(rgb: np.ndarray) -> np.ndarray:
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    return np.rint(0.299 * r + 0.587 * g + 0.114 * b).astype(np.uint8)


def _load_png(path: Path) -> np.ndarray:
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            im.load()
            arr = np.asarray(im)
    except UnidentifiedImageError:
        raise ImageIOError(f"unreadable file: {path} is not a decodable PNG") from None
    except OSError as exc:
        raise ImageIOError(f"unreadable file: {path}: {exc}") from None
    if arr.ndim == 2:
        if arr.dtype != np.uint8:
            raise ImageIOError(f"unsupported format: {path} has non 8-bit samples")
        return arr
    if arr.ndim == 3 and arr.shape[2] in (3, 4) and arr.dtype == np.uint8:
        return _to_luma(arr[..., :3])
    raise ImageIOError(f"unsupported format: {path} (mode not convertible to 8-bit luma)")


def load_image(path) -> GrayImage:
    """Load a PGM (P2/P5) or PNG file as a GrayImage.

    Color inputs are converted by integer luma round(0.299R + 0.587G + 0.114B).
    """
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".pgm":
        try:
            data = p.read_bytes()
        except OSError as exc:
            raise ImageIOError(f"unreadable file: {p}: {exc}") from None
        return GrayImage(_parse_pgm(data))
    if suffix == ".png":
        if not p.is_file():
            raise ImageIOError(f"unreadable file: {p}: no such file")
        return GrayImage(_load_png(p))
    raise ImageIOError(f"unsupported format: {p.suffix!r} (expected .pgm or .png)")


def write_pgm(image: GrayImage, path) -> None:
    """Write a GrayImage as binary PGM (P5, maxval 255)."""
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + image.pixels.tobytes())


def _load_entry(base: Path, rel: str, label: str) -> DatasetEntry:
    try:
        img = load_image(base / rel)
    except ImageIOError as exc:
        raise DatasetError(f"unreadable image {rel}: {exc}") from None
    return DatasetEntry(img, label, rel)


def _scan_directory(root: Path) -> list[tuple[str, str]]:
    pairs = []
    for child in root.iterdir():
        if not child.is_dir():
            continue
        label = child.name
        for f in child.iterdir():
            if f.is_file() and f.suffix.lower() in _IMAGE_SUFFIXES:
                pairs.append((label, f"{label}/{f.name}"))
    return pairs


def _read_manifest(manifest: Path) -> list[tuple[str, str]]:
    try:
        text = manifest.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"unreadable manifest {manifest}: {exc}") from None
    pairs = []
    seen = set()
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise DatasetError(f"malformed manifest line {lineno}: expected 'relative_path,label'")
        rel, label = row[0].strip(), row[1].strip()
        if rel in seen:
            raise DatasetError(f"duplicate path in manifest: {rel}")
        seen.add(rel)
        pairs.append((label, rel))
    return pairs


def load_dataset(root=None, manifest=None) -> LabeledDataset:
    """Load a labeled image dataset.

    Parameters
    ----------
    root : path, optional
        Directory laid out as root/<class_id>/<image files>; the class id is
        the subdirectory name.
    manifest : path, optional
        UTF-8 CSV with `relative_path,label` lines (no header, `#` comments
        ignored), resolved relative to the manifest's directory. When both
        arguments are given the manifest wins.

    Entries are ordered lexicographically by (label, path) so two loads of
    the same tree produce identical order.
    """
    if manifest is not None:
        base = Path(manifest).parent
        pairs = _read_manifest(Path(manifest))
    elif root is not None:
        base = Path(root)
        if not base.is_dir():
            raise DatasetError(f"dataset root is not a directory: {base}")
        pairs = _scan_directory(base)
    else:
        raise DatasetError("either a dataset root or a manifest is required")
    if not pairs:
        raise DatasetError("empty dataset")
    pairs.sort()
    entries = tuple(_load_entry(base, rel, label) for label, rel in pairs)
    return LabeledDataset(entries)


def _bilinear_resize(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    sh, sw = src.shape
    ys = np.linspace(0.0, sh - 1.0, out_h)
    xs = np.linspace(0.0, sw - 1.0, out_w)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, sh - 1)
    x1 = np.minimum(x0 + 1, sw - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    a = src[np.ix_(y0, x0)]
    b = src[np.ix_(y0, x1)]
    c = src[np.ix_(y1, x0)]
    d = src[np.ix_(y1, x1)]
    return a * (1 - fy) * (1 - fx) + b * (1 - fy) * fx + c * fy * (1 - fx) + d * fy * fx


def synth_dataset(classes: int, per_class: int, width: int, height: int, seed: int) -> LabeledDataset:
    """Generate a deterministic synthetic dataset for tests and benchmarks.

    Each class is a smooth random base image; its members are the base plus
    small per-image noise, so images of one class stay mutually closer than
    images of different classes in expectation.
    """
    if classes < 1 or per_class < 1 or width < 1 or height < 1:
        raise ValueError("classes, per_class, width and height must all be >= 1")
    rng = np.random.default_rng(seed)
    entries = []
    coarse_h = max(2, height // 8)
    coarse_w = max(2, width // 8)
    for c in range(classes):
        label = f"c{c:03d}"
        coarse = rng.integers(0, 256, size=(coarse_h, coarse_w)).astype(np.float64)
        base = _bilinear_resize(coarse, height, width)
        for j in range(per_class):
            jitter = rng.normal(0.0, 3.0, size=(height, width))
            pix = np.clip(np.rint(base + jitter), 0, 255).astype(np.uint8)
            entries.append(DatasetEntry(GrayImage(pix), label, f"{label}/{j:02d}"))
    return LabeledDataset(tuple(entries))
