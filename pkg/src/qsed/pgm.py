"""Grayscale PGM (P2/P5) input and output through Pillow."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError


class PgmError(ValueError):
    pass


def _is_pow2(v: int) -> bool:
    return v > 0 and v & (v - 1) == 0


def center_crop_pow2(grid: np.ndarray) -> np.ndarray:
    """Largest centred square whose side is a power of two."""
    h, w = grid.shape
    side = 1 << (min(h, w).bit_length() - 1)
    top, left = (h - side) // 2, (w - side) // 2
    return grid[top : top + side, left : left + side]


def read_pgm(path, crop: bool = False) -> np.ndarray:
    """Read an 8-bit P2 or P5 file as a square power-of-two ``uint8`` grid.

    Files with maxval below 255 come back rescaled to 0..255 by Pillow.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"{path}: not a P2/P5 graymap (magic {magic!r})")
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            grid = np.asarray(im)
    except (UnidentifiedImageError, ValueError, OSError, SyntaxError) as e:
        raise PgmError(f"{path}: malformed PGM: {e}") from e
    if mode != "L":
        raise PgmError(f"{path}: unsupported maxval (only maxval <= 255 is accepted)")
    h, w = grid.shape
    if h != w or not _is_pow2(h):
        if not crop:
            raise PgmError(f"{path}: image is {w}x{h}; a square power-of-two size is required (see --crop)")
        grid = center_crop_pow2(grid)
    return np.array(grid, dtype=np.uint8)


def write_pgm(grid, path) -> None:
    """Write a binary P5 file with maxval 255."""
    g = np.asarray(grid)
    if g.ndim != 2:
        raise PgmError("PGM data must be two-dimensional")
    if g.size and (g.min() < 0 or g.max() > 255):
        raise PgmError("PGM values must lie in 0..255")
    Image.fromarray(g.astype(np.uint8), mode="L").save(Path(path), format="PPM")
