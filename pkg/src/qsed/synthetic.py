"""Synthetic test images: oriented lines, steps and random grids."""

from __future__ import annotations

import math

import numpy as np


def oriented_line(side: int = 64, angle: float = 22.5, thickness: float = 1.0,
                  fg: int = 200, bg: int = 40, offset: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """A straight band through the image centre at ``angle`` degrees from the X axis.

    Returns ``(image, mask)`` where ``mask`` marks the band's pixels. Angles
    are counter-clockwise as displayed (rows grow downwards).
    """
    y, x = np.mgrid[0:side, 0:side].astype(float)
    c = (side - 1) / 2
    t = math.radians(angle)
    dist = np.abs(-(x - c) * math.sin(t) - (y - c) * math.cos(t) + offset)
    mask = dist <= thickness / 2
    return np.where(mask, fg, bg).astype(np.int64), mask


def dilate(mask: np.ndarray, steps: int = 1) -> np.ndarray:
    """8-connected binary dilation without wrap-around."""
    out = np.asarray(mask, dtype=bool)
    h, w = out.shape
    for _ in range(steps):
        padded = np.pad(out, 1)
        grown = np.zeros_like(out)
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                grown |= padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        out = grown
    return out


def line_hits(edges: np.ndarray, mask: np.ndarray) -> int:
    """Detected edge pixels lying on the band or directly beside it."""
    return int((np.asarray(edges, dtype=bool) & dilate(mask)).sum())


def vertical_step(side: int, low: int = 0, high: int = 255) -> np.ndarray:
    """``low`` for X < side/2, ``high`` otherwise."""
    g = np.full((side, side), low, dtype=np.int64)
    g[:, side // 2 :] = high
    return g


def random_grid(rng: np.random.Generator, side: int, q: int = 8) -> np.ndarray:
    return rng.integers(0, 1 << q, size=(side, side), dtype=np.int64)
