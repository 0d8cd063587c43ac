"""Classical integer reference for the whole detector.

Written independently of the circuit code: the eight gradient formulas are
spelled out term by term, neighbour offsets for suppression are derived from
the direction angles, and all indexing wraps modulo the image side exactly as
the cyclic shift does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DIRECTION_SETS = {2: (0, 4), 4: (0, 2, 4, 6), 8: tuple(range(8))}


def _grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=np.int64)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("grid must be square")
    side = g.shape[0]
    if side < 1 or side & (side - 1):
        raise ValueError("grid side must be a power of two")
    return g


def _p(g: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """p(Y+dy, X+dx) for every (Y, X), wrapping at the borders."""
    return np.roll(g, shift=(-dy, -dx), axis=(0, 1))


def _g0(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(-2, 1) + 2 * p(-1, 1) + 4 * p(0, 1) + 2 * p(1, 1) + p(2, 1)
            - p(-2, -1) - 2 * p(-1, -1) - 4 * p(0, -1) - 2 * p(1, -1) - p(2, -1))


def _g22(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(2, 0) + 2 * p(1, 1) + 2 * p(-1, 1) + 4 * p(0, 1) + 4 * p(1, 0)
            - p(-2, 0) - 2 * p(1, -1) - 2 * p(-1, -1) - 4 * p(0, -1) - 4 * p(-1, 0))


def _g45(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(2, -1) + p(-1, 2) + 2 * p(1, 1) + 4 * p(1, 0) + 4 * p(0, 1)
            - p(1, -2) - p(-2, 1) - 2 * p(-1, -1) - 4 * p(-1, 0) - 4 * p(0, -1))


def _g67(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(0, 2) + 2 * p(1, 1) + 2 * p(1, -1) + 4 * p(1, 0) + 4 * p(0, 1)
            - p(0, -2) - 2 * p(-1, 1) - 2 * p(-1, -1) - 4 * p(-1, 0) - 4 * p(0, -1))


def _g90(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(1, -2) + p(1, 2) + 2 * p(1, -1) + 2 * p(1, 1) + 4 * p(1, 0)
            - p(-1, -2) - p(-1, 2) - 2 * p(-1, -1) - 2 * p(-1, 1) - 4 * p(-1, 0))


def _g112(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(0, -2) + 2 * p(1, -1) + 2 * p(1, 1) + 4 * p(1, 0) + 4 * p(0, -1)
            - p(0, 2) - 2 * p(-1, 1) - 2 * p(-1, -1) - 4 * p(-1, 0) - 4 * p(0, 1))


def _g135(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(-1, -2) + p(1, 1) + 2 * p(1, -1) + 4 * p(1, 0) + 4 * p(0, -1)
            - p(-2, -1) - p(1, 2) - 2 * p(-1, 1) - 4 * p(-1, 0) - 4 * p(0, 1))


def _g157(g):
    p = lambda dy, dx: _p(g, dy, dx)  # noqa: E731
    return (p(2, 0) + 2 * p(1, -1) + 2 * p(-1, -1) + 4 * p(1, 0) + 4 * p(0, -1)
            - p(-2, 0) - 2 * p(1, 1) - 2 * p(-1, 1) - 4 * p(-1, 0) - 4 * p(0, 1))


_FORMULAS = (_g0, _g22, _g45, _g67, _g90, _g112, _g135, _g157)


def classical_gradient(grid, k: int) -> np.ndarray:
    """Signed gradient of direction ``k`` (angle ``22.5 * k`` degrees)."""
    if not 0 <= k < 8:
        raise ValueError("direction index must be in 0..7")
    return _FORMULAS[k](_grid(grid))


def classical_max_gradient(grid, directions: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel ``max_k |G^k|`` and the smallest ``k`` attaining it."""
    ks = DIRECTION_SETS[directions]
    mags = np.stack([np.abs(classical_gradient(grid, k)) for k in ks])
    idx = np.argmax(mags, axis=0)
    return mags.max(axis=0), np.asarray(ks)[idx]


def nms_offset(k: int) -> tuple[int, int]:
    theta = math.radians(22.5 * k)
    return round(2 * math.sin(theta)), round(2 * math.cos(theta))


def classical_nms(magnitude, direction) -> tuple[np.ndarray, np.ndarray]:
    """Keep a pixel when it is not strictly smaller than either neighbour along its direction."""
    mag = np.asarray(magnitude, dtype=np.int64)
    direction = np.asarray(direction)
    keep = np.zeros(mag.shape, dtype=bool)
    for k in range(8):
        dy, dx = nms_offset(k)
        ok = (mag >= _p(mag, dy, dx)) & (mag >= _p(mag, -dy, -dx))
        keep |= (direction == k) & ok
    return keep.astype(np.int64), np.where(keep, mag, 0)


def low_threshold(t_high: int) -> int:
    return t_high // 3


def classical_threshold(suppressed, t_high: int) -> np.ndarray:
    """2 = strong (> T_H), 1 = weak (T_L <= G <= T_H), 0 otherwise."""
    if t_high < 1:
        raise ValueError("high threshold must be at least 1")
    s = np.asarray(suppressed, dtype=np.int64)
    t_low = low_threshold(t_high)
    return np.where(s > t_high, 2, np.where(s >= t_low, 1, 0))


def classical_track(labels) -> np.ndarray:
    """Single pass: weak pixels survive when a strong pixel lies in their 24-neighbourhood."""
    e = np.asarray(labels)
    strong = e == 2
    near = np.zeros(e.shape, dtype=bool)
    for dy in range(-2, 3):
        for dx in range(-2, 3):
            if dy or dx:
                near |= _p(strong, dy, dx)
    return (strong | ((e == 1) & near)).astype(np.int64)


@dataclass(frozen=True)
class ClassicalResult:
    magnitude: np.ndarray
    direction: np.ndarray
    flag_m: np.ndarray
    suppressed: np.ndarray
    labels: np.ndarray
    edges: np.ndarray


def classical_stages(grid, t_high: int, directions: int = 8) -> ClassicalResult:
    if directions not in DIRECTION_SETS:
        raise ValueError("directions must be 2, 4 or 8")
    mag, dirs = classical_max_gradient(grid, directions)
    flag_m, sup = classical_nms(mag, dirs)
    labels = classical_threshold(sup, t_high)
    return ClassicalResult(mag, dirs, flag_m, sup, labels, classical_track(labels))


def classical_pipeline(grid, t_high: int, directions: int = 8) -> np.ndarray:
    return classical_stages(grid, t_high, directions).edges


@dataclass(frozen=True)
class MSE:
    """Exact mean squared error: ``total / count``."""

    total: int
    count: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.total, self.count)

    def __float__(self):
        return self.total / self.count

    def __str__(self):
        return self.format()

    def format(self, places: int = 2) -> str:
        v = self.value
        scaled = round(v * 10**places)
        sign = "-" if scaled < 0 else ""
        whole, frac = divmod(abs(scaled), 10**places)
        return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def mse(a, b) -> MSE:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return MSE(int(((a - b) ** 2).sum()), a.size)
