"""NEQR images, cyclic position shifts and the 5x5 neighbourhood bundle.

An NEQR image is a uniform superposition of basis states ``|C_YX>|Y>|X>``.
Because every circuit here permutes basis states, the image is simulated as
its list of terms: one computation thread per position, holding the gray
register and the two position registers. A cyclic shift runs the
increment/decrement circuit on every thread's position register and then
reads the image back by position label.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from . import arith
from .revcore import Builder, GateProgram, concat, invert_program, run_batch

Axis = Literal["Y", "X"]

# Steps 2-25 of the shift-preparation table, as CT moves of the working image.
# "up" is CT(Y-) and brings C[Y+1, X] to position (Y, X); "left" is CT(X-).
MOVES: dict[str, tuple[Axis, int]] = {
    "up": ("Y", -1),
    "down": ("Y", +1),
    "left": ("X", -1),
    "right": ("X", +1),
}
SCHEDULE: tuple[str, ...] = (
    "up", "left", "down", "down", "right", "right", "up", "up",
    "up", "left", "left", "left", "down", "down", "down", "down",
    "right", "right", "right", "right", "up", "up", "up", "up",
)
# Step 26: back to the original position.
RETURN_MOVES: tuple[str, ...] = ("left", "left", "down", "down")

# Offset (a, b) held by the working image after each of steps 2-25, i.e. it
# shows C[Y+a, X+b] at position (Y, X).
SCHEDULE_TRACE: tuple[tuple[int, int], ...] = (
    (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1),
    (2, -1), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (-1, 2), (-2, 2),
    (-2, 1), (-2, 0), (-2, -1), (-2, -2), (-1, -2), (0, -2), (1, -2), (2, -2),
)

OFFSETS: tuple[tuple[int, int], ...] = tuple((a, b) for a in range(-2, 3) for b in range(-2, 3))


def move_offset(move: str) -> tuple[int, int]:
    axis, delta = MOVES[move]
    return (-delta, 0) if axis == "Y" else (0, -delta)


def trace(moves=SCHEDULE) -> list[tuple[int, int]]:
    a = b = 0
    out = []
    for m in moves:
        da, db = move_offset(m)
        a, b = a + da, b + db
        out.append((a, b))
    return out


@dataclass(frozen=True, eq=False)
class NeqrImage:
    n: int
    q: int
    gray: np.ndarray

    def __post_init__(self):
        side = 1 << self.n
        gray = np.array(self.gray, dtype=np.uint64)
        if gray.shape != (side, side):
            raise ValueError(f"expected a {side}x{side} gray grid, got shape {gray.shape}")
        if self.q < 1 or self.q > 63:
            raise ValueError("gray depth must be between 1 and 63 bits")
        if gray.size and int(gray.max()) >= 1 << self.q:
            raise ValueError(f"gray value exceeds {self.q} bits")
        gray.flags.writeable = False
        object.__setattr__(self, "gray", gray)

    @property
    def side(self) -> int:
        return 1 << self.n

    def __eq__(self, other):
        if not isinstance(other, NeqrImage):
            return NotImplemented
        return self.n == other.n and self.q == other.q and np.array_equal(self.gray, other.gray)

    def terms(self):
        """Basis terms ``(C_YX, Y, X)`` in position order."""
        for y in range(self.side):
            for x in range(self.side):
                yield int(self.gray[y, x]), y, x


def _side_exponent(side: int) -> int:
    if side < 1 or side & (side - 1):
        raise ValueError(f"side {side} is not a power of two")
    return side.bit_length() - 1


def encode(pixels, q: int = 8) -> NeqrImage:
    grid = np.asarray(pixels)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise ValueError(f"image must be square, got shape {grid.shape}")
    n = _side_exponent(grid.shape[0])
    if grid.size and (grid.min() < 0 or int(grid.max()) >= 1 << q):
        raise ValueError(f"pixel values must lie in [0, {(1 << q) - 1}]")
    return NeqrImage(n, q, grid.astype(np.uint64))


def decode(img: NeqrImage) -> np.ndarray:
    return np.array(img.gray, dtype=np.int64)


@lru_cache(maxsize=None)
def ct_program(n: int, delta: int) -> GateProgram:
    """``P <- (P + delta) mod 2^n`` on an ``n``-bit register ``P``, ``delta`` = +1 or -1."""
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    if n < 1:
        raise ValueError("position register needs at least one bit")
    b = Builder(f"CT({delta:+d})")
    P = b.register("P", n)
    for i in range(n - 1, -1, -1):
        b.mcx(P[:i], P[i])
    inc = b.build()
    return inc if delta == 1 else invert_program(inc)


def cycle_shift(img: NeqrImage, axis: Axis, delta: int) -> NeqrImage:
    """Apply CT(delta) to the ``axis`` position register of every term.

    Afterwards the gray value at ``(Y, X)`` is the input value at
    ``(Y - delta, X)`` for ``axis == "Y"`` (resp. ``X - delta``).
    """
    if axis not in ("Y", "X"):
        raise ValueError("axis must be 'Y' or 'X'")
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    if img.n == 0:
        return img
    ys, xs = np.indices((img.side, img.side)).reshape(2, -1).astype(np.uint64)
    pos = ys if axis == "Y" else xs
    moved = run_batch(ct_program(img.n, delta), {"P": pos})["P"]
    if axis == "Y":
        ys = moved
    else:
        xs = moved
    out = np.empty_like(img.gray)
    out[ys.astype(np.intp), xs.astype(np.intp)] = img.gray.reshape(-1)
    return NeqrImage(img.n, img.q, out)


def plane_name(a: int, b: int, prefix: str = "c") -> str:
    def s(v):
        return f"m{-v}" if v < 0 else f"p{v}"

    return f"{prefix}_{s(a)}_{s(b)}"


@dataclass(frozen=True, eq=False)
class NeighborhoodBundle:
    """25 aligned gray planes; ``planes[a + 2, b + 2][Y, X] == C[(Y+a) % N, (X+b) % N]``."""

    n: int
    q: int
    planes: np.ndarray

    def __post_init__(self):
        planes = np.array(self.planes, dtype=np.uint64)
        side = 1 << self.n
        if planes.shape != (5, 5, side, side):
            raise ValueError(f"bundle planes must have shape (5, 5, {side}, {side})")
        planes.flags.writeable = False
        object.__setattr__(self, "planes", planes)

    def entry(self, a: int, b: int) -> np.ndarray:
        return self.planes[a + 2, b + 2]

    def register_inputs(self, prefix: str = "c") -> dict[str, np.ndarray]:
        """All 25 planes flattened, keyed by :func:`plane_name`."""
        return {plane_name(a, b, prefix): self.entry(a, b).reshape(-1) for a, b in OFFSETS}


def neighborhood_bundle(img: NeqrImage) -> NeighborhoodBundle:
    """Run the shift/copy schedule and collect the 24 shifted copies plus the original.

    Every CT acts on the working image only; after each CT the copy unit
    fans the working gray register out into a fresh ancilla image aligned by
    position. For ``n < 2`` neighbours alias under wrap-around.
    """
    side = img.side
    planes = np.zeros((5, 5, side, side), dtype=np.uint64)
    planes[2, 2] = img.gray
    copy = arith.copy(img.q)
    working = img
    zeros = np.zeros(side * side, dtype=np.uint64)
    for move, (a, b) in zip(SCHEDULE, SCHEDULE_TRACE):
        working = cycle_shift(working, *MOVES[move])
        out = run_batch(copy, {"X": working.gray.reshape(-1), "anc": zeros})
        planes[a + 2, b + 2] = out["anc"].reshape(side, side)
    for move in RETURN_MOVES:
        working = cycle_shift(working, *MOVES[move])
    if working != img:
        raise AssertionError("shift schedule did not return the working image to the origin")
    return NeighborhoodBundle(img.n, img.q, planes)


@lru_cache(maxsize=None)
def shift_schedule_program(n: int, q: int, prefix: str = "c") -> GateProgram:
    """Per-thread gate sequence of the schedule, for costing.

    Registers: position ``Y``/``X`` (``n`` bits), the working gray register
    (named as the centre plane) and one ``q``-bit ancilla image per offset.
    """
    parts = []
    copy = arith.copy(q)

    def ct(move):
        axis, delta = MOVES[move]
        b = Builder()
        b.extend(ct_program(n, delta), {"P": b.register(axis, n)})
        return b.build()

    for move, (a, bb) in zip(SCHEDULE, SCHEDULE_TRACE):
        parts.append(ct(move))
        b = Builder()
        b.extend(copy, {"X": b.register(plane_name(0, 0, prefix), q), "anc": b.register(plane_name(a, bb, prefix), q)})
        parts.append(b.build())
    for move in RETURN_MOVES:
        parts.append(ct(move))
    return concat(parts, name=f"shift_schedule(n={n}, q={q})")
