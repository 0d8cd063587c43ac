"""Eight-direction 5x5 Sobel gradients as reversible circuits.

For each direction the positive-weight and negative-weight neighbours are
summed separately into ``q + 4``-bit registers (weights 2 and 4 by one or two
doublings), and the magnitude is their absolute difference. The per-pixel
maximum is then selected by a comparator cascade with controlled swaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith
from .neqr import NeighborhoodBundle, plane_name
from .revcore import Bit, Builder, GateProgram, Register, run_batch

ANGLES = (0.0, 22.5, 45.0, 67.5, 90.0, 112.5, 135.0, 157.5)
DIRECTION_BITS = 3
GUARD_BITS = 4  # 13 * (2^q - 1) < 2^(q + 4)

# (row offset a, column offset b) -> weight, for the neighbour C[Y+a, X+b].
MASKS: dict[int, tuple[tuple[tuple[int, int], int], ...]] = {
    0: (((-2, 1), 1), ((-1, 1), 2), ((0, 1), 4), ((1, 1), 2), ((2, 1), 1),
        ((-2, -1), -1), ((-1, -1), -2), ((0, -1), -4), ((1, -1), -2), ((2, -1), -1)),
    1: (((2, 0), 1), ((1, 1), 2), ((-1, 1), 2), ((0, 1), 4), ((1, 0), 4),
        ((-2, 0), -1), ((1, -1), -2), ((-1, -1), -2), ((0, -1), -4), ((-1, 0), -4)),
    2: (((2, -1), 1), ((-1, 2), 1), ((1, 1), 2), ((1, 0), 4), ((0, 1), 4),
        ((1, -2), -1), ((-2, 1), -1), ((-1, -1), -2), ((-1, 0), -4), ((0, -1), -4)),
    3: (((0, 2), 1), ((1, 1), 2), ((1, -1), 2), ((1, 0), 4), ((0, 1), 4),
        ((0, -2), -1), ((-1, 1), -2), ((-1, -1), -2), ((-1, 0), -4), ((0, -1), -4)),
    4: (((1, -2), 1), ((1, 2), 1), ((1, -1), 2), ((1, 1), 2), ((1, 0), 4),
        ((-1, -2), -1), ((-1, 2), -1), ((-1, -1), -2), ((-1, 1), -2), ((-1, 0), -4)),
    5: (((0, -2), 1), ((1, -1), 2), ((1, 1), 2), ((1, 0), 4), ((0, -1), 4),
        ((0, 2), -1), ((-1, 1), -2), ((-1, -1), -2), ((-1, 0), -4), ((0, 1), -4)),
    6: (((-1, -2), 1), ((1, 1), 1), ((1, -1), 2), ((1, 0), 4), ((0, -1), 4),
        ((-2, -1), -1), ((1, 2), -1), ((-1, 1), -2), ((-1, 0), -4), ((0, 1), -4)),
    7: (((2, 0), 1), ((1, -1), 2), ((-1, -1), 2), ((1, 0), 4), ((0, -1), 4),
        ((-2, 0), -1), ((1, 1), -2), ((-1, 1), -2), ((-1, 0), -4), ((0, 1), -4)),
}

DIRECTION_SETS = {2: (0, 4), 4: (0, 2, 4, 6), 8: tuple(range(8))}


def direction_set(directions: int) -> tuple[int, ...]:
    try:
        return DIRECTION_SETS[directions]
    except KeyError:
        raise ValueError(f"directions must be one of {sorted(DIRECTION_SETS)}") from None


def magnitude_width(q: int) -> int:
    return q + GUARD_BITS


@dataclass(frozen=True, eq=False)
class GradientField:
    """Per-pixel maximum magnitude (``q + 4`` bits), winning direction and nonzero flag."""

    q: int
    magnitude: np.ndarray
    direction: np.ndarray
    flag: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, GradientField):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f)) for f in ("magnitude", "direction", "flag")
        ) and self.q == other.q


def _plane(b: Builder, q: int, offset: tuple[int, int]) -> Register:
    return b.register(plane_name(*offset), q)


def emit_direction(b: Builder, q: int, k: int, out: Register) -> None:
    """``out <- |sum w * C[Y+a, X+b]|`` over the mask of direction ``k``; scratch is restored."""
    width = magnitude_width(q)
    pos, neg = b.ancilla(width, "P"), b.ancilla(width, "M")
    tmp, cin = b.ancilla(width, "T"), b.ancilla(1, "cin")
    # fixed accumulation order: ascending offset within each sign
    for acc, sign in ((pos, 1), (neg, -1)):
        for offset, w in sorted(t for t in MASKS[k] if (t[1] > 0) == (sign > 0)):
            src = _plane(b, q, offset)
            shifts = abs(w).bit_length() - 1
            m = b.mark()
            arith.emit_copy(b, src, tmp[:q])
            for s in range(shifts):
                arith.emit_double(b, tmp[: q + s + 1])
            prep = b.mark()
            arith.emit_add(b, tmp, acc, cin[0])
            b.uncompute(m, prep)
    arith.emit_abs_diff(b, pos, neg, out)


@lru_cache(maxsize=None)
def direction_program(q: int, k: int) -> GateProgram:
    """Inputs: neighbour planes ``c_<a>_<b>`` (q bits). Output: ``G`` = |G^k| (q + 4 bits)."""
    b = Builder(f"gradient[{ANGLES[k]}]")
    out = b.register("G", magnitude_width(q))
    emit_direction(b, q, k, out)
    return b.build()


def _cswap(b: Builder, ctrl: Bit, x: Bit, y: Bit) -> None:
    b.cx(y, x)
    b.ccx(ctrl, x, y)
    b.cx(y, x)


@lru_cache(maxsize=None)
def gradient_program(q: int, directions: int = 8) -> GateProgram:
    """Per-pixel maximum gradient.

    Inputs are the neighbour planes. Outputs: ``G`` (maximum magnitude,
    ``q + 4`` bits), ``dir`` (3 bits, smallest index attaining the maximum)
    and ``N`` (1 iff ``G > 0``).
    """
    ks = direction_set(directions)
    width = magnitude_width(q)
    b = Builder(f"max_gradient(q={q}, directions={directions})")
    G = b.register("G", width)
    D = b.register("dir", DIRECTION_BITS)
    N = b.register("N", 1)
    mags = {}
    for k in ks:
        mags[k] = b.register(f"g{k}", width)
        emit_direction(b, q, k, mags[k])

    # running maximum in G; a later direction replaces it only when strictly larger
    arith.emit_copy(b, mags[ks[0]], G)
    flags = {}
    for k in ks[1:]:
        c1, c0, anc = b.ancilla(1, "gt"), b.ancilla(1, "lt"), b.ancilla(1, "canc")
        arith.emit_compare(b, mags[k], G, c1[0], c0[0], anc[0])
        for x, y in zip(G, mags[k]):
            _cswap(b, c1[0], x, y)
        flags[k] = c1[0]

    # dir = last k whose flag is set (else ks[0] == 0)
    later: Bit | None = None
    for k in reversed(ks[1:]):
        f = flags[k]
        for j in range(DIRECTION_BITS):
            if k >> j & 1:
                if later is None:
                    b.cx(f, D[j])
                else:
                    b.ccx(f, later, D[j], (True, False))
        if k != ks[1]:
            any_ = b.ancilla(1, "seen")[0]
            b.cx(f, any_)
            if later is not None:
                b.cx(later, any_)
                b.ccx(f, later, any_)
            later = any_

    b.x(N[0])
    b.mcx(list(G), N[0], [False] * width)
    return b.build()


def direction_gradient(bundle: NeighborhoodBundle, k: int) -> np.ndarray:
    """|G^k| at every pixel, by executing the direction circuit on each thread."""
    p = direction_program(bundle.q, k)
    inputs = {name: v for name, v in bundle.register_inputs().items() if name in p.widths}
    out = run_batch(p, inputs, lanes=bundle.planes[0, 0].size)
    side = 1 << bundle.n
    return out["G"].astype(np.int64).reshape(side, side)


def max_gradient(bundle: NeighborhoodBundle, directions: int = 8) -> GradientField:
    p = gradient_program(bundle.q, directions)
    inputs = {name: v for name, v in bundle.register_inputs().items() if name in p.widths}
    out = run_batch(p, inputs, lanes=bundle.planes[0, 0].size)
    side = 1 << bundle.n
    return GradientField(
        bundle.q,
        out["G"].astype(np.int64).reshape(side, side),
        out["dir"].astype(np.int64).reshape(side, side),
        out["N"].astype(np.int64).reshape(side, side),
    )
