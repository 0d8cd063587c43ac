"""Reversible arithmetic units: comparator, adder, complement, |A-B|, doubling and copy.

Each unit comes in two forms. The ``emit_*`` functions append gates to a
:class:`~qsed.revcore.Builder` on caller-supplied bit lists, which is how the
larger circuits compose them. The public builders (:func:`comparator`,
:func:`adder`, ...) wrap one unit into a standalone program over fixed
register names, described by :func:`unit_spec`.

Registers are little-endian throughout: bit 0 is the least significant.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

from .revcore import Bit, Builder, GateProgram

Bits = Sequence[Bit]


@dataclass(frozen=True)
class UnitSpec:
    inputs: dict[str, int]
    outputs: tuple[str, ...]
    preserved: tuple[str, ...]
    ancillae: tuple[str, ...]  # zero on entry and on exit


def _check_width(width: int) -> None:
    if width < 1:
        raise ValueError("unit width must be at least 1")


# ---------------------------------------------------------------------------
# emitters


def _maj(b: Builder, c: Bit, y: Bit, a: Bit) -> None:
    # a <- maj(a, y, c); y <- y^a; c <- c^a
    b.cx(a, y)
    b.cx(a, c)
    b.ccx(c, y, a)


def _maj_inv(b: Builder, c: Bit, y: Bit, a: Bit) -> None:
    b.ccx(c, y, a)
    b.cx(a, c)
    b.cx(a, y)


def _uma(b: Builder, c: Bit, y: Bit, a: Bit) -> None:
    # undoes MAJ on a and c, leaves the sum bit in y
    b.ccx(c, y, a)
    b.cx(a, c)
    b.cx(c, y)


def emit_add(b: Builder, a: Bits, y: Bits, cin: Bit, cout: Bit | None = None) -> None:
    """Ripple-carry ``y <- y + a + cin (mod 2^len(y))``; ``cout ^= carry``.

    ``a`` and ``cin`` are restored. ``len(a) == len(y)``.
    """
    n = len(a)
    if len(y) != n:
        raise ValueError("adder operands must have equal width")
    carries = [cin, *a[:-1]]
    for i in range(n):
        _maj(b, carries[i], y[i], a[i])
    if cout is not None:
        b.cx(a[n - 1], cout)
    for i in reversed(range(n)):
        _uma(b, carries[i], y[i], a[i])


def emit_carry(b: Builder, a: Bits, y: Bits, anc: Bit, out: Bit) -> None:
    """``out ^= [a + y >= 2^n]`` with every other bit restored (``anc`` starts at 0)."""
    n = len(a)
    carries = [anc, *a[:-1]]
    for i in range(n):
        _maj(b, carries[i], y[i], a[i])
    b.cx(a[n - 1], out)
    for i in reversed(range(n)):
        _maj_inv(b, carries[i], y[i], a[i])


def emit_compare(b: Builder, a: Bits, y: Bits, c1: Bit, c0: Bit, anc: Bit) -> None:
    """``c1 ^= [a > y]``, ``c0 ^= [a < y]``.

    ``a > y`` exactly when ``a + (2^n - 1 - y)`` carries out, so each flag is
    the carry of one operand plus the bitwise complement of the other.
    """
    if len(a) != len(y):
        raise ValueError("comparator operands must have equal width")
    for bit in y:
        b.x(bit)
    emit_carry(b, a, y, anc, c1)
    for bit in y:
        b.x(bit)
    for bit in a:
        b.x(bit)
    emit_carry(b, y, a, anc, c0)
    for bit in a:
        b.x(bit)


def emit_complement(b: Builder, sign: Bit, value: Bits) -> None:
    for bit in value:
        b.cx(sign, bit)


def emit_double(b: Builder, x: Bits) -> None:
    """Left shift by one along a SWAP chain; the top bit of ``x`` must be 0."""
    for i in range(len(x) - 1, 0, -1):
        b.swap(x[i], x[i - 1])


def emit_halve(b: Builder, x: Bits) -> None:
    for i in range(1, len(x)):
        b.swap(x[i], x[i - 1])


def emit_copy(b: Builder, src: Bits, dst: Bits) -> None:
    if len(src) != len(dst):
        raise ValueError("copy operands must have equal width")
    for s, d in zip(src, dst):
        b.cx(s, d)


def emit_abs_diff(b: Builder, a: Bits, y: Bits, d: Bits) -> None:
    """``d <- |a - y|`` for ``d`` zero on entry; ``a``, ``y`` and all ancillae restored.

    The comparator flag ``a > y`` feeds the adder's carry-in, so
    ``d = a + ~y + [a > y]`` is ``a - y`` when positive and the two's
    complement of ``a - y - 1`` otherwise. The carry out is the inverted sign;
    complementing the value bits under the sign gives ``y - a`` in the second
    case.
    """
    c1, c0, canc, cin, sign = (b.ancilla(1, "av")[0] for _ in range(5))
    m = b.mark()
    emit_compare(b, a, y, c1, c0, canc)
    cmp_end = b.mark()
    emit_copy(b, a, d)
    for bit in y:
        b.x(bit)
    b.cx(c1, cin)
    emit_add(b, y, d, cin, sign)
    b.x(sign)
    emit_complement(b, sign, d)
    # sign == not c1 here
    b.cx(c1, sign)
    b.x(sign)
    b.cx(c1, cin)
    for bit in y:
        b.x(bit)
    b.uncompute(m, cmp_end)


# ---------------------------------------------------------------------------
# standalone units


@lru_cache(maxsize=None)
def comparator(width: int) -> GateProgram:
    """Registers ``A``, ``B`` (width), flags ``C1`` (A>B), ``C0`` (A<B), ancilla ``anc``."""
    _check_width(width)
    b = Builder(f"comparator{width}")
    A, B = b.register("A", width), b.register("B", width)
    C1, C0, anc = b.register("C1", 1), b.register("C0", 1), b.register("anc", 1)
    emit_compare(b, A, B, C1[0], C0[0], anc[0])
    return b.build()


@lru_cache(maxsize=None)
def adder(width: int, keep_carry: bool = True) -> GateProgram:
    """``B <- A + B``. With ``keep_carry`` B has ``width + 1`` bits and the top one takes the carry."""
    _check_width(width)
    b = Builder(f"adder{width}")
    A = b.register("A", width)
    B = b.register("B", width + 1 if keep_carry else width)
    cin = b.register("anc", 1)
    emit_add(b, A, B[:width], cin[0], B[width] if keep_carry else None)
    return b.build()


@lru_cache(maxsize=None)
def complement(width: int) -> GateProgram:
    """Register ``X`` of ``width + 1`` bits; the top bit is the sign and controls inversion of the rest."""
    _check_width(width)
    b = Builder(f"complement{width}")
    X = b.register("X", width + 1)
    emit_complement(b, X[width], X[:width])
    return b.build()


@lru_cache(maxsize=None)
def abs_diff(width: int) -> GateProgram:
    """``D <- |A - B|`` over ``A``, ``B``, ``D`` of ``width`` bits."""
    _check_width(width)
    b = Builder(f"abs_diff{width}")
    A, B, D = b.register("A", width), b.register("B", width), b.register("D", width)
    emit_abs_diff(b, A, B, D)
    return b.build()


@lru_cache(maxsize=None)
def double(width: int) -> GateProgram:
    """Register ``X`` of ``width + 1`` bits holding a ``width``-bit value; ``X <- 2X``."""
    _check_width(width)
    b = Builder(f"double{width}")
    X = b.register("X", width + 1)
    emit_double(b, X)
    return b.build()


@lru_cache(maxsize=None)
def copy(width: int) -> GateProgram:
    """``anc ^= X``: a fan-out of ``width`` CNOTs."""
    _check_width(width)
    b = Builder(f"copy{width}")
    X, anc = b.register("X", width), b.register("anc", width)
    emit_copy(b, X, anc)
    return b.build()


def unit_spec(unit: str, width: int) -> UnitSpec:
    if unit == "comparator":
        return UnitSpec({"A": width, "B": width}, ("C1", "C0"), ("A", "B"), ("anc",))
    if unit == "adder":
        return UnitSpec({"A": width, "B": width}, ("B",), ("A",), ("anc",))
    if unit == "complement":
        return UnitSpec({"X": width + 1}, ("X",), (), ())
    if unit == "abs_diff":
        ancillae = tuple(r for r, _ in abs_diff(width).registers if r not in ("A", "B", "D"))
        return UnitSpec({"A": width, "B": width}, ("D",), ("A", "B"), ancillae)
    if unit == "double":
        return UnitSpec({"X": width}, ("X",), (), ())
    if unit == "copy":
        return UnitSpec({"X": width}, ("anc",), ("X",), ())
    raise ValueError(f"unknown unit {unit!r}")
