"""Suppression, double thresholding, edge tracking and the end-to-end detector.

Quantum mode runs every stage as a gate program on one thread per pixel.
Neighbour access (for suppression and tracking) goes through the same
shift/copy schedule used for the input image, applied to the intermediate
gradient and label images.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from . import arith, oracle
from .gradient import (
    DIRECTION_BITS,
    GradientField,
    direction_set,
    gradient_program,
    magnitude_width,
    max_gradient,
)
from .neqr import NeqrImage, neighborhood_bundle, plane_name, shift_schedule_program
from .revcore import Builder, GateProgram, cost, run_batch

Mode = Literal["quantum", "classical"]

STRONG, WEAK, NON_EDGE = 2, 1, 0

# Neighbour offsets (row, column) compared during suppression, per direction.
NMS_OFFSETS: dict[int, tuple[int, int]] = {
    0: (0, 2),
    1: (1, 2),
    2: (1, 1),
    3: (2, 1),
    4: (2, 0),
    5: (2, -1),
    6: (1, -1),
    7: (1, -2),
}

NEIGHBOURS_24 = tuple((a, b) for a in range(-2, 3) for b in range(-2, 3) if (a, b) != (0, 0))


@dataclass(frozen=True)
class Thresholds:
    high: int
    low: int

    @classmethod
    def from_high(cls, t_high: int, width: int | None = None) -> Thresholds:
        t_high = int(t_high)
        if t_high < 1:
            raise ValueError("high threshold must be at least 1")
        if width is not None and t_high >= 1 << width:
            raise ValueError(f"high threshold {t_high} does not fit in {width} bits")
        return cls(t_high, t_high // 3)


@dataclass(frozen=True, eq=False)
class SuppressedField:
    flag: np.ndarray
    magnitude: np.ndarray


@dataclass(frozen=True, eq=False)
class EdgeLabelMap:
    """2 = strong (E = 10), 1 = weak (E = 01), 0 = non-edge (E = 00)."""

    labels: np.ndarray


@dataclass(frozen=True, eq=False)
class EdgeMap:
    edges: np.ndarray

    def to_pgm_values(self) -> np.ndarray:
        return np.where(self.edges != 0, 255, 0).astype(np.uint8)


# ---------------------------------------------------------------------------
# stage circuits


@lru_cache(maxsize=None)
def nms_program(q: int, directions: int = 8) -> GateProgram:
    """Inputs: ``g_p0_p0`` (own magnitude), ``dir`` and the neighbour magnitudes
    ``g_<a>_<b>`` at the two offsets of each direction. Outputs: ``Mflag``, ``Gs``."""
    width = magnitude_width(q)
    b = Builder(f"nms(q={q}, directions={directions})")
    G = b.register(plane_name(0, 0, "g"), width)
    D = b.register("dir", DIRECTION_BITS)
    M = b.register("Mflag", 1)
    Gs = b.register("Gs", width)
    for k in direction_set(directions):
        dy, dx = NMS_OFFSETS[k]
        smaller = []
        for a, c in ((dy, dx), (-dy, -dx)):
            nb = b.register(plane_name(a, c, "g"), width)
            c1, c0, anc = b.ancilla(1, "gt"), b.ancilla(1, "lt"), b.ancilla(1, "canc")
            arith.emit_compare(b, G, nb, c1[0], c0[0], anc[0])
            smaller.append(c0[0])
        controls = [*D, *smaller]
        polarity = [bool(k >> j & 1) for j in range(DIRECTION_BITS)] + [False, False]
        b.mcx(controls, M[0], polarity)
    for g, s in zip(G, Gs):
        b.ccx(M[0], g, s)
    return b.build()


@lru_cache(maxsize=None)
def threshold_program(q: int) -> GateProgram:
    """Inputs: ``Gs``, ``TH``, ``TL``. Output: ``E`` with ``E[1]`` strong and ``E[0]`` weak."""
    width = magnitude_width(q)
    b = Builder(f"double_threshold(q={q})")
    Gs, TH, TL = b.register("Gs", width), b.register("TH", width), b.register("TL", width)
    E = b.register("E", 2)
    above, _, anc = b.ancilla(1, "gt"), b.ancilla(1, "lt"), b.ancilla(1, "canc")
    arith.emit_compare(b, Gs, TH, above[0], _[0], anc[0])
    _, below, anc = b.ancilla(1, "gt"), b.ancilla(1, "lt"), b.ancilla(1, "canc")
    arith.emit_compare(b, Gs, TL, _[0], below[0], anc[0])
    b.cx(above[0], E[1])
    b.ccx(above[0], below[0], E[0], (False, False))
    return b.build()


@lru_cache(maxsize=None)
def track_program() -> GateProgram:
    """Inputs: label planes ``e_<a>_<b>`` (2 bits, centre ``e_p0_p0``). Output: ``B``.

    Each neighbour label is compared with the constant 01; a label greater
    than 01 is a strong point.
    """
    b = Builder("edge_track")
    E = b.register(plane_name(0, 0, "e"), 2)
    B = b.register("B", 1)
    K = b.register("K", 2)
    b.x(K[0])
    strong = []
    for a, c in NEIGHBOURS_24:
        nb = b.register(plane_name(a, c, "e"), 2)
        c1, c0, anc = b.ancilla(1, "gt"), b.ancilla(1, "lt"), b.ancilla(1, "canc")
        arith.emit_compare(b, nb, K, c1[0], c0[0], anc[0])
        strong.append(c1[0])
    b.x(K[0])
    none = b.ancilla(1, "none")
    b.mcx(strong, none[0], [False] * len(strong))
    b.cx(E[1], B[0])
    b.ccx(E[0], none[0], B[0], (True, False))
    return b.build()


def _run(p: GateProgram, inputs: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    lanes = len(next(iter(inputs.values())))
    return run_batch(p, {k: v for k, v in inputs.items() if k in p.widths}, lanes=lanes)


def _flat(a) -> np.ndarray:
    return np.asarray(a, dtype=np.uint64).reshape(-1)


# ---------------------------------------------------------------------------
# stages


def non_max_suppress(g: GradientField, directions: int = 8) -> SuppressedField:
    side = g.magnitude.shape[0]
    width = magnitude_width(g.q)
    n = side.bit_length() - 1
    bundle = neighborhood_bundle(NeqrImage(n, width, g.magnitude))
    inputs = bundle.register_inputs("g")
    inputs["dir"] = _flat(g.direction)
    out = _run(nms_program(g.q, directions), inputs)
    return SuppressedField(
        out["Mflag"].astype(np.int64).reshape(side, side),
        out["Gs"].astype(np.int64).reshape(side, side),
    )


def double_threshold(s: SuppressedField, t: Thresholds, q: int = 8) -> EdgeLabelMap:
    if t.high < 1:
        raise ValueError("high threshold must be at least 1")
    width = magnitude_width(q)
    if t.high >= 1 << width:
        raise ValueError(f"high threshold {t.high} does not fit in {width} bits")
    shape = s.magnitude.shape
    gs = _flat(s.magnitude)
    out = _run(
        threshold_program(q),
        {"Gs": gs, "TH": np.full_like(gs, t.high), "TL": np.full_like(gs, t.low)},
    )
    return EdgeLabelMap(out["E"].astype(np.int64).reshape(shape))


def edge_track(e: EdgeLabelMap) -> EdgeMap:
    side = e.labels.shape[0]
    n = side.bit_length() - 1
    bundle = neighborhood_bundle(NeqrImage(n, 2, e.labels))
    out = _run(track_program(), bundle.register_inputs("e"))
    return EdgeMap(out["B"].astype(np.int64).reshape(side, side))


@dataclass(frozen=True, eq=False)
class StageResults:
    gradient: GradientField
    suppressed: SuppressedField
    labels: EdgeLabelMap
    edges: EdgeMap


def quantum_stages(img: NeqrImage, t_high: int, directions: int = 8) -> StageResults:
    t = Thresholds.from_high(t_high, magnitude_width(img.q))
    g = max_gradient(neighborhood_bundle(img), directions)
    s = non_max_suppress(g, directions)
    e = double_threshold(s, t, img.q)
    return StageResults(g, s, e, edge_track(e))


def classical_stages(img: NeqrImage, t_high: int, directions: int = 8) -> StageResults:
    t = Thresholds.from_high(t_high, magnitude_width(img.q))
    r = oracle.classical_stages(img.gray.astype(np.int64), t.high, directions)
    flag_n = (r.magnitude > 0).astype(np.int64)
    return StageResults(
        GradientField(img.q, r.magnitude, r.direction.astype(np.int64), flag_n),
        SuppressedField(r.flag_m, r.suppressed),
        EdgeLabelMap(r.labels),
        EdgeMap(r.edges),
    )


def detect_edges(img: NeqrImage, t_high: int, mode: Mode = "classical", directions: int = 8) -> EdgeMap:
    direction_set(directions)
    if mode == "quantum":
        return quantum_stages(img, t_high, directions).edges
    if mode == "classical":
        return classical_stages(img, t_high, directions).edges
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# gate accounting

STAGES = ("shift", "gradient", "nms_shift", "nms", "threshold", "track_shift", "track")


def stage_programs(n: int, q: int, directions: int = 8) -> dict[str, GateProgram]:
    """Per-thread program of every stage the quantum mode executes."""
    width = magnitude_width(q)
    return {
        "shift": shift_schedule_program(n, q, "c"),
        "gradient": gradient_program(q, directions),
        "nms_shift": shift_schedule_program(n, width, "g"),
        "nms": nms_program(q, directions),
        "threshold": threshold_program(q),
        "track_shift": shift_schedule_program(n, 2, "e"),
        "track": track_program(),
    }


# registers carried between stages; everything else is private to its stage
_SHARED = {
    "shift": {},
    "gradient": {"G": plane_name(0, 0, "g")},
    "nms_shift": {},
    "nms": {},
    "threshold": {"E": plane_name(0, 0, "e")},
    "track_shift": {},
    "track": {},
}
_GLOBAL = {"Y", "X", "dir", "Gs", "TH", "TL", "B"}


@lru_cache(maxsize=None)
def per_pixel_program(n: int, q: int, directions: int = 8) -> GateProgram:
    """All stages after image preparation, wired into one per-pixel program with one section per stage."""
    if n < 1:
        raise ValueError("n must be at least 1")
    b = Builder(f"qsed(n={n}, q={q}, directions={directions})")
    for stage, p in stage_programs(n, q, directions).items():
        mapping = {}
        for reg, w in p.registers:
            if reg in _SHARED[stage]:
                name = _SHARED[stage][reg]
            elif reg in _GLOBAL or reg.startswith(("c_", "g_", "e_")):
                name = reg
            else:
                name = f"{stage}.{reg}"
            mapping[reg] = b.register(name, w)[:]
        with b.section(stage):
            b.extend(p, mapping)
    return b.build()


def gate_report(n: int, q: int, directions: int = 8) -> dict:
    """Cost of one pixel thread per stage, plus the aggregate over all ``2^(2n)`` pixels."""
    report = cost(per_pixel_program(n, q, directions))
    pixels = 1 << (2 * n)
    return {
        "n": n,
        "q": q,
        "directions": directions,
        "per_pixel": report.to_dict(),
        "pixel_count": pixels,
        "aggregate_total": report.total * pixels,
    }
