"""Reversible gate IR, exact basis-state executors and the gate-cost model.

Every circuit in this package maps computational basis states to basis
states, so execution is classical reversible logic on named registers.
Two executors share the same semantics:

* :func:`run_program` works on a single :class:`RegisterFile` with Python ints.
* :func:`run_batch` runs one program over many independent register files at
  once, storing each bit as a packed ``uint64`` plane (one lane per thread).
"""

from __future__ import annotations

import contextlib
import json
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

Bit = tuple[str, int]


class GateKind(str, Enum):
    NOT = "NOT"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"
    MCX = "MCX"
    SWAP = "SWAP"


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    """One reversible gate.

    ``targets`` holds one bit, or two for SWAP. ``polarity[i]`` is True when
    control ``i`` fires on 1 and False when it fires on 0.
    """

    kind: GateKind
    targets: tuple[Bit, ...]
    controls: tuple[Bit, ...] = ()
    polarity: tuple[bool, ...] = ()

    def __post_init__(self):
        if not self.polarity and self.controls:
            object.__setattr__(self, "polarity", (True,) * len(self.controls))
        if len(self.polarity) != len(self.controls):
            raise ProgramError("polarity length must match controls")
        if self.kind is GateKind.SWAP:
            if len(self.targets) != 2 or self.controls:
                raise ProgramError("SWAP takes two targets and no controls")
            if self.targets[0] == self.targets[1]:
                raise ProgramError("SWAP targets must differ")
        else:
            if len(self.targets) != 1:
                raise ProgramError(f"{self.kind.value} takes one target")
            expected = {GateKind.NOT: 0, GateKind.CNOT: 1, GateKind.TOFFOLI: 2}
            n = len(self.controls)
            if self.kind in expected and n != expected[self.kind]:
                raise ProgramError(f"{self.kind.value} needs {expected[self.kind]} controls, got {n}")
            if self.kind is GateKind.MCX and n < 3:
                raise ProgramError("MCX needs at least 3 controls")
        if len(set(self.controls)) != len(self.controls):
            raise ProgramError("duplicate control bit")
        if set(self.targets) & set(self.controls):
            raise ProgramError("target bit appears among controls")

    def bits(self) -> tuple[Bit, ...]:
        return self.targets + self.controls

    def dump(self) -> str:
        ctrl = ",".join(f"{'' if p else '!'}{r}[{i}]" for (r, i), p in zip(self.controls, self.polarity))
        tgt = ",".join(f"{r}[{i}]" for r, i in self.targets)
        kind = self.kind.value if self.kind is not GateKind.MCX else f"MCX{len(self.controls)}"
        return f"{kind} {ctrl or '-'} {tgt}"


def controlled_x(target: Bit, controls: Sequence[Bit] = (), polarity: Sequence[bool] | None = None) -> Gate:
    """X on ``target`` controlled by ``controls``; the gate kind follows the control count."""
    controls = tuple(controls)
    kind = {0: GateKind.NOT, 1: GateKind.CNOT, 2: GateKind.TOFFOLI}.get(len(controls), GateKind.MCX)
    pol = tuple(polarity) if polarity is not None else (True,) * len(controls)
    return Gate(kind, (target,), controls, pol)


@dataclass(frozen=True)
class Section:
    name: str
    start: int
    stop: int


@dataclass(frozen=True)
class GateProgram:
    registers: tuple[tuple[str, int], ...]
    gates: tuple[Gate, ...] = ()
    sections: tuple[Section, ...] = ()
    name: str = ""

    def __post_init__(self):
        widths = {}
        for reg, width in self.registers:
            if reg in widths:
                raise ProgramError(f"duplicate register {reg!r}")
            if width < 1:
                raise ProgramError(f"register {reg!r} must have positive width")
            widths[reg] = width
        for g in self.gates:
            for reg, i in g.bits():
                if reg not in widths or not 0 <= i < widths[reg]:
                    raise ProgramError(f"gate address {reg}[{i}] outside declared registers")

    @property
    def widths(self) -> dict[str, int]:
        return dict(self.registers)

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: GateProgram) -> GateProgram:
        return concat([self, other])

    def dump(self) -> str:
        """One gate per line: ``KIND ctrl-list tgt``; ``!`` marks a negative control."""
        return "\n".join(g.dump() for g in self.gates)


def concat(programs: Iterable[GateProgram], name: str = "") -> GateProgram:
    """Sequential composition; registers with the same name must agree on width."""
    regs: dict[str, int] = {}
    gates: list[Gate] = []
    sections: list[Section] = []
    for p in programs:
        for reg, width in p.registers:
            if regs.setdefault(reg, width) != width:
                raise ProgramError(f"register {reg!r} declared with widths {regs[reg]} and {width}")
        off = len(gates)
        sections.extend(Section(s.name, s.start + off, s.stop + off) for s in p.sections)
        gates.extend(p.gates)
    return GateProgram(tuple(regs.items()), tuple(gates), tuple(sections), name)


def invert_program(p: GateProgram) -> GateProgram:
    """Reverse gate order; every gate in the set is its own inverse."""
    n = len(p.gates)
    sections = tuple(Section(s.name, n - s.stop, n - s.start) for s in reversed(p.sections))
    name = f"{p.name}^-1" if p.name else ""
    return GateProgram(p.registers, tuple(reversed(p.gates)), sections, name)


class Register(Sequence):
    """Bit addresses of one register, little-endian (index 0 is the LSB)."""

    def __init__(self, name: str, width: int):
        self.name = name
        self.width = width

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [(self.name, k) for k in range(self.width)[i]]
        if i < 0:
            i += self.width
        if not 0 <= i < self.width:
            raise IndexError(i)
        return (self.name, i)

    def __len__(self):
        return self.width

    def __repr__(self):
        return f"Register({self.name!r}, {self.width})"


class Builder:
    """Incremental construction of a :class:`GateProgram`."""

    def __init__(self, name: str = ""):
        self.name = name
        self._registers: dict[str, int] = {}
        self._gates: list[Gate] = []
        self._sections: list[Section] = []
        self._anon = 0

    def register(self, name: str, width: int) -> Register:
        if name in self._registers:
            if self._registers[name] != width:
                raise ProgramError(f"register {name!r} redeclared with a different width")
        else:
            if width < 1:
                raise ProgramError(f"register {name!r} must have positive width")
            self._registers[name] = width
        return Register(name, width)

    def ancilla(self, width: int, prefix: str = "anc") -> Register:
        self._anon += 1
        name = f"{prefix}{self._anon}"
        while name in self._registers:
            self._anon += 1
            name = f"{prefix}{self._anon}"
        return self.register(name, width)

    def x(self, target: Bit) -> None:
        self._gates.append(Gate(GateKind.NOT, (target,)))

    def cx(self, control: Bit, target: Bit, polarity: bool = True) -> None:
        self._gates.append(Gate(GateKind.CNOT, (target,), (control,), (polarity,)))

    def ccx(self, c0: Bit, c1: Bit, target: Bit, polarity: tuple[bool, bool] = (True, True)) -> None:
        self._gates.append(Gate(GateKind.TOFFOLI, (target,), (c0, c1), polarity))

    def mcx(self, controls: Sequence[Bit], target: Bit, polarity: Sequence[bool] | None = None) -> None:
        self._gates.append(controlled_x(target, controls, polarity))

    def swap(self, a: Bit, b: Bit) -> None:
        self._gates.append(Gate(GateKind.SWAP, (a, b)))

    def extend(self, program: GateProgram, mapping: Mapping[str, Sequence[Bit]] | None = None) -> None:
        """Append ``program``, renaming its bits through ``mapping``.

        ``mapping`` sends each register name of ``program`` to the list of
        caller bits it occupies. Unmapped registers are declared as-is.
        """
        mapping = dict(mapping or {})
        for reg, width in program.registers:
            if reg in mapping:
                if len(mapping[reg]) != width:
                    raise ProgramError(f"mapping for {reg!r} has {len(mapping[reg])} bits, need {width}")
            else:
                self.register(reg, width)

        def tr(b: Bit) -> Bit:
            return mapping[b[0]][b[1]] if b[0] in mapping else b

        off = len(self._gates)
        for g in program.gates:
            self._gates.append(Gate(g.kind, tuple(map(tr, g.targets)), tuple(map(tr, g.controls)), g.polarity))
        self._sections.extend(Section(s.name, s.start + off, s.stop + off) for s in program.sections)

    def mark(self) -> int:
        return len(self._gates)

    def uncompute(self, start: int, stop: int | None = None) -> None:
        """Append the inverse of the gates emitted in ``[start, stop)``."""
        stop = len(self._gates) if stop is None else stop
        self._gates.extend(reversed(self._gates[start:stop]))

    @contextlib.contextmanager
    def section(self, name: str) -> Iterator[None]:
        start = len(self._gates)
        yield
        self._sections.append(Section(name, start, len(self._gates)))

    def build(self) -> GateProgram:
        return GateProgram(tuple(self._registers.items()), tuple(self._gates), tuple(self._sections), self.name)


# ---------------------------------------------------------------------------
# Single-thread executor


class RegisterFile(Mapping):
    """Exact bit state of named registers for one computation thread."""

    def __init__(self, widths: Mapping[str, int], values: Mapping[str, int] | None = None):
        self._widths = dict(widths)
        self._values = {name: 0 for name in self._widths}
        for name, v in (values or {}).items():
            if name not in self._widths:
                raise KeyError(name)
            if not 0 <= v < (1 << self._widths[name]):
                raise ValueError(f"value {v} overflows {self._widths[name]}-bit register {name!r}")
            self._values[name] = int(v)

    @property
    def widths(self) -> dict[str, int]:
        return dict(self._widths)

    def __getitem__(self, name):
        return self._values[name]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        if isinstance(other, RegisterFile):
            return self._widths == other._widths and self._values == other._values
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{k}={v:0{self._widths[k]}b}" for k, v in self._values.items())
        return f"RegisterFile({body})"


def new_register_file(declarations: Iterable[tuple[str, int, int]]) -> RegisterFile:
    widths: dict[str, int] = {}
    values: dict[str, int] = {}
    for name, width, value in declarations:
        if name in widths:
            raise ValueError(f"duplicate register {name!r}")
        widths[name] = width
        values[name] = value
    return RegisterFile(widths, values)


def run_program(rf: RegisterFile, p: GateProgram) -> RegisterFile:
    if rf.widths != p.widths:
        raise ProgramError("register file does not match program declarations")
    v = dict(rf)

    def bit(b: Bit) -> int:
        return (v[b[0]] >> b[1]) & 1

    for g in p.gates:
        if g.kind is GateKind.SWAP:
            a, b = g.targets
            if bit(a) != bit(b):
                v[a[0]] ^= 1 << a[1]
                v[b[0]] ^= 1 << b[1]
        elif all(bit(c) == pol for c, pol in zip(g.controls, g.polarity)):
            t = g.targets[0]
            v[t[0]] ^= 1 << t[1]
    return RegisterFile(rf.widths, v)


# ---------------------------------------------------------------------------
# Batched executor over packed bit planes


def _pack(values: np.ndarray, width: int, lanes: int) -> np.ndarray:
    words = (lanes + 63) // 64
    vals = np.zeros(words * 64, dtype=np.uint64)
    vals[:lanes] = values
    out = np.empty((width, words), dtype=np.uint64)
    for i in range(width):
        bits = ((vals >> np.uint64(i)) & np.uint64(1)).astype(np.uint8)
        out[i] = np.packbits(bits, bitorder="little").view(np.uint64)
    return out


def _unpack(planes: np.ndarray, lanes: int) -> np.ndarray:
    out = np.zeros(lanes, dtype=np.uint64)
    for i in range(planes.shape[0]):
        bits = np.unpackbits(planes[i].view(np.uint8), bitorder="little")[:lanes]
        out |= bits.astype(np.uint64) << np.uint64(i)
    return out


def run_batch(p: GateProgram, inputs: Mapping[str, np.ndarray], lanes: int | None = None) -> dict[str, np.ndarray]:
    """Run ``p`` on many threads; ``inputs[name][t]`` is register ``name`` of thread ``t``.

    Registers missing from ``inputs`` start at zero. Returns every register as
    a ``uint64`` array. Widths up to 64 bits are supported.
    """
    widths = p.widths
    for name in inputs:
        if name not in widths:
            raise ProgramError(f"unknown register {name!r}")
    if lanes is None:
        lanes = len(next(iter(inputs.values()))) if inputs else 1
    words = (lanes + 63) // 64
    index: dict[str, int] = {}
    total = 0
    for name, w in p.registers:
        if w > 64:
            raise ProgramError("batched registers are limited to 64 bits")
        index[name] = total
        total += w
    state = np.zeros((total, words), dtype=np.uint64)
    for name, vals in inputs.items():
        vals = np.asarray(vals, dtype=np.uint64)
        if vals.shape != (lanes,):
            raise ProgramError(f"input {name!r} has shape {vals.shape}, expected ({lanes},)")
        if widths[name] < 64 and np.any(vals >> np.uint64(widths[name])):
            raise ValueError(f"input overflows {widths[name]}-bit register {name!r}")
        state[index[name] : index[name] + widths[name]] = _pack(vals, widths[name], lanes)

    for g in p.gates:
        if g.kind is GateKind.SWAP:
            (ra, ia), (rb, ib) = g.targets
            a, b = index[ra] + ia, index[rb] + ib
            state[[a, b]] = state[[b, a]]
            continue
        (rt, it), = g.targets
        t = index[rt] + it
        if not g.controls:
            np.invert(state[t], out=state[t])
            continue
        acc = None
        for (rc, ic), pol in zip(g.controls, g.polarity):
            c = state[index[rc] + ic]
            if not pol:
                c = ~c
            acc = c.copy() if acc is None else np.bitwise_and(acc, c, out=acc)
        np.bitwise_xor(state[t], acc, out=state[t])

    return {name: _unpack(state[index[name] : index[name] + w], lanes) for name, w in p.registers}


# ---------------------------------------------------------------------------
# Cost model

UNIT_COSTS = {GateKind.NOT: 1, GateKind.CNOT: 1, GateKind.TOFFOLI: 5, GateKind.SWAP: 3}


def mcx_cost(n_controls: int) -> int:
    """Cost of an X gate with ``n_controls`` controls acting on ``n_controls + 1`` qubits."""
    if n_controls == 0:
        return UNIT_COSTS[GateKind.NOT]
    if n_controls == 1:
        return UNIT_COSTS[GateKind.CNOT]
    if n_controls == 2:
        return UNIT_COSTS[GateKind.TOFFOLI]
    return 10 * (n_controls + 1) - 9


def gate_cost(g: Gate) -> int:
    if g.kind is GateKind.MCX:
        return mcx_cost(len(g.controls))
    return UNIT_COSTS[g.kind]


def _kind_label(g: Gate) -> str:
    return f"MCX{len(g.controls)}" if g.kind is GateKind.MCX else g.kind.value


@dataclass(frozen=True)
class CostReport:
    counts: dict[str, int]
    unit_costs: dict[str, int]
    total: int
    sub_programs: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "unit_costs": dict(self.unit_costs),
            "total": self.total,
            "sub_programs": dict(self.sub_programs),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def cost(p: GateProgram) -> CostReport:
    counts: Counter[str] = Counter()
    units: dict[str, int] = {}
    per_gate = []
    for g in p.gates:
        label = _kind_label(g)
        c = gate_cost(g)
        counts[label] += 1
        units[label] = c
        per_gate.append(c)
    prefix = np.concatenate([[0], np.cumsum(per_gate, dtype=np.int64)])
    subs: dict[str, int] = {}
    for s in p.sections:
        subs[s.name] = subs.get(s.name, 0) + int(prefix[s.stop] - prefix[s.start])
    total = sum(counts[k] * units[k] for k in counts)
    return CostReport(dict(sorted(counts.items())), dict(sorted(units.items())), total, subs)
