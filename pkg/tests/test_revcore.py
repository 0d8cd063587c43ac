import json

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from qsed.revcore import (
    Builder,
    Gate,
    GateKind,
    GateProgram,
    ProgramError,
    RegisterFile,
    concat,
    cost,
    controlled_x,
    invert_program,
    mcx_cost,
    new_register_file,
    run_batch,
    run_program,
)

REGS = (("A", 3), ("B", 4), ("C", 2))


def test_new_register_file_values():
    rf = new_register_file([("A", 3, 5), ("B", 3, 0)])
    assert rf["A"] == 0b101 and rf["B"] == 0
    assert new_register_file([("C", 8, 255)])["C"] == 0b11111111


@pytest.mark.parametrize("decl", [[("A", 2, 5)], [("A", 2, 1), ("A", 3, 0)]])
def test_new_register_file_errors(decl):
    with pytest.raises(ValueError):
        new_register_file(decl)


def test_cnot_and_toffoli_truth_tables():
    b = Builder()
    A, B = b.register("A", 1), b.register("B", 1)
    b.cx(A[0], B[0])
    rf = run_program(new_register_file([("A", 1, 1), ("B", 1, 0)]), b.build())
    assert rf["B"] == 1

    b = Builder()
    R = b.register("R", 3)
    b.ccx(R[0], R[1], R[2])
    assert run_program(new_register_file([("R", 3, 0b011)]), b.build())["R"] == 0b111
    assert run_program(new_register_file([("R", 3, 0b001)]), b.build())["R"] == 0b001


def test_negative_controls_and_swap():
    b = Builder()
    R = b.register("R", 3)
    b.ccx(R[0], R[1], R[2], (False, True))
    b.swap(R[0], R[2])
    p = b.build()
    # R=010: controls (R0=0 -> fires on 0, R1=1) flip R2 -> 110, then swap R0<->R2 -> 011
    assert run_program(new_register_file([("R", 3, 0b010)]), p)["R"] == 0b011


def test_register_mismatch():
    p = GateProgram((("A", 2),))
    with pytest.raises(ProgramError):
        run_program(new_register_file([("A", 3, 0)]), p)


def test_gate_invariants():
    with pytest.raises(ProgramError):
        Gate(GateKind.CNOT, (("A", 0),), (("A", 0),))
    with pytest.raises(ProgramError):
        GateProgram((("A", 2),), (controlled_x(("A", 2)),))
    with pytest.raises(ProgramError):
        Gate(GateKind.TOFFOLI, (("A", 0),), (("A", 1),))


def test_invert_program_examples():
    g = [controlled_x(("A", i)) for i in range(3)]
    p = GateProgram((("A", 3),), tuple(g))
    assert invert_program(p).gates == tuple(reversed(g))
    assert invert_program(GateProgram(())).gates == ()


def test_dump_format():
    b = Builder()
    A = b.register("A", 4)
    b.mcx([A[0], A[1], A[2]], A[3], [True, False, True])
    b.x(A[0])
    assert b.build().dump().splitlines() == ["MCX3 A[0],!A[1],A[2] A[3]", "NOT - A[0]"]


@pytest.mark.parametrize(
    "controls, expected",
    [(0, 1), (1, 1), (2, 5), (3, 31), (4, 41)],
)
def test_unit_costs(controls, expected):
    # an X with n-1 controls on n qubits costs 10n - 9 once n >= 4
    assert mcx_cost(controls) == expected


def test_cost_examples():
    b = Builder()
    R = b.register("R", 5)
    b.ccx(R[0], R[1], R[2])
    assert cost(b.build()).total == 5

    b = Builder()
    R = b.register("R", 5)
    b.mcx(R[:3], R[3])
    assert cost(b.build()).total == 31

    b = Builder()
    R = b.register("R", 2)
    b.cx(R[0], R[1])
    b.x(R[0])
    assert cost(b.build()).total == 2

    b = Builder()
    R = b.register("R", 2)
    b.swap(R[0], R[1])
    assert cost(b.build()).total == 3


def test_cost_json_and_sections():
    b = Builder()
    R = b.register("R", 4)
    with b.section("first"):
        b.ccx(R[0], R[1], R[2])
    with b.section("second"):
        b.x(R[3])
        b.mcx(R[:3], R[3])
    report = cost(b.build())
    data = json.loads(report.to_json())
    assert set(data) == {"counts", "unit_costs", "total", "sub_programs"}
    assert data["sub_programs"] == {"first": 5, "second": 32}
    assert data["total"] == sum(data["counts"][k] * data["unit_costs"][k] for k in data["counts"])


# ---------------------------------------------------------------------------
# random programs


@st.composite
def programs(draw, max_gates=30):
    bits = [(r, i) for r, w in REGS for i in range(w)]
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        if draw(st.booleans()) and draw(st.integers(0, 4)) == 0:
            a, b = draw(st.lists(st.sampled_from(bits), min_size=2, max_size=2, unique=True))
            gates.append(Gate(GateKind.SWAP, (a, b)))
            continue
        chosen = draw(st.lists(st.sampled_from(bits), min_size=1, max_size=6, unique=True))
        pol = draw(st.lists(st.booleans(), min_size=len(chosen) - 1, max_size=len(chosen) - 1))
        gates.append(controlled_x(chosen[0], chosen[1:], pol))
    return GateProgram(REGS, tuple(gates))


register_files = st.tuples(*[st.integers(0, (1 << w) - 1) for _, w in REGS]).map(
    lambda vals: RegisterFile(dict(REGS), dict(zip((r for r, _ in REGS), vals)))
)


@given(programs(), register_files)
def test_reversibility(p, rf):
    assert run_program(run_program(rf, p), invert_program(p)) == rf


@given(programs(), register_files)
def test_width_preservation_and_determinism(p, rf):
    out = run_program(rf, p)
    assert out.widths == rf.widths
    assert all(out[r] < 1 << w for r, w in REGS)
    assert run_program(rf, p) == out


@given(programs(), programs())
def test_cost_additivity(p1, p2):
    assert cost(concat([p1, p2])).total == cost(p1).total + cost(p2).total


@settings(max_examples=50)
@given(programs(max_gates=60), st.lists(register_files, min_size=1, max_size=70))
def test_batch_matches_single_thread(p, rfs):
    inputs = {r: np.array([rf[r] for rf in rfs], dtype=np.uint64) for r, _ in REGS}
    out = run_batch(p, inputs)
    for t, rf in enumerate(rfs):
        single = run_program(rf, p)
        assert all(int(out[r][t]) == single[r] for r, _ in REGS)


def test_batch_rejects_overflow():
    p = GateProgram((("A", 2),))
    with pytest.raises(ValueError):
        run_batch(p, {"A": np.array([4], dtype=np.uint64)})


def test_builder_extend_maps_registers():
    inner = Builder()
    X = inner.register("X", 2)
    inner.cx(X[0], X[1])
    outer = Builder()
    R = outer.register("R", 4)
    outer.extend(inner.build(), {"X": [R[3], R[1]]})
    assert outer.build().gates[0].controls == (("R", 3),)
    assert outer.build().gates[0].targets == (("R", 1),)
