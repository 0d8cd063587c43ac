import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsed.neqr import (
    OFFSETS,
    RETURN_MOVES,
    SCHEDULE,
    SCHEDULE_TRACE,
    NeqrImage,
    ct_program,
    cycle_shift,
    decode,
    encode,
    neighborhood_bundle,
    shift_schedule_program,
    trace,
)
from qsed.revcore import new_register_file, run_program

FIG1 = [[0, 100], [200, 255]]


def test_encode_fixture():
    img = encode(FIG1)
    assert (img.n, img.q) == (1, 8)
    terms = {(y, x): c for c, y, x in img.terms()}
    assert terms == {(0, 0): 0, (0, 1): 100, (1, 0): 200, (1, 1): 255}


@pytest.mark.parametrize(
    "pixels, q",
    [([[0, 1, 2]], 8), (np.zeros((3, 3)), 8), ([[256, 0], [0, 0]], 8), ([[4, 0], [0, 0]], 2), ([[-1, 0], [0, 0]], 8)],
)
def test_encode_rejects(pixels, q):
    with pytest.raises(ValueError):
        encode(pixels, q)


def test_single_pixel_image():
    img = encode([[7]])
    assert img.n == 0 and cycle_shift(img, "X", 1) == img


@settings(max_examples=30)
@given(st.integers(0, 6), st.integers(1, 16), st.integers(0, 2**32 - 1))
def test_round_trip(n, q, seed):
    rng = np.random.default_rng(seed)
    grid = rng.integers(0, 1 << q, size=(1 << n, 1 << n))
    np.testing.assert_array_equal(decode(encode(grid, q)), grid)


def test_image_is_immutable():
    img = encode(FIG1)
    with pytest.raises(ValueError):
        img.gray[0, 0] = 1


@pytest.mark.parametrize("n, start, delta, expected", [(2, 3, 1, 0), (3, 0, -1, 7), (3, 5, 1, 6), (1, 1, 1, 0)])
def test_ct_examples(n, start, delta, expected):
    assert run_program(new_register_file([("P", n, start)]), ct_program(n, delta))["P"] == expected


@pytest.mark.parametrize("n", range(1, 6))
def test_ct_full_cycle_and_inverse(n):
    for start in range(1 << n):
        rf = new_register_file([("P", n, start)])
        assert run_program(run_program(rf, ct_program(n, 1)), ct_program(n, -1)) == rf
        out = rf
        for _ in range(1 << n):
            out = run_program(out, ct_program(n, 1))
        assert out == rf


@pytest.mark.parametrize("axis, delta", [("Y", 1), ("Y", -1), ("X", 1), ("X", -1)])
def test_cycle_shift_matches_roll(rng, axis, delta):
    grid = rng.integers(0, 256, size=(8, 8))
    out = decode(cycle_shift(encode(grid), axis, delta))
    np.testing.assert_array_equal(out, np.roll(grid, delta, axis=0 if axis == "Y" else 1))


def test_trace_visits_every_offset_once():
    t = trace()
    assert tuple(t) == SCHEDULE_TRACE
    assert len(set(t)) == 24 and (0, 0) not in t
    assert set(t) | {(0, 0)} == set(OFFSETS)
    assert trace(SCHEDULE + RETURN_MOVES)[-1] == (0, 0)


def test_two_by_two_bundle_aliases():
    b = neighborhood_bundle(encode(FIG1))
    assert int(b.entry(1, 0)[0, 0]) == 200
    assert int(b.entry(-1, 0)[0, 0]) == 200
    assert int(b.entry(2, 2)[0, 0]) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_bundle_matches_wrapped_indexing(n, seed):
    rng = np.random.default_rng(seed)
    grid = rng.integers(0, 256, size=(1 << n, 1 << n))
    b = neighborhood_bundle(encode(grid))
    side = 1 << n
    y, x = np.indices((side, side))
    for a, c in OFFSETS:
        np.testing.assert_array_equal(b.entry(a, c), grid[(y + a) % side, (x + c) % side])


def test_schedule_program_shape():
    p = shift_schedule_program(3, 8)
    widths = p.widths
    assert widths["Y"] == widths["X"] == 3
    assert sum(1 for r in widths if r.startswith("c_")) == 25
    assert len(SCHEDULE) == 24


def test_bundle_shape_validation():
    with pytest.raises(ValueError):
        NeqrImage(1, 8, np.zeros((4, 4)))
