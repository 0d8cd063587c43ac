import json

import numpy as np
import pytest

from qsed.cli import main
from qsed.pgm import PgmError, read_pgm, write_pgm
from qsed.revcore import cost
from qsed.pipeline import per_pixel_program


def test_read_p2(tmp_path):
    f = tmp_path / "a.pgm"
    f.write_text("P2\n# comment\n2 2\n255\n0 100\n200 255\n")
    np.testing.assert_array_equal(read_pgm(f), [[0, 100], [200, 255]])


def test_p5_round_trip(tmp_path, rng):
    g = rng.integers(0, 256, size=(8, 8)).astype(np.uint8)
    write_pgm(g, tmp_path / "b.pgm")
    assert (tmp_path / "b.pgm").read_bytes().startswith(b"P5")
    np.testing.assert_array_equal(read_pgm(tmp_path / "b.pgm"), g)


def test_rejects_and_crops(tmp_path):
    g = np.arange(9, dtype=np.uint8).reshape(3, 3)
    write_pgm(g, tmp_path / "c.pgm")
    with pytest.raises(PgmError):
        read_pgm(tmp_path / "c.pgm")
    np.testing.assert_array_equal(read_pgm(tmp_path / "c.pgm", crop=True), [[0, 1], [3, 4]])
    (tmp_path / "d.pgm").write_bytes(b"P6\n1 1\n255\n\0\0\0")
    with pytest.raises(PgmError):
        read_pgm(tmp_path / "d.pgm")
    (tmp_path / "e.pgm").write_bytes(b"P5\n4 4\n255\n\0")
    with pytest.raises(PgmError):
        read_pgm(tmp_path / "e.pgm")


def test_rejects_16_bit(tmp_path):
    (tmp_path / "w.pgm").write_text("P2\n2 2\n65535\n0 1\n2 3\n")
    with pytest.raises(PgmError):
        read_pgm(tmp_path / "w.pgm")


def test_detect_constant_image(tmp_path):
    write_pgm(np.full((16, 16), 90, dtype=np.uint8), tmp_path / "in.pgm")
    rc = main(["detect", "--input", str(tmp_path / "in.pgm"), "--output", str(tmp_path / "out.pgm"), "--t-high", "50"])
    assert rc == 0
    assert not read_pgm(tmp_path / "out.pgm").any()


def test_detect_modes_agree_and_report(tmp_path, rng, capsys):
    write_pgm(rng.integers(0, 256, size=(16, 16)).astype(np.uint8), tmp_path / "in.pgm")
    common = ["detect", "--input", str(tmp_path / "in.pgm"), "--t-high", "90"]
    assert main(common + ["--output", str(tmp_path / "q.pgm"), "--mode", "quantum", "--report", str(tmp_path / "r.json")]) == 0
    assert main(common + ["--output", str(tmp_path / "c.pgm")]) == 0
    np.testing.assert_array_equal(read_pgm(tmp_path / "q.pgm"), read_pgm(tmp_path / "c.pgm"))
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["T_L"] == 30 and report["n"] == 4
    assert report["gate_cost"]["per_pixel_total"] == cost(per_pixel_program(4, 8)).total
    assert report["gate_cost"]["aggregate_total"] == 256 * report["gate_cost"]["per_pixel_total"]
    assert main(["mse", str(tmp_path / "q.pgm"), str(tmp_path / "c.pgm")]) == 0
    assert capsys.readouterr().out.strip() == "0.00"


def test_mse_command(tmp_path, capsys):
    write_pgm(np.array([[0, 100], [200, 255]], dtype=np.uint8), tmp_path / "a.pgm")
    write_pgm(np.zeros((2, 2), dtype=np.uint8), tmp_path / "z.pgm")
    write_pgm(np.zeros((4, 4), dtype=np.uint8), tmp_path / "big.pgm")
    assert main(["mse", str(tmp_path / "a.pgm"), str(tmp_path / "z.pgm")]) == 0
    assert capsys.readouterr().out.strip() == "28756.25"
    assert main(["mse", str(tmp_path / "a.pgm"), str(tmp_path / "big.pgm")]) == 1
    assert "error" in capsys.readouterr().err


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["detect", "--input", str(tmp_path / "nope.pgm"), "--output", str(tmp_path / "o.pgm"), "--t-high", "9"]) == 1
    write_pgm(np.zeros((4, 4), dtype=np.uint8), tmp_path / "in.pgm")
    assert main(["detect", "--input", str(tmp_path / "in.pgm"), "--output", str(tmp_path / "o.pgm"), "--t-high", "0"]) == 1
    assert main(["gates", "--n", "1", "--q", "8"]) == 1
    with pytest.raises(SystemExit):
        main(["detect", "--input", "x", "--output", "y", "--t-high", "5", "--directions", "3"])


def test_gates_command(capsys):
    totals = {}
    for n, q in ((3, 8), (6, 8), (3, 4), (3, 5)):
        assert main(["gates", "--n", str(n), "--q", str(q)]) == 0
        totals[n, q] = json.loads(capsys.readouterr().out)["per_pixel"]["total"]
    assert totals[6, 8] / totals[3, 8] <= 4.5
    assert totals[3, 4] < totals[3, 5] < totals[3, 8]
