"""Eight-direction Sobel edge detection on NEQR quantum images, simulated at register level."""

from .neqr import NeqrImage, cycle_shift, decode, encode, neighborhood_bundle
from .oracle import classical_pipeline, mse
from .pipeline import EdgeMap, Thresholds, detect_edges
from .revcore import GateProgram, RegisterFile, cost, invert_program, new_register_file, run_batch, run_program

__all__ = [
    "EdgeMap",
    "GateProgram",
    "NeqrImage",
    "RegisterFile",
    "Thresholds",
    "classical_pipeline",
    "cost",
    "cycle_shift",
    "decode",
    "detect_edges",
    "encode",
    "invert_program",
    "mse",
    "neighborhood_bundle",
    "new_register_file",
    "run_batch",
    "run_program",
]
