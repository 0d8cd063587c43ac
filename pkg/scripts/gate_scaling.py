"""Per-pixel gate cost by stage, over a grid of n and q.

    python3 scripts/gate_scaling.py --n 3 4 5 6 --q 4 8 16
"""

import argparse

from qsed.pipeline import STAGES, gate_report


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--q", type=int, nargs="+", default=[4, 8, 16])
    ap.add_argument("--directions", type=int, choices=(2, 4, 8), default=8)
    args = ap.parse_args()

    print(f"{'n':>3} {'q':>3} " + " ".join(f"{s:>11}" for s in STAGES) + f" {'total':>9}")
    for q in args.q:
        for n in args.n:
            r = gate_report(n, q, args.directions)["per_pixel"]
            row = " ".join(f"{r['sub_programs'][s]:>11d}" for s in STAGES)
            print(f"{n:>3} {q:>3} {row} {r['total']:>9d}")


if __name__ == "__main__":
    main()
