"""Compare 2-, 4- and 8-direction detection on oriented line fixtures.

    python3 scripts/direction_comparison.py --angle 22.5 --t-high 300
"""

import argparse

from qsed import encode
from qsed.pipeline import detect_edges
from qsed.synthetic import line_hits, oriented_line


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--side", type=int, default=64)
    ap.add_argument("--angle", type=float, default=22.5)
    ap.add_argument("--t-high", type=int, default=300)
    ap.add_argument("--thickness", type=float, nargs="+", default=[1, 2, 3, 6])
    ap.add_argument("--mode", choices=("quantum", "classical"), default="classical")
    args = ap.parse_args()

    print(f"angle={args.angle}  T_H={args.t_high}  mode={args.mode}")
    print(f"{'thickness':>9} {'2-dir':>6} {'4-dir':>6} {'8-dir':>6}")
    for t in args.thickness:
        image, mask = oriented_line(args.side, args.angle, t)
        img = encode(image)
        hits = [line_hits(detect_edges(img, args.t_high, args.mode, d).edges, mask) for d in (2, 4, 8)]
        print(f"{t:>9g} " + " ".join(f"{h:>6d}" for h in hits))


if __name__ == "__main__":
    main()
