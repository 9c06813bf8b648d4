"""Well-posedness and breaking regions for Gaussian-derivative data on an (a, b) grid."""

import argparse
from pathlib import Path

import numpy as np

from shortpulse.analysis import scan_gaussian, write_scan_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--a-max", type=float, default=4.0)
    ap.add_argument("--b-min", type=float, default=0.25)
    ap.add_argument("--b-max", type=float, default=4.0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    a = np.linspace(args.a_max / args.count, args.a_max, args.count)
    b = np.geomspace(args.b_min, args.b_max, args.count)
    rows = scan_gaussian(a, b, n=2001)
    write_scan_csv(rows, out / "gaussian_regions.csv")

    # per b: largest well-posed a and smallest breaking a
    for bi in b:
        sel = [r for r in rows if r["b"] == bi]
        wp = max((r["a"] for r in sel if r["wellposed"]), default=float("nan"))
        br = min((r["a"] for r in sel if r["breaking"]), default=float("nan"))
        print(f"b={bi:.3f}  well-posed up to a={wp:.3f}  breaking from a={br:.3f}")


if __name__ == "__main__":
    main()
