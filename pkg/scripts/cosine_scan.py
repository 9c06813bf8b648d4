"""Breaking time T(a) and prefactor C(a) for cosine data, against the
dispersionless time 1/(pi a^2) and the criterion threshold."""

import argparse
from pathlib import Path

import numpy as np

from shortpulse.analysis import scan_cosine, write_scan_csv
from shortpulse.criteria import cosine_criterion, threshold_scan
from shortpulse.solver import SimConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--a-min", type=float, default=0.4)
    ap.add_argument("--a-max", type=float, default=1.4)
    ap.add_argument("--count", type=int, default=11)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    a_star = threshold_scan(lambda a: cosine_criterion(a)[1].breaking_predicted, 0.5, 2.0)
    print(f"criterion threshold a* = {a_star:.4f}")
    rows = scan_cosine(np.linspace(args.a_min, args.a_max, args.count), SimConfig(n=args.n, t_end=2.0),
                       workers=args.workers)
    write_scan_csv(rows, out / "cosine_scan.csv")
    for r in rows:
        print(f"a={r['a']:.3f} T={r['T']:.4f} C={r['C']:.4f} T0={r['T0']:.4f} criterion={r['breaking']}")


if __name__ == "__main__":
    main()
