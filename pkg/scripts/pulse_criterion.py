"""Breaking criterion along the exact pulse family, both bound choices.

Writes pulse_criterion.csv with one row per m in (0, m_cr).
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from shortpulse.criteria import breaking_bounds_line, pulse_criterion, pulse_invariants, wellposedness_margin
from shortpulse.exact import M_CR


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--count", type=int, default=20)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for m in M_CR * np.arange(1, args.count + 1) / (args.count + 1):
        inv = pulse_invariants(m)
        row = {"m": m, "margin": wellposedness_margin(inv)}
        for kind, bounds in (("sup", None), ("energy", breaking_bounds_line(inv))):
            b, rep = pulse_criterion(m, bounds)
            row.update({f"{kind}_f0": b.f0, f"{kind}_f1": b.f1, f"{kind}_score1": rep.f1_score,
                        f"{kind}_score2": rep.f2_score, f"{kind}_i2_empty": rep.i2_empty,
                        f"{kind}_breaking": rep.breaking_predicted})
        rows.append(row)
        print(f"m={m:.4f} margin={row['margin']:.4f} f1(sup)={row['sup_score1']:+.4f} "
              f"I2 empty: sup={row['sup_i2_empty']} energy={row['energy_i2_empty']}")

    with open(out / "pulse_criterion.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
