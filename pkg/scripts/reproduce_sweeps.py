"""Write the five amplification sweeps as CSV files and print their headline numbers."""
import argparse
import os

import numpy as np

from sympleq.sweep import STUDIES, SweepConfig, run_sweep

SETTINGS = {
    "squeeze-theta": dict(r=1.0),
    "squeeze-r": dict(theta=np.pi),
    "rot-squeeze-phi": dict(r=0.5, theta=0.0),
    "amp-boundary": dict(),
    "rot-only": dict(),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="sweeps")
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for study in STUDIES:
        res = run_sweep(SweepConfig(study, workers=args.workers, **SETTINGS[study]))
        path = os.path.join(args.outdir, f"{study}.csv")
        with open(path, "w") as fh:
            fh.write(res.to_csv())
        print(f"{study}: {len(res.rows)} rows -> {path}")
        if study == "squeeze-theta":
            s, t = np.array(res.column("abs_s")), np.array(res.column("theta"))
            print(f"  max |s| = {s.max():.12f} at theta = {t[s.argmax()]:.6f}; "
                  f"min |s| = {s.min():.12f} at theta = {t[s.argmin()]:.6f}")
        elif study == "rot-squeeze-phi":
            div = [row[0] for row in res.rows if row[-1] == "div"]
            print("  divergences at phi =", ", ".join(f"{p:.10f}" for p in div))
        elif study == "rot-only":
            print(f"  max |s| = {max(res.column('abs_s')):.15f}")


if __name__ == "__main__":
    main()
