"""Normalized absorption spectra of mixed-chirality media.

One sweep per excess value; the two characteristic peaks at minus/plus half
the control amplitude report the left/right handed fractions.  Writes one
CSV per excess and, with --plot, a combined figure.
"""

import argparse
import sys

import numpy as np

from chiral_spectra import DriveConfig, MediumConfig, MoleculeParams, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dp", type=float, nargs="+", default=[-0.5, 0.0, 0.5, 1.0])
    ap.add_argument("--zeta", type=float, default=0.2)
    ap.add_argument("--omega32", type=float, default=10.0)
    ap.add_argument("--probe", type=float, default=0.1)
    ap.add_argument("--points", type=int, default=321)
    ap.add_argument("--engine", choices=("linear", "full"), default="full")
    ap.add_argument("--prefix", default="spectrum", help="output CSV prefix")
    ap.add_argument("--plot", help="optional PNG path")
    args = ap.parse_args()

    mol = MoleculeParams.default_closed()
    drive = DriveConfig(args.probe, args.probe, args.omega32, delta=0.0)
    grid = np.linspace(-8.0, 8.0, args.points)

    results = []
    for dp in args.dp:
        medium = MediumConfig.from_excess(dp, zeta=args.zeta)
        res = sweep(medium, mol, drive, grid, engine=args.engine)
        results.append((dp, res))
        path = f"{args.prefix}_dp{dp:+.2f}.csv"
        with open(path, "w", newline="") as fh:
            fh.write("delta,T,I,I_norm\n")
            for row in zip(res.delta, res.transmission, res.absorption,
                           res.absorption_norm):
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
        print(f"dp={dp:+.2f}  dp'={res.dp_prime:+.4f}  -> {path}",
              file=sys.stderr)

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(6, 4))
        for dp, res in results:
            ax.plot(res.delta, res.absorption_norm, label=f"excess {dp:+.2f}")
        ax.set_xlabel("probe detuning (gamma)")
        ax.set_ylabel("normalized absorption")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}", file=sys.stderr)


if __name__ == "__main__":
    main()
