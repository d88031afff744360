"""Gap probabilities E(s) and spacing densities for the three ensembles.

Both routes are evaluated on the same grid; the table lists E from the
Hamiltonian system, the Nystrom difference, and p(s).
"""

import argparse

import numpy as np

from rmtpoly.spacing import spacing_curve, spacing_density


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--smax", type=float, default=3.0)
    parser.add_argument("--ds", type=float, default=0.05)
    args = parser.parse_args()
    grid = np.arange(0.0, args.smax + 1e-12, args.ds)
    print("ensemble,s,E,nystrom_diff,p")
    for ens in ("gue", "goe", "gse"):
        ode = spacing_curve(ens, grid, "hamiltonian")
        nys = spacing_curve(ens, grid, "nystrom")
        p = spacing_density(ode)
        for s, e, n, q in zip(grid, ode.e_values, nys.e_values, p):
            print(f"{ens},{s:.4f},{e:.10f},{e - n:.2e},{q:.8f}")


if __name__ == "__main__":
    main()
