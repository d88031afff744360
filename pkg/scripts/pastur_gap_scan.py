"""Density at the origin for the +-a source as a tends to the gap opening."""

import numpy as np

from rmtpoly.source import gap_scan, two_atom_critical_a


def main():
    scan = gap_scan(np.linspace(0.0, 1.5, 31))
    print("a,rho0")
    for a, r in zip(scan.a_grid, scan.rho0):
        print(f"{a:.3f},{r:.8f}")
    print(f"# gap opens near a = {scan.critical_a:.6f}")
    print(f"# discriminant root a = {two_atom_critical_a():.12f}")


if __name__ == "__main__":
    main()
