"""Sweep the initial chirp eps0 and report how much negative flow each packet shows."""
import argparse

import numpy as np

from phaseflow import DimensionlessPacket, FlowScenario, scan_flow


def sweep(eps_values, eta0, delta, tau_max=10.0, count=4001):
    taus = tuple(np.linspace(0.0, tau_max, count))
    for eps0 in eps_values:
        series = scan_flow(FlowScenario(DimensionlessPacket(0.0, eta0, eps0, delta), taus))
        neg = series.total_rate[series.flag == 1]
        lost = -np.sum(neg) * (taus[1] - taus[0]) if neg.size else 0.0
        yield eps0, len(series.intervals), float(neg.min()) if neg.size else 0.0, lost


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta0", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=2.0)
    a = ap.parse_args()
    print(f"{'eps0':>6} {'intervals':>9} {'min rate':>10} {'lost':>9}")
    for eps0, k, rmin, lost in sweep(np.arange(-6.0, 3.0, 0.5), a.eta0, a.delta):
        print(f"{eps0:6.2f} {k:9d} {rmin:10.5f} {lost:9.5f}")
