"""Find a negative-flow interval from the closed form, then watch the classical
ensemble lose probability beyond the detector across it."""
import argparse
import math

import numpy as np

from phaseflow import DimensionlessPacket, FlowScenario, probability_beyond, scan_flow
from phaseflow.ensemble import quantum_classical_compare


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps0", type=float, default=-3.0)
    ap.add_argument("--eta0", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=2.0)
    ap.add_argument("--n", type=int, default=10_000_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--points", type=int, default=6, help="Monte Carlo times inside the interval")
    a = ap.parse_args()

    packet = DimensionlessPacket(xi0=0.0, eta0=a.eta0, eps0=a.eps0, delta=a.delta)
    series = scan_flow(FlowScenario(packet, tuple(np.linspace(0.0, 8.0, 4001))))
    if not series.intervals:
        raise SystemExit("no negative flow for these parameters")
    first = series.intervals[0]
    print(f"negative flow on tau in [{first.start:.4f}, {first.end:.4f}], "
          f"steepest dPi/dtau = {first.min_total_rate:.5f}")

    taus = np.linspace(first.start, first.end, a.points)
    report = quantum_classical_compare(packet, packet.delta, taus, a.n, a.seed)
    print(f"{'tau':>8} {'Pi_cl':>10} {'stderr':>9} {'Pi':>10} {'z':>6}")
    for r in report.rows:
        print(f"{r.run.tau:8.4f} {r.run.pi_estimate:10.6f} {r.run.standard_error:9.2e} "
              f"{r.pi_quantum:10.6f} {r.zscore:6.2f}")

    a0, b0 = report.rows[0].run, report.rows[-1].run
    drop = a0.pi_estimate - b0.pi_estimate
    se = math.hypot(a0.standard_error, b0.standard_error)
    expected = probability_beyond(packet, taus[0]) - probability_beyond(packet, taus[-1])
    print(f"classical drop {drop:.6f} ({drop / se:.1f} SE), closed form {expected:.6f}")


if __name__ == "__main__":
    main()
