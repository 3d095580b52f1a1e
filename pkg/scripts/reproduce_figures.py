"""Regenerate every figure data file plus the flow table for the default packet.

    python3 scripts/reproduce_figures.py --out figures_out
"""
import argparse
import sys

from phaseflow.cli import FIGURE_DEFAULTS, main as cli_main


def run(out: str, seed: int, n: int) -> int:
    packet = [arg for k, v in FIGURE_DEFAULTS.items() for arg in ("--set", f"{k}={v}")]
    steps = [
        ["figures", "--out", out],
        ["flow", *packet, "--out", out],
        ["wigner-grid", *packet, "--out", out],
        ["montecarlo", "--n", str(n), "--seed", str(seed), "--out", out],
    ]
    for argv in steps:
        print("$ phaseflow " + " ".join(argv))
        code = cli_main(argv)
        if code:
            return code
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures_out")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=1_000_000)
    a = ap.parse_args()
    sys.exit(run(a.out, a.seed, a.n))
