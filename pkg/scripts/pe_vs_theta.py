"""Tabulate PSC block error, its BSC dual B^2, and the Helstrom single-bit error against theta.

Usage: python3 scripts/pe_vs_theta.py --code hamming:7,4 --points 31 > pe.csv
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from cqduality import build_pair, load_code
from cqduality.bscsecrecy import b_squared_direct
from cqduality.channelmodels import ChannelVector, dual_parameter, helstrom_error
from cqduality.psccoding import block_error_psc


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--code", default="hamming:7,4")
    parser.add_argument("--points", type=int, default=31)
    args = parser.parse_args()

    pair = build_pair(load_code(args.code))
    writer = csv.writer(sys.stdout)
    writer.writerow(["theta", "p", "pe_block", "one_minus_b_squared", "residual", "helstrom_bit_error"])
    for theta in np.linspace(0.0, math.pi / 2, args.points):
        ch = ChannelVector.from_thetas(theta, pair.n)
        pe = block_error_psc(pair, ch)
        dual = 1.0 - b_squared_direct(pair, ch)
        writer.writerow([f"{theta:.6f}", f"{dual_parameter(theta):.6f}", f"{pe:.12g}", f"{dual:.12g}",
                         f"{abs(pe - dual):.3e}", f"{helstrom_error(theta):.12g}"])


if __name__ == "__main__":
    main()
