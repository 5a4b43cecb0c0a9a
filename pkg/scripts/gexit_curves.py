"""GEXIT curves of one bit on both sides of the duality, as JSON.

For each h' in a grid the dual g'_i and primal g_i are estimated by finite
differences; their sum should be 1 everywhere.

Usage: python3 scripts/gexit_curves.py --code hamming:7,4 --bit 1 --background 0.1
"""

from __future__ import annotations

import argparse
import json

import numpy as np

from cqduality import build_pair, load_code
from cqduality.channelmodels import ChannelVector, eta_inverse
from cqduality.entropyduality import gexit_duality_check


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--code", default="hamming:7,4")
    parser.add_argument("--bit", type=int, default=1, help="1-based bit position")
    parser.add_argument("--background", type=float, default=0.1, help="BSC p on every other bit")
    parser.add_argument("--points", type=int, default=21)
    parser.add_argument("--step", type=float, default=1e-3)
    args = parser.parse_args()

    pair = build_pair(load_code(args.code))
    base = ChannelVector.from_ps(args.background, pair.n)
    rows = []
    for h in np.linspace(0.0, 1.0, args.points):
        ch = base.with_bit(args.bit - 1, p=eta_inverse(float(h)))
        r = gexit_duality_check(pair, ch, args.bit - 1, args.step)
        rows.append({"h_prime": r.h_prime, "g_dual": r.g_dual, "g_primal": r.g_primal,
                     "sum": r.total, "residual": r.residual})
    print(json.dumps({"code": args.code, "bit": args.bit, "background_p": args.background, "curve": rows},
                     indent=2))


if __name__ == "__main__":
    main()
