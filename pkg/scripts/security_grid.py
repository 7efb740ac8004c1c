#!/usr/bin/env python3
"""Parameter exploration: protocol forgery bounds over a (lam, n, alpha) grid.

Prints a table of raw and clamped bound values plus the largest query budget
q that keeps each bound under the requested security target.  The forgery
bound's dominant term is 32 q^2 (1-alpha)^(lam//n), so small n (many
challenges per oracle output) is what buys security.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from poswkit import bounds  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--target-bits", type=int, default=40)
    parser.add_argument("--q", type=int, default=2**40, help="query budget to evaluate at")
    parser.add_argument("--out", help="write the table JSON here")
    args = parser.parse_args()

    rows = []
    for lam in (128, 256):
        for n in (8, 10, 16, 20):
            for alpha in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                params = {"alpha": alpha, "lam": lam, "n": n}
                raw = bounds.posw_bound(args.q, alpha, lam, n)
                max_q = bounds.max_secure_q("posw", params, args.target_bits)
                rows.append(
                    {
                        "lam": lam,
                        "n": n,
                        "alpha": float(alpha),
                        "k": lam // n,
                        "q": args.q,
                        "raw": float(raw),
                        "clamped": bounds.clamp(raw),
                        "max_secure_q": max_q,
                    }
                )
    table = {"bound": "posw", "target_bits": args.target_bits, "rows": rows}
    text = json.dumps(table, indent=2)
    if args.out:
        pathlib.Path(args.out).write_text(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    main()
