#!/usr/bin/env python3
"""Survey the bigraded degree-two Hochschild cohomology.

For each size (m, n) up to the requested bounds, prints the dimension
of HH^2 in every even Adams degree of the support range, the wall
clock per degree, and, where the bar complex fits the capacity bound,
the independent bar-complex figure next to it.

Usage: python scripts/hh2_survey.py [--max-m 3] [--max-n 3] [--bar]
"""

import argparse
import sys

from arcdual import hochschild as hh
from arcdual.errors import CapacityError


def survey(max_m: int, max_n: int, with_bar: bool) -> None:
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            print(f"== ({m}, {n}) ==")
            rows = hh.hh2_table(m, n)
            total = 0
            for q, dim, seconds in rows:
                line = f"  q={q:<3d} dim={dim:<3d} [{seconds:7.3f}s]"
                if with_bar:
                    try:
                        bar = hh.hh2_bar_oracle(m, n, q)
                        tag = "agree" if bar == dim else "MISMATCH"
                        line += f"  bar={bar} ({tag})"
                    except CapacityError:
                        line += "  bar=(over capacity)"
                print(line)
                total += dim
            critical = 2 * m * n - 6
            if critical >= 0 and m >= 2 and n >= 2:
                cert = hh.hh2_certificate(m, n, critical)
                print(
                    f"  critical q={critical}: kernel {cert.kernel_dim}, "
                    f"image rank {cert.image_rank}, dim {cert.dimension}"
                )
            print(f"  total over even degrees: {total}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-m", type=int, default=3)
    parser.add_argument("--max-n", type=int, default=3)
    parser.add_argument(
        "--bar",
        action="store_true",
        help="also run the bar-complex oracle where capacity allows",
    )
    args = parser.parse_args()
    survey(args.max_m, args.max_n, args.bar)
    return 0


if __name__ == "__main__":
    sys.exit(main())
