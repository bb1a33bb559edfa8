"""H_2 pair created by deleting the four atoms around one tetrahedral void of FCC and HCP patches."""

import argparse
import math

from cladder.filtrations import close_packed_patch, thinned_void_pair

ANALYTIC = {
    "ABC": (2 * math.sqrt(3) / 3, math.sqrt(22) / 2),
    "AB": (2 * math.sqrt(3) / 3, 11 * math.sqrt(6) / 12),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=float, default=4.2, help="patch radius around the void (nn distance 2)")
    ap.add_argument("--r-max", type=float, default=2.4, help="largest Čech radius computed")
    args = ap.parse_args()
    for stacking, name in (("ABC", "FCC"), ("AB", "HCP")):
        pts, _ = close_packed_patch(stacking, args.radius)
        got = thinned_void_pair(stacking, args.radius, args.r_max, cap=len(pts))
        want = ANALYTIC[stacking]
        print(f"{name}: {len(pts)} points  pair {got}  analytic ({want[0]:.9f}, {want[1]:.9f})")


if __name__ == "__main__":
    main()
