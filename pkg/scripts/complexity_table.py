#!/usr/bin/env python3
"""Per-window complexity order against field size for FS (W = L + ms) and WD."""

from __future__ import annotations

import argparse

from nbsc.complexity import complexity_order


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=int, default=2)
    ap.add_argument("--windows", default="5,10,101")
    ap.add_argument("--mmax", type=int, default=10)
    args = ap.parse_args()
    windows = [int(w) for w in args.windows.split(",")]
    cols = [(dv, W) for dv in (2, 3) for W in windows]
    print("m,q," + ",".join(f"dv{dv}_W{W}" for dv, W in cols))
    for m in range(1, args.mmax + 1):
        print(f"{m},{2 ** m}," + ",".join(str(complexity_order(dv, args.c, W, m)) for dv, W in cols))


if __name__ == "__main__":
    main()
