#!/usr/bin/env python3
"""Smallest window meeting the 3% criterion for every field size, per ensemble.

Also prints, for each rung of the ladder, which field sizes passed.
"""

from __future__ import annotations

import argparse

from nbsc.cli import parse_int_range
from nbsc.protograph import catalog
from nbsc.threshold_search import NotFoundWithinCap, SearchConfig, find_w_star


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ensembles", default="C36ms1,C36ms2,C24")
    ap.add_argument("--channel", choices=("bec", "awgn"), default="bec")
    ap.add_argument("--m", default="1..5")
    ap.add_argument("--ladder", default="2..60")
    ap.add_argument("--fraction", type=float, default=0.03)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    cfg = SearchConfig(seed=args.seed)
    for name in args.ensembles.split(","):
        ens = catalog(name)
        try:
            ws = find_w_star(ens, args.channel, parse_int_range(args.m), args.fraction,
                             parse_int_range(args.ladder), config=cfg)
        except NotFoundWithinCap as exc:
            print(f"{name}: {exc}")
            continue
        fs = " ".join(f"m{m}={v:.4f}" for m, v in ws.fs.items())
        print(f"{name}: W*={ws.W}  FS {fs}")
        for W, flags in ws.checked:
            print(f"  W={W:3d} " + " ".join(f"m{m}:{int(ok)}" for m, ok in flags.items()))


if __name__ == "__main__":
    main()
