#!/usr/bin/env python3
"""FS and WD erasure thresholds of the catalog ensembles over field sizes.

    python scripts/bec_sweep.py --m 1..6 --windows 5,7,10,30 --out results/bec.csv
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from nbsc.cli import parse_int_range
from nbsc.report import emit, write_report
from nbsc.threshold_search import SearchConfig, SweepItem, sweep


@dataclass
class BecSweep:
    ensembles: list[str] = field(default_factory=lambda: ["B24", "B36", "C24", "C36ms1", "C36ms2"])
    ms: list[int] = field(default_factory=lambda: list(range(1, 7)))
    windows: list[int] = field(default_factory=lambda: [5, 7, 10, 30])
    tol: float = 1e-4
    workers: int | None = None
    checkpoint: str | None = None

    def items(self):
        for name in self.ensembles:
            for m in self.ms:
                yield SweepItem(name, m, "fs")
                if name.startswith("C"):
                    for W in self.windows:
                        yield SweepItem(name, m, "wd", W)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ensembles", default="B24,B36,C24,C36ms1,C36ms2")
    ap.add_argument("--m", default="1..6")
    ap.add_argument("--windows", default="5,7,10,30")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--checkpoint", default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    job = BecSweep(args.ensembles.split(","), parse_int_range(args.m), parse_int_range(args.windows),
                   workers=args.workers, checkpoint=args.checkpoint)
    results = sweep(list(job.items()), SearchConfig(tol_bec=job.tol), job.workers, job.checkpoint)
    write_report(emit(results), args.out)


if __name__ == "__main__":
    main()
