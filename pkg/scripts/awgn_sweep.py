#!/usr/bin/env python3
"""EXIT thresholds (Eb/N0 in dB) on the BPSK AWGN channel.

    python scripts/awgn_sweep.py --m 1..3 --windows 7,10 --seed 2024
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from nbsc.cli import parse_int_range
from nbsc.report import emit, write_report
from nbsc.threshold_search import SearchConfig, SweepItem, sweep


@dataclass
class AwgnSweep:
    seed: int
    ensembles: list[str] = field(default_factory=lambda: ["B24", "B36", "C24", "C36ms1", "C36ms2"])
    ms: list[int] = field(default_factory=lambda: [1, 2, 3])
    windows: list[int] = field(default_factory=lambda: [7, 10])
    samples: int = 100_000
    rate_mode: str = "RL"

    def items(self):
        for name in self.ensembles:
            for m in self.ms:
                yield SweepItem(name, m, "fs", None, "awgn")
                if name.startswith("C"):
                    for W in self.windows:
                        yield SweepItem(name, m, "wd", W, "awgn")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ensembles", default="B24,B36,C24,C36ms1,C36ms2")
    ap.add_argument("--m", default="1..3")
    ap.add_argument("--windows", default="7,10")
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--rate-mode", choices=("RL", "R"), default="RL")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    job = AwgnSweep(args.seed, args.ensembles.split(","), parse_int_range(args.m), parse_int_range(args.windows),
                    args.samples, args.rate_mode)
    cfg = SearchConfig(seed=job.seed, samples=job.samples, rate_mode=job.rate_mode)
    write_report(emit(sweep(list(job.items()), cfg, args.workers)), args.out)


if __name__ == "__main__":
    main()
