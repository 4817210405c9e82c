"""
Threshold location by bisection, parameter sweeps and window-size search.

A threshold is the boundary of a monotone success predicate: the largest
erasure probability that still decodes on the BEC, the smallest Eb/N0 on the
AWGN channel. ``bisect`` works in either orientation; it only needs one
point known to succeed (``good``) and one known to fail (``bad``).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .capacity import shannon_limit_db
from .de_bec import evaluate_fs, evaluate_wd
from .exit_awgn import (
    AWGN_TARGET,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    channel_rate,
    evaluate_fs_awgn,
    evaluate_wd_awgn,
    get_mi_table,
)
from .protograph import ScEnsemble, design_rate, load_ensemble
from .tanner import DecodeTarget

__all__ = [
    "BadBracket",
    "NotFoundWithinCap",
    "Bisection",
    "ThresholdResult",
    "SearchConfig",
    "SweepItem",
    "bisect",
    "bec_threshold",
    "awgn_threshold",
    "compute_threshold",
    "sweep",
    "parse_schedule",
    "find_w_star",
    "WStar",
]


class BadBracket(ValueError):
    pass


class NotFoundWithinCap(RuntimeError):
    pass


@dataclass
class Bisection:
    threshold: float
    good: float
    bad: float
    evals: int

    @property
    def width(self) -> float:
        return abs(self.bad - self.good)


def bisect(predicate, good: float, bad: float, tol: float, check: bool = True) -> Bisection:
    """Narrow ``[good, bad]`` to width ``tol`` around the predicate's switch point.

    With ``check`` the endpoints are evaluated first and ``BadBracket`` is
    raised unless ``predicate(good)`` holds and ``predicate(bad)`` does not.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    evals = 0
    if check:
        evals += 2
        if not predicate(good):
            raise BadBracket(f"predicate fails at the 'good' end {good}")
        if predicate(bad):
            raise BadBracket(f"predicate succeeds at the 'bad' end {bad}")
    while abs(bad - good) > tol:
        mid = 0.5 * (good + bad)
        evals += 1
        if predicate(mid):
            good = mid
        else:
            bad = mid
    return Bisection(0.5 * (good + bad), good, bad, evals)


@dataclass
class ThresholdResult:
    """One located threshold (``threshold`` is an erasure rate or Eb/N0 in dB)."""

    ensemble: str
    m: int
    channel: str
    schedule: str
    W: int | None
    threshold: float | None
    good: float | None = None
    bad: float | None = None
    evals: int = 0
    capacity_gap: float | None = None
    seed: int | None = None
    error: str = ""

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def bracket(self) -> float | None:
        if self.good is None or self.bad is None:
            return None
        return abs(self.bad - self.good)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["q"] = self.q
        d["bracket"] = self.bracket
        return d


@dataclass(frozen=True)
class SearchConfig:
    """Knobs shared by every threshold computation in a run."""

    delta: float = 1e-6
    tol_bec: float = 1e-4
    tol_awgn_db: float = 0.01
    max_iters: int = 100_000
    stall_tol: float = 1e-12
    awgn_delta: float = AWGN_TARGET.delta
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    rate_mode: str = "RL"
    L: int | None = None
    bec_bracket: tuple[float, float] = (0.0, 1.0)
    awgn_bracket_db: tuple[float, float] | None = None

    @property
    def bec_target(self) -> DecodeTarget:
        return DecodeTarget(self.delta, self.max_iters, self.stall_tol)

    @property
    def awgn_target(self) -> DecodeTarget:
        return DecodeTarget(self.awgn_delta, self.max_iters, self.stall_tol)


def _label(ens) -> str:
    return ens.name or "custom"


def _check_schedule(ens, schedule, W):
    if schedule == "wd":
        if not isinstance(ens, ScEnsemble):
            raise ValueError("windowed schedule needs a coupled ensemble")
        if W is None:
            raise ValueError("windowed schedule needs a window size")
    elif schedule != "fs":
        raise ValueError(f"unknown schedule {schedule!r}")


def bec_threshold(ens, m: int, schedule: str = "fs", W: int | None = None,
                  config: SearchConfig = SearchConfig()) -> ThresholdResult:
    _check_schedule(ens, schedule, W)
    target = config.bec_target
    if schedule == "fs":
        def pred(eps):
            return evaluate_fs(ens, m, eps, target).success
    else:
        def pred(eps):
            return evaluate_wd(ens, m, W, eps, target).success
    good, bad = config.bec_bracket
    b = bisect(pred, good, bad, config.tol_bec)
    gap = (1.0 - float(design_rate(ens))) - b.threshold
    return ThresholdResult(_label(ens), m, "bec", schedule, W if schedule == "wd" else None,
                           b.threshold, b.good, b.bad, b.evals, gap, None)


def awgn_threshold(ens, m: int, schedule: str = "fs", W: int | None = None,
                   config: SearchConfig = SearchConfig()) -> ThresholdResult:
    _check_schedule(ens, schedule, W)
    table = get_mi_table(m, config.samples, config.seed)
    target = config.awgn_target
    kw = dict(table=table, target=target, samples=config.samples, seed=config.seed, rate_mode=config.rate_mode)
    if schedule == "fs":
        def pred(db):
            return evaluate_fs_awgn(ens, m, db, **kw).success
    else:
        def pred(db):
            return evaluate_wd_awgn(ens, m, W, db, **kw).success
    limit = shannon_limit_db(channel_rate(ens, config.rate_mode))
    good, bad = config.awgn_bracket_db or (limit + 6.0, limit - 1.0)
    b = bisect(pred, good, bad, config.tol_awgn_db)
    return ThresholdResult(_label(ens), m, "awgn", schedule, W if schedule == "wd" else None,
                           b.threshold, b.good, b.bad, b.evals, b.threshold - limit, config.seed)


@dataclass(frozen=True)
class SweepItem:
    ensemble: str
    m: int
    schedule: str = "fs"
    W: int | None = None
    channel: str = "bec"


def parse_schedule(text: str) -> tuple[str, int | None]:
    """``"fs"`` or ``"wd:<W>"``."""
    text = text.strip().lower()
    if text == "fs":
        return "fs", None
    if text.startswith("wd:"):
        W = int(text[3:])
        if W < 1:
            raise ValueError(f"window size must be positive in {text!r}")
        return "wd", W
    raise ValueError(f"schedule must be 'fs' or 'wd:<W>', got {text!r}")


def compute_threshold(item: SweepItem, config: SearchConfig = SearchConfig()) -> ThresholdResult:
    """Run one sweep item; failures come back as a result with ``error`` set."""
    try:
        ens = load_ensemble(item.ensemble, config.L)
        fn = {"bec": bec_threshold, "awgn": awgn_threshold}[item.channel]
        res = fn(ens, item.m, item.schedule, item.W, config)
        res.ensemble = ens.name or item.ensemble
        return res
    except Exception as exc:  # recorded per item, the sweep carries on
        return ThresholdResult(item.ensemble, item.m, item.channel, item.schedule, item.W, None,
                               seed=config.seed if item.channel == "awgn" else None,
                               error=f"{type(exc).__name__}: {exc}")


def _run_item(args):
    return compute_threshold(*args)


def _item_key(item: SweepItem) -> str:
    return json.dumps(asdict(item), sort_keys=True)


def sweep(items, config: SearchConfig = SearchConfig(), workers: int | None = 1,
          checkpoint: str | None = None) -> list[ThresholdResult]:
    """Compute every item independently; results come back in input order.

    With ``checkpoint`` set, finished items are appended to that JSON-lines
    file as they complete and items already present there are not rerun.
    """
    items = list(items)
    done: dict[str, ThresholdResult] = {}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    done[rec["key"]] = ThresholdResult(**rec["result"])
    todo = [it for it in items if _item_key(it) not in done]

    def record(item, res):
        done[_item_key(item)] = res
        if checkpoint:
            with open(checkpoint, "a") as fh:
                payload = {"key": _item_key(item), "result": asdict(res)}
                fh.write(json.dumps(payload, sort_keys=True) + "\n")

    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for item, res in zip(todo, pool.map(_run_item, [(it, config) for it in todo])):
                record(item, res)
    else:
        for item in todo:
            record(item, compute_threshold(item, config))
    return [done[_item_key(it)] for it in items]


@dataclass
class WStar:
    W: int
    channel: str
    fraction: float
    fs: dict[int, float]
    criterion: dict[int, float]
    checked: list[tuple[int, dict[int, bool]]] = field(default_factory=list)


def default_ladder(ens: ScEnsemble) -> list[int]:
    cap = ens.L + ens.ms
    return [W for W in range(2, 41) if W < cap] + [cap]


def find_w_star(ens: ScEnsemble, channel: str, ms, fraction: float = 0.03, ladder=None,
                fs: dict[int, float] | None = None, config: SearchConfig = SearchConfig()) -> WStar:
    """Smallest window whose threshold is within ``fraction`` of FS for every ``m``.

    Climbs ``ladder``. Rather than locating each windowed threshold, each rung
    asks the monotone predicate directly at the criterion point: the WD
    threshold clears ``(1 - fraction) * FS`` exactly when windowed decoding
    succeeds there. On the AWGN channel the criterion is the FS threshold
    raised by ``fraction`` in linear SNR.
    """
    ms = list(ms)
    fs = dict(fs or {})
    for m in ms:
        if m not in fs:
            fn = bec_threshold if channel == "bec" else awgn_threshold
            fs[m] = fn(ens, m, "fs", None, config).threshold
    if channel == "bec":
        crit = {m: (1.0 - fraction) * fs[m] for m in ms}

        def ok(m, W):
            return evaluate_wd(ens, m, W, crit[m], config.bec_target).success
    elif channel == "awgn":
        crit = {m: fs[m] + 10.0 * math.log10(1.0 + fraction) for m in ms}

        def ok(m, W):
            table = get_mi_table(m, config.samples, config.seed)
            return evaluate_wd_awgn(ens, m, W, crit[m], table=table, target=config.awgn_target,
                                    samples=config.samples, seed=config.seed,
                                    rate_mode=config.rate_mode).success
    else:
        raise ValueError(f"unknown channel {channel!r}")
    checked = []
    for W in ladder or default_ladder(ens):
        flags = {}
        for m in ms:
            flags[m] = ok(m, W)
            if not flags[m]:
                break
        checked.append((W, flags))
        if all(flags.get(m, False) for m in ms):
            return WStar(W, channel, fraction, fs, crit, checked)
    raise NotFoundWithinCap(f"no window on the ladder meets the {fraction:.0%} criterion")
