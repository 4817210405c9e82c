"""
Protograph EXIT analysis of GF(2^m) codes on the BPSK/AWGN channel.

Edge messages are scalar mutual informations, normalized per bit. A message
is modelled as the permutation-invariant Gaussian LLR vector of dimension
``q - 1`` with mean ``s2/2`` and covariance ``s2`` on the diagonal, ``s2/2``
off it; ``J_m(s2)`` maps the parameter to mutual information and is tabulated
by (quasi-)Monte Carlo. Variable nodes add Gaussian parameters; check nodes
use the duality approximation ``1 - J(sum J^-1(1 - I))``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit
from scipy.optimize import isotonic_regression
from scipy.special import logsumexp, ndtri
from scipy.stats import qmc

from .capacity import ebn0_to_sigma2
from .protograph import ScEnsemble, design_rate
from .tanner import DecodeTarget, EvalResult, run_flooding, run_windowed, tanner_graph

__all__ = [
    "MiTable",
    "AwgnChannel",
    "OutOfRange",
    "AWGN_TARGET",
    "build_mi_table",
    "get_mi_table",
    "mi_inverse",
    "channel_mi",
    "exit_vn",
    "exit_cn",
    "AwgnEngine",
    "evaluate_fs_awgn",
    "evaluate_wd_awgn",
    "save_mi_table",
    "load_mi_table",
]

DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 2024
S2_MIN, S2_MAX, GRID_POINTS = 1e-3, 1e3, 200
AWGN_TARGET = DecodeTarget(delta=1e-4)
_CHUNK = 1 << 22


class OutOfRange(ValueError):
    pass


def _sobol_normals(dim: int, samples: int, seed: int) -> np.ndarray:
    n_log2 = max(1, math.ceil(math.log2(samples)))
    u = qmc.Sobol(d=dim, scramble=True, seed=seed).random_base2(n_log2)
    return ndtri(np.clip(u, 1e-16, 1 - 1e-16))


def _mean_log2_partition(llr: np.ndarray) -> float:
    """Average of ``log2(1 + sum_i exp(-llr_i))`` over rows."""
    z = np.concatenate([np.zeros((llr.shape[0], 1)), -llr], axis=1)
    return float(np.mean(logsumexp(z, axis=1))) / math.log(2.0)


def _symbol_mi_sample(s2: float, m: int, samples: int, seed: int) -> float:
    q = 1 << m
    z = _sobol_normals(q, samples, seed)
    rows = max(1, _CHUNK // q)
    acc, n = 0.0, 0
    scale = math.sqrt(s2 / 2.0)
    for start in range(0, z.shape[0], rows):
        blk = z[start:start + rows]
        llr = s2 / 2.0 + scale * (blk[:, :1] + blk[:, 1:])
        acc += _mean_log2_partition(llr) * blk.shape[0]
        n += blk.shape[0]
    return (m - acc / n) / m


@dataclass(frozen=True)
class MiTable:
    """Monotone table ``s2 -> J_m(s2)`` on a logarithmic grid."""

    m: int
    samples: int
    seed: int
    s2: np.ndarray = field(repr=False)
    raw: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def ceiling(self) -> float:
        return float(self.values[-1])

    @property
    def _lx0(self) -> float:
        return math.log(self.s2[0])

    @property
    def _hx(self) -> float:
        return (math.log(self.s2[-1]) - math.log(self.s2[0])) / (len(self.s2) - 1)

    def J(self, s2):
        s2 = np.asarray(s2, dtype=float)
        out = _j_vec(s2.ravel(), self._lx0, self._hx, self.values)
        return out.reshape(s2.shape) if s2.ndim else float(out[0])


def build_mi_table(m: int, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                   grid: np.ndarray | None = None) -> MiTable:
    """Tabulate ``J_m`` by scrambled-Sobol integration, one seed per grid point.

    The raw estimates are made non-decreasing by isotonic regression.
    """
    if samples < 10_000:
        raise ValueError("need at least 1e4 samples per grid point")
    s2 = np.logspace(math.log10(S2_MIN), math.log10(S2_MAX), GRID_POINTS) if grid is None else np.asarray(grid, float)
    raw = np.array([_symbol_mi_sample(x, m, samples, seed + i) for i, x in enumerate(s2)])
    mono = np.clip(isotonic_regression(raw).x, 0.0, 1.0)
    for arr in (s2, raw, mono):
        arr.flags.writeable = False
    return MiTable(m, samples, seed, s2, raw, mono)


def _cache_dir() -> str | None:
    return os.environ.get("NBSC_CACHE_DIR")


@lru_cache(maxsize=32)
def get_mi_table(m: int, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> MiTable:
    """Build or reuse the table for ``(m, samples, seed)``.

    With ``NBSC_CACHE_DIR`` set, tables are also persisted there.
    """
    cache = _cache_dir()
    path = os.path.join(cache, f"mi_m{m}_n{samples}_s{seed}.json") if cache else None
    if path and os.path.exists(path):
        return load_mi_table(path)
    table = build_mi_table(m, samples, seed)
    if path:
        os.makedirs(cache, exist_ok=True)
        tmp = f"{path}.{os.getpid()}.tmp"
        save_mi_table(table, tmp)
        os.replace(tmp, path)
    return table


def mi_table_to_dict(table: MiTable) -> dict:
    return {
        "m": table.m,
        "samples": table.samples,
        "seed": table.seed,
        "s2": [float(x) for x in table.s2],
        "raw": [float(x) for x in table.raw],
        "values": [float(x) for x in table.values],
    }


def save_mi_table(table: MiTable, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(mi_table_to_dict(table), fh)
        fh.write("\n")


def load_mi_table(path: str) -> MiTable:
    with open(path) as fh:
        d = json.load(fh)
    arrs = [np.array(d[k], dtype=float) for k in ("s2", "raw", "values")]
    for arr in arrs:
        arr.flags.writeable = False
    return MiTable(int(d["m"]), int(d["samples"]), int(d["seed"]), *arrs)


@njit(cache=True)
def _j(s2, lx0, hx, jv):
    if s2 <= 0.0:
        return 0.0
    s2min = math.exp(lx0)
    if s2 < s2min:
        return jv[0] * s2 / s2min
    x = (math.log(s2) - lx0) / hx
    k = int(x)
    if k >= jv.shape[0] - 1:
        return 1.0
    f = x - k
    return jv[k] + f * (jv[k + 1] - jv[k])


@njit(cache=True)
def _jinv(mi, lx0, hx, jv):
    n = jv.shape[0]
    if mi <= 0.0:
        return 0.0
    if mi >= jv[n - 1]:
        return math.exp(lx0 + hx * (n - 1))
    if mi < jv[0]:
        return mi / jv[0] * math.exp(lx0)
    lo, hi = 0, n - 1
    # largest k with jv[k] <= mi; jv[hi] > mi holds throughout
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if jv[mid] <= mi:
            lo = mid
        else:
            hi = mid
    f = (mi - jv[lo]) / (jv[lo + 1] - jv[lo])
    return math.exp(lx0 + hx * (lo + f))


@njit(cache=True)
def _j_vec(s2, lx0, hx, jv):
    out = np.empty(s2.shape[0])
    for i in range(s2.shape[0]):
        out[i] = _j(s2[i], lx0, hx, jv)
    return out


def mi_inverse(table: MiTable, mi: float, with_flag: bool = False):
    """Gaussian parameter whose tabulated MI equals ``mi``.

    Values at or above the table ceiling saturate at the grid maximum; pass
    ``with_flag=True`` to also get a ``saturated`` indicator.
    """
    if not 0.0 <= mi <= 1.0:
        raise OutOfRange(f"mutual information must lie in [0, 1], got {mi}")
    s2 = _jinv(float(mi), table._lx0, table._hx, table.values)
    saturated = mi >= table.ceiling
    return (s2, saturated) if with_flag else s2


@dataclass(frozen=True)
class AwgnChannel:
    ebn0_db: float
    rate: float

    @property
    def sigma2(self) -> float:
        return ebn0_to_sigma2(self.ebn0_db, self.rate)

    @property
    def llr_mean(self) -> float:
        return 2.0 / self.sigma2

    @property
    def llr_var(self) -> float:
        return 4.0 / self.sigma2


@lru_cache(maxsize=4096)
def _channel_mi(m: int, ebn0_db: float, rate: float, samples: int, seed: int) -> float:
    ch = AwgnChannel(ebn0_db, rate)
    z = _sobol_normals(m, samples, seed)
    bit_llr = ch.llr_mean + math.sqrt(ch.llr_var) * z
    # symbol i differs from the all-zero symbol in the bits set in i
    bits = (np.arange(1, 1 << m)[None, :] >> np.arange(m)[:, None]) & 1
    rows = max(1, _CHUNK // (1 << m))
    acc = 0.0
    for start in range(0, bit_llr.shape[0], rows):
        blk = bit_llr[start:start + rows]
        acc += _mean_log2_partition(blk @ bits) * blk.shape[0]
    return (m - acc / bit_llr.shape[0]) / m


def channel_mi(m: int, ch: AwgnChannel, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> float:
    """Per-bit MI between a uniform GF(2^m) symbol and its ``m`` BPSK observations."""
    return _channel_mi(m, float(ch.ebn0_db), float(ch.rate), samples, seed)


def exit_vn(channel_I: float, incoming, table: MiTable) -> float:
    tot = mi_inverse(table, channel_I) + sum(mi_inverse(table, x) for x in incoming)
    return table.J(tot)


def exit_cn(incoming, table: MiTable) -> float:
    tot = sum(mi_inverse(table, 1.0 - x) for x in incoming)
    return 1.0 - table.J(tot)


@njit(cache=True)
def _vn_pass(nodes, ptr, adj, c2v, v2c, s2ch, lx0, hx, jv, res, buf):
    for v in nodes:
        s = ptr[v]
        d = ptr[v + 1] - s
        tot = s2ch
        for i in range(d):
            buf[i] = _jinv(c2v[adj[s + i]], lx0, hx, jv)
            tot += buf[i]
        for i in range(d):
            v2c[adj[s + i]] = _j(tot - buf[i], lx0, hx, jv)
        res[v] = 1.0 - _j(tot, lx0, hx, jv)


@njit(cache=True)
def _cn_pass(nodes, ptr, adj, v2c, c2v, lx0, hx, jv, buf):
    for r in nodes:
        s = ptr[r]
        d = ptr[r + 1] - s
        tot = 0.0
        for i in range(d):
            buf[i] = _jinv(1.0 - v2c[adj[s + i]], lx0, hx, jv)
            tot += buf[i]
        for i in range(d):
            c2v[adj[s + i]] = 1.0 - _j(tot - buf[i], lx0, hx, jv)


class AwgnEngine:
    """Message state of one EXIT run; residual is ``1 - a-posteriori MI``."""

    def __init__(self, graph, table: MiTable, channel_I: float):
        self.graph = graph
        self.table = table
        self.channel_I = channel_I
        self._args = (table._lx0, table._hx, np.ascontiguousarray(table.values))
        self.s2ch = _jinv(channel_I, *self._args)
        self._buf = np.zeros(max(graph.max_vn_degree, graph.max_cn_degree))
        self.c2v = np.zeros(graph.n_edges)
        self.v2c = np.zeros(graph.n_edges)
        self.residual = np.zeros(graph.n_vars)
        self.reset()

    def reset(self):
        self.c2v[:] = 0.0
        self.v2c[:] = self.channel_I
        self.residual[:] = 1.0 - _j(self.s2ch, *self._args)

    def cn_pass(self, nodes):
        g = self.graph
        _cn_pass(nodes, g.cn_ptr, g.cn_adj, self.v2c, self.c2v, *self._args, self._buf)

    def vn_pass(self, nodes):
        g = self.graph
        _vn_pass(nodes, g.vn_ptr, g.vn_adj, self.c2v, self.v2c, self.s2ch, *self._args, self.residual, self._buf)


def channel_rate(ens, rate_mode: str = "RL") -> float:
    """Rate used to turn Eb/N0 into a noise level: terminated ``R_L`` or block ``b/c``."""
    if rate_mode == "RL":
        return float(design_rate(ens))
    if rate_mode == "R":
        blk = ens.block if isinstance(ens, ScEnsemble) else ens
        return float(blk.design_rate)
    raise ValueError(f"rate_mode must be 'RL' or 'R', got {rate_mode!r}")


def _engine(ens, m, ebn0_db, table, samples, seed, rate_mode):
    table = table if table is not None else get_mi_table(m, samples, seed)
    if table.m != m:
        raise ValueError(f"MI table is for m={table.m}, not m={m}")
    ch = AwgnChannel(ebn0_db, channel_rate(ens, rate_mode))
    return AwgnEngine(tanner_graph(ens), table, channel_mi(m, ch, samples, seed))


def evaluate_fs_awgn(ens, m: int, ebn0_db: float, table: MiTable | None = None, target: DecodeTarget | None = None,
                     samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, rate_mode: str = "RL",
                     record: bool = False) -> EvalResult:
    engine = _engine(ens, m, ebn0_db, table, samples, seed, rate_mode)
    return run_flooding(engine.graph, engine, target or AWGN_TARGET, record)


def evaluate_wd_awgn(ens: ScEnsemble, m: int, W: int, ebn0_db: float, table: MiTable | None = None,
                     target: DecodeTarget | None = None, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                     rate_mode: str = "RL", record: bool = False) -> EvalResult:
    if not isinstance(ens, ScEnsemble):
        raise TypeError("windowed decoding needs a coupled ensemble")
    engine = _engine(ens, m, ebn0_db, table, samples, seed, rate_mode)
    return run_windowed(engine.graph, engine, W, target or AWGN_TARGET, record)
