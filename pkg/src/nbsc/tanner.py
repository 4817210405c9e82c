"""
Protograph Tanner graphs and the two message-passing schedules.

Both analysis engines (erasure density evolution and EXIT) pass messages on
the edges of a protograph. A base-matrix entry ``k`` becomes ``k`` distinct
edge instances. The engines only supply node updates; this module owns the
flooding and windowed schedules, the convergence test and the stall test.

An engine must provide

* ``reset()``: put every edge in its initial state,
* ``cn_pass(nodes)`` and ``vn_pass(nodes)``: update outgoing messages of the
  given check / variable nodes; ``vn_pass`` also refreshes
  ``engine.residual[v]`` (probability or information left to resolve at
  variable ``v``),
* ``residual``: float array over variable nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .protograph import BaseMatrix, ScEnsemble

__all__ = ["TannerGraph", "tanner_graph", "EvalResult", "DecodeTarget", "run_flooding", "run_windowed"]


@dataclass(frozen=True)
class DecodeTarget:
    """Stopping rule shared by the schedules.

    ``delta`` is the residual below which a variable node counts as
    recovered. A pass whose largest residual change is below ``stall_tol``
    ends the run as a failure.
    """

    delta: float = 1e-6
    max_iters: int = 100_000
    stall_tol: float = 1e-12

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass
class TannerGraph:
    n_vars: int
    n_checks: int
    edge_vn: np.ndarray
    edge_cn: np.ndarray
    vn_ptr: np.ndarray
    vn_adj: np.ndarray
    cn_ptr: np.ndarray
    cn_adj: np.ndarray
    vars_per_block: int
    checks_per_block: int
    n_var_blocks: int
    n_check_blocks: int

    @property
    def n_edges(self) -> int:
        return len(self.edge_vn)

    @property
    def max_vn_degree(self) -> int:
        return int(np.diff(self.vn_ptr).max())

    @property
    def max_cn_degree(self) -> int:
        return int(np.diff(self.cn_ptr).max())

    def var_block_nodes(self, start: int, stop: int) -> np.ndarray:
        """Variable nodes of 0-based block columns ``start:stop``."""
        return np.arange(start * self.vars_per_block, stop * self.vars_per_block, dtype=np.int64)

    def check_block_nodes(self, start: int, stop: int) -> np.ndarray:
        return np.arange(start * self.checks_per_block, stop * self.checks_per_block, dtype=np.int64)

    def block_profile(self, values: np.ndarray) -> np.ndarray:
        """Largest per-node value within each block column."""
        return values.reshape(self.n_var_blocks, self.vars_per_block).max(axis=1)


def _csr(owner: np.ndarray, n: int):
    order = np.argsort(owner, kind="stable")
    counts = np.bincount(owner, minlength=n)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, order.astype(np.int64)


@lru_cache(maxsize=64)
def tanner_graph(ens) -> TannerGraph:
    """Edge-instance graph of a block or coupled protograph (cached)."""
    if isinstance(ens, ScEnsemble):
        H = ens.coupled
        vpb, cpb = ens.c, ens.rows_per_block
        nvb, ncb = ens.L, ens.L + ens.ms
    elif isinstance(ens, BaseMatrix):
        H = ens.array
        cpb, vpb = H.shape
        nvb = ncb = 1
    else:
        raise TypeError(f"expected BaseMatrix or ScEnsemble, got {type(ens).__name__}")
    rows, cols = np.nonzero(H)
    mult = H[rows, cols]
    edge_cn = np.repeat(rows, mult).astype(np.int64)
    edge_vn = np.repeat(cols, mult).astype(np.int64)
    vn_ptr, vn_adj = _csr(edge_vn, H.shape[1])
    cn_ptr, cn_adj = _csr(edge_cn, H.shape[0])
    return TannerGraph(
        H.shape[1], H.shape[0], edge_vn, edge_cn, vn_ptr, vn_adj, cn_ptr, cn_adj,
        vpb, cpb, nvb, ncb,
    )


@dataclass
class EvalResult:
    """Outcome of one decoding analysis at a fixed channel parameter.

    ``residual_profile`` holds the largest final residual of each block
    column. ``failed_position`` is the 1-based window position at which a
    windowed run gave up (``None`` otherwise).
    """

    success: bool
    iterations: int
    residual_profile: np.ndarray
    failed_position: int | None = None
    reason: str = ""
    history: list = field(default_factory=list, repr=False)


def run_flooding(graph: TannerGraph, engine, target: DecodeTarget, record: bool = False) -> EvalResult:
    all_cn = np.arange(graph.n_checks, dtype=np.int64)
    all_vn = np.arange(graph.n_vars, dtype=np.int64)
    engine.reset()
    history = []
    prev = engine.residual.copy()
    reason = "max_iters"
    success = False
    it = 0
    while it < target.max_iters:
        engine.cn_pass(all_cn)
        engine.vn_pass(all_vn)
        it += 1
        res = engine.residual
        if record:
            history.append(res.copy())
        if res.max() < target.delta:
            success, reason = True, "converged"
            break
        if np.max(np.abs(res - prev)) < target.stall_tol:
            reason = "stalled"
            break
        prev = res.copy()
    return EvalResult(success, it, graph.block_profile(engine.residual), None, reason, history)


def run_windowed(graph: TannerGraph, engine, W: int, target: DecodeTarget, record: bool = False) -> EvalResult:
    """Slide a ``W``-block window over the chain, one target block at a time.

    At position ``t`` the window holds check block rows ``t..t+W-1`` and
    variable block columns ``t..t+W-1`` (clipped at the chain end). Messages
    persist across positions, so a window starts from whatever its
    predecessor left on shared edges, and variables that already left the
    window keep feeding their last outgoing messages to the checks. The
    iteration budget covers the whole run, not each position.
    """
    if not 1 <= W <= graph.n_check_blocks:
        raise ValueError(f"window size {W} outside 1..{graph.n_check_blocks}")
    engine.reset()
    history = []
    total = 0
    for t in range(graph.n_var_blocks):
        cns = graph.check_block_nodes(t, min(t + W, graph.n_check_blocks))
        vns = graph.var_block_nodes(t, min(t + W, graph.n_var_blocks))
        targets = graph.var_block_nodes(t, t + 1)
        if engine.residual[targets].max() < target.delta:
            continue
        prev = engine.residual[vns].copy()
        while True:
            engine.cn_pass(cns)
            engine.vn_pass(vns)
            total += 1
            res = engine.residual[vns]
            if record:
                history.append((t + 1, engine.residual.copy()))
            if engine.residual[targets].max() < target.delta:
                break
            reason = None
            if np.max(np.abs(res - prev)) < target.stall_tol:
                reason = "stalled"
            elif total >= target.max_iters:
                reason = "max_iters"
            if reason:
                return EvalResult(False, total, graph.block_profile(engine.residual), t + 1, reason, history)
            prev = res.copy()
    return EvalResult(True, total, graph.block_profile(engine.residual), None, "converged", history)
