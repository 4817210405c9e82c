"""
Protograph density evolution for GF(2^m) codes on the binary erasure channel.

Each edge instance carries a distribution over the dimension (0..m) of the
ambiguity subspace about its variable's symbol. Variable nodes intersect
(kernel ``V``), check nodes add (kernel ``C``); the a-posteriori residual of
a variable is the probability that its ambiguity is not the zero subspace.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .protograph import ScEnsemble
from .subspace_kernels import KernelSet, build_kernels, channel_distribution, point_mass
from .tanner import DecodeTarget, EvalResult, run_flooding, run_windowed, tanner_graph

__all__ = [
    "DecodeTarget",
    "EvalResult",
    "vn_update",
    "cn_update",
    "BecEngine",
    "evaluate_fs",
    "evaluate_wd",
]


def _support(K: np.ndarray):
    n = K.shape[0]
    lo = np.zeros((n, n), dtype=np.int64)
    hi = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            nz = np.nonzero(K[i, j])[0]
            lo[i, j], hi[i, j] = nz[0], nz[-1] + 1
    return lo, hi


@njit(cache=True)
def _combine(a, b, K, lo, hi, out):
    n = a.shape[0]
    for k in range(n):
        out[k] = 0.0
    for i in range(n):
        ai = a[i]
        if ai == 0.0:
            continue
        for j in range(n):
            w = ai * b[j]
            if w == 0.0:
                continue
            for k in range(lo[i, j], hi[i, j]):
                out[k] += w * K[i, j, k]


@njit(cache=True)
def _node_pass(nodes, ptr, adj, inbox, outbox, inflag, outflag, first, ident, K, lo, hi, res, pre, suf, tmp,
               rtol, atol):
    # Leave-one-out combination via prefix/suffix products. ``first`` seeds
    # the prefix (the channel at variables, the identity at checks). A node
    # none of whose inputs moved by more than ``rtol`` (relative) or ``atol``
    # (absolute) since its last update is skipped.
    n = ident.shape[0]
    for v in nodes:
        s = ptr[v]
        d = ptr[v + 1] - s
        dirty = False
        for i in range(d):
            if inflag[adj[s + i]]:
                dirty = True
                inflag[adj[s + i]] = False
        if not dirty:
            continue
        pre[0, :] = first
        for i in range(d):
            _combine(pre[i], inbox[adj[s + i]], K, lo, hi, pre[i + 1])
        suf[d, :] = ident
        for i in range(d - 1, 0, -1):
            _combine(inbox[adj[s + i]], suf[i + 1], K, lo, hi, suf[i])
        for i in range(d):
            e = adj[s + i]
            if i == d - 1:
                tmp[:] = pre[i]
            else:
                _combine(pre[i], suf[i + 1], K, lo, hi, tmp)
            # the combination is multilinear, so a sum error of x in the
            # inputs grows to about (d - 1) x; renormalize every message
            tot = 0.0
            for k in range(n):
                tot += tmp[k]
            changed = False
            for k in range(n):
                val = tmp[k] / tot
                old = outbox[e, k]
                if val != old:
                    if abs(val - old) > max(rtol * max(abs(val), abs(old)), atol):
                        changed = True
                    outbox[e, k] = val
            if changed:
                outflag[e] = True
        tot = 0.0
        r = 0.0
        for k in range(n):
            tot += pre[d, k]
            if k > 0:
                r += pre[d, k]
        res[v] = r / tot


# Renormalization leaves ulp-level jitter on messages sitting at a fixed
# point, and messages in an already-decoded region keep shrinking towards
# zero long after they stop mattering. Changes below these sizes do not wake
# up downstream nodes; both are far below any residual target.
SKIP_RTOL = 1e-14
SKIP_ATOL = 1e-18


class BecEngine:
    """Message state of one erasure density-evolution run.

    ``exact=True`` recomputes every node whose inputs changed at all.
    """

    def __init__(self, graph, kernels: KernelSet, eps: float, exact: bool = False):
        self.graph = graph
        self._tols = (0.0, 0.0) if exact else (SKIP_RTOL, SKIP_ATOL)
        self.m = kernels.m
        self.kernels = kernels
        self.channel = channel_distribution(self.m, eps)
        self._V = np.ascontiguousarray(kernels.V)
        self._C = np.ascontiguousarray(kernels.C)
        self._vlo, self._vhi = _support(self._V)
        self._clo, self._chi = _support(self._C)
        self._full = point_mass(self.m, self.m)
        self._zero = point_mass(self.m, 0)
        n = self.m + 1
        dmax = max(graph.max_vn_degree, graph.max_cn_degree)
        self._pre = np.zeros((dmax + 1, n))
        self._suf = np.zeros((dmax + 1, n))
        self.c2v = np.zeros((graph.n_edges, n))
        self.v2c = np.zeros((graph.n_edges, n))
        self.residual = np.zeros(graph.n_vars)
        self._scratch = np.zeros(graph.n_checks)
        self._tmp = np.zeros(n)
        self._c2v_new = np.ones(graph.n_edges, dtype=np.bool_)
        self._v2c_new = np.ones(graph.n_edges, dtype=np.bool_)
        self.reset()

    def reset(self):
        self.c2v[:] = self._full
        self.v2c[:] = self.channel
        self.residual[:] = 1.0 - self.channel[0]
        self._c2v_new[:] = True
        self._v2c_new[:] = True

    def cn_pass(self, nodes):
        g = self.graph
        _node_pass(nodes, g.cn_ptr, g.cn_adj, self.v2c, self.c2v, self._v2c_new, self._c2v_new,
                   self._zero, self._zero, self._C, self._clo, self._chi, self._scratch,
                   self._pre, self._suf, self._tmp, *self._tols)

    def vn_pass(self, nodes):
        g = self.graph
        _node_pass(nodes, g.vn_ptr, g.vn_adj, self.c2v, self.v2c, self._c2v_new, self._v2c_new,
                   self.channel, self._full, self._V, self._vlo, self._vhi, self.residual,
                   self._pre, self._suf, self._tmp, *self._tols)


def _fold(first, msgs, K):
    out = np.asarray(first, dtype=float)
    lo, hi = _support(K)
    for msg in msgs:
        nxt = np.empty_like(out)
        _combine(out, np.asarray(msg, dtype=float), K, lo, hi, nxt)
        out = nxt
    return out


def vn_update(channel, incoming, kernels: KernelSet) -> np.ndarray:
    """Intersect the channel ambiguity with every incoming message."""
    return _fold(channel, incoming, np.ascontiguousarray(kernels.V))


def cn_update(incoming, kernels: KernelSet) -> np.ndarray:
    """Sum of the incoming ambiguities; no inputs means the symbol is pinned."""
    return _fold(point_mass(kernels.m, 0), incoming, np.ascontiguousarray(kernels.C))


def evaluate_fs(ens, m: int, eps: float, target: DecodeTarget | None = None, record: bool = False) -> EvalResult:
    """Flooding-schedule density evolution over the whole protograph."""
    target = target or DecodeTarget()
    engine = BecEngine(tanner_graph(ens), build_kernels(m), eps)
    return run_flooding(engine.graph, engine, target, record)


def evaluate_wd(ens: ScEnsemble, m: int, W: int, eps: float, target: DecodeTarget | None = None,
                record: bool = False) -> EvalResult:
    """Windowed density evolution with window size ``W`` (in block columns)."""
    if not isinstance(ens, ScEnsemble):
        raise TypeError("windowed decoding needs a coupled ensemble")
    target = target or DecodeTarget()
    engine = BecEngine(tanner_graph(ens), build_kernels(m), eps)
    return run_windowed(engine.graph, engine, W, target, record)
