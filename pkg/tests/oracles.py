"""
Binary reference computations written independently of the package.

Everything here works on edge lists built straight from the component
matrices and uses textbook scalar recursions, so a shared bug with the
non-binary code paths is unlikely.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq


def regular_bec_threshold(dv: int, dc: int, tol: float = 1e-7) -> float:
    """Largest eps for which x = eps (1 - (1 - x)^(dc-1))^(dv-1) has no fixed point but 0."""

    def fails(eps):
        xs = np.linspace(1e-6, eps, 200_001)
        return np.any(eps * (1 - (1 - xs) ** (dc - 1)) ** (dv - 1) >= xs)

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        lo, hi = (lo, mid) if fails(mid) else (mid, hi)
    return 0.5 * (lo + hi)


def coupled_edges(components, L: int):
    """Edge list (check, var) of the chain built from ``components``."""
    comps = [np.atleast_2d(np.asarray(c)) for c in components]
    cb, c = comps[0].shape
    ms = len(comps) - 1
    cn, vn = [], []
    for t in range(L):
        for i, comp in enumerate(comps):
            for r in range(cb):
                for j in range(c):
                    for _ in range(int(comp[r, j])):
                        cn.append((t + i) * cb + r)
                        vn.append(t * c + j)
    return np.array(cn), np.array(vn), (L + ms) * cb, L * c


def block_edges(B):
    B = np.atleast_2d(np.asarray(B))
    cn, vn = [], []
    for r in range(B.shape[0]):
        for j in range(B.shape[1]):
            for _ in range(int(B[r, j])):
                cn.append(r)
                vn.append(j)
    return np.array(cn), np.array(vn), B.shape[0], B.shape[1]


def binary_bec_de(edges, eps: float, delta: float = 1e-6, max_iters: int = 100_000, record: bool = False):
    """Flooding protograph DE on the BEC; returns (success, iterations, history)."""
    cn, vn, n_c, n_v = edges
    v2c = np.full(cn.size, eps)
    hist = []
    prev = None
    for it in range(1, max_iters + 1):
        # leave-one-out products through logs; exact zeros are clamped
        lg = np.log1p(-v2c)
        c2v = -np.expm1(np.bincount(cn, lg, n_c)[cn] - lg)
        lc = np.log(np.maximum(c2v, 1e-300))
        tot = np.bincount(vn, lc, n_v)
        v2c = eps * np.exp(tot[vn] - lc)
        app = eps * np.exp(tot)
        if record:
            hist.append(app)
        if app.max() < delta:
            return True, it, hist
        if prev is not None and np.max(np.abs(app - prev)) < 1e-12:
            return False, it, hist
        prev = app
    return False, max_iters, hist


def bisect_threshold(pred, lo: float, hi: float, tol: float) -> float:
    """``pred(lo)`` true, ``pred(hi)`` false."""
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- binary EXIT -------------------------------------------------------------

_GH_X, _GH_W = np.polynomial.hermite_e.hermegauss(160)
_GH_W = _GH_W / _GH_W.sum()


def j_sigma(sigma: float) -> float:
    """Binary J in the sigma convention, by Gauss-Hermite quadrature."""
    if sigma < 1e-6:
        return 0.0
    if sigma > 60:
        return 1.0
    llr = sigma ** 2 / 2 + sigma * _GH_X
    return float(1.0 - np.sum(_GH_W * np.logaddexp(0.0, -llr)) / math.log(2))


def j_sigma_inv(mi: float) -> float:
    if mi <= 0:
        return 0.0
    if mi >= j_sigma(60):
        return 60.0
    return brentq(lambda s: j_sigma(s) - mi, 1e-6, 60, xtol=1e-12)


def pexit(edges, ebn0_db: float, rate: float, delta: float = 1e-4, max_iters: int = 20_000, record: bool = False):
    """Binary protograph EXIT with exact J (sigma^2 of LLRs adds at variables)."""
    cn, vn, n_c, n_v = edges
    s_ch2 = 8.0 * rate * 10 ** (ebn0_db / 10)
    jinv = np.vectorize(j_sigma_inv)
    jf = np.vectorize(j_sigma)
    v2c = np.full(cn.size, j_sigma(math.sqrt(s_ch2)))
    hist = []
    prev = None
    for it in range(1, max_iters + 1):
        a = jinv(1.0 - v2c) ** 2
        c2v = 1.0 - jf(np.sqrt(np.maximum(np.bincount(cn, a, n_c)[cn] - a, 0.0)))
        b = jinv(c2v) ** 2
        tot = np.bincount(vn, b, n_v) + s_ch2
        v2c = jf(np.sqrt(tot[vn] - b))
        res = 1.0 - jf(np.sqrt(tot))
        if record:
            hist.append(res)
        if res.max() < delta:
            return True, it, hist
        if prev is not None and np.max(np.abs(res - prev)) < 1e-12:
            return False, it, hist
        prev = res
    return False, max_iters, hist


def biawgn_capacity_quad(snr_lin_es: float) -> float:
    """BPSK capacity at Es/N0 (linear) via Gauss-Hermite."""
    s = math.sqrt(8 * snr_lin_es)
    return j_sigma(s)


def shannon_limit_quad(rate: float) -> float:
    return brentq(lambda db: biawgn_capacity_quad(rate * 10 ** (db / 10)) - rate, -3, 10, xtol=1e-9)


def binary_bec_wd(components, L: int, W: int, eps: float, delta: float = 1e-6, max_iters: int = 100_000) -> bool:
    """Windowed binary DE: rows t..t+W-1 and columns t..t+W-1 active, target column t."""
    cn, vn, n_c, n_v = coupled_edges(components, L)
    cb, c = np.atleast_2d(np.asarray(components[0])).shape
    rblk, vblk = cn // cb, vn // c
    v2c = np.full(cn.size, eps)
    c2v = np.ones(cn.size)
    total = 0
    for t in range(L):
        act_c = (rblk >= t) & (rblk < t + W)
        act_v = (vblk >= t) & (vblk < t + W)
        prev = None
        while True:
            lg = np.log1p(-v2c)
            new = -np.expm1(np.bincount(cn, lg, n_c)[cn] - lg)
            c2v = np.where(act_c, new, c2v)
            lc = np.log(np.maximum(c2v, 1e-300))
            tot = np.bincount(vn, lc, n_v)
            v2c = np.where(act_v, eps * np.exp(tot[vn] - lc), v2c)
            app = eps * np.exp(tot)
            total += 1
            if app[t * c:(t + 1) * c].max() < delta:
                break
            win = app[t * c:min(t + W, L) * c]
            if (prev is not None and np.max(np.abs(win - prev)) < 1e-12) or total >= max_iters:
                return False
            prev = win
    return True
