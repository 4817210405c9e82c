"""
Subspace-dimension kernels for erasure density evolution over GF(2^m).

On the erasure channel a decoder's knowledge about a GF(2^m) symbol is an
affine subspace of GF(2)^m; only its dimension matters once the edge labels
are random. Combining two such ambiguities at a variable node intersects the
subspaces, at a check node it adds them. With both operands uniform among
subspaces of their dimensions, the dimension of the result has a closed form
in Gaussian binomial coefficients:

    P[dim(U & V) = k] = [i, k] [m - i, j - k] 2^((i-k)(j-k)) / [m, j]

and ``dim(U + V) = i + j - dim(U & V)``.

``enumerate_kernels_oracle`` derives the same tables by brute force over all
subspaces of GF(2)^m and is what the closed forms are tested against.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "KernelSet",
    "OutOfRange",
    "TooLarge",
    "M_MAX",
    "gaussian_binomial",
    "build_kernels",
    "enumerate_kernels_oracle",
    "all_subspaces",
    "channel_distribution",
    "check_distribution",
    "point_mass",
    "kernels_to_dict",
]

M_MAX = 10
ORACLE_M_MAX = 4


class OutOfRange(ValueError):
    pass


class TooLarge(ValueError):
    pass


def gaussian_binomial(m: int, k: int) -> int:
    """Number of ``k``-dimensional subspaces of GF(2)^m (exact integer)."""
    if not 0 <= k <= m:
        raise OutOfRange(f"need 0 <= k <= m, got m={m}, k={k}")
    num = den = 1
    for i in range(k):
        num *= (1 << (m - i)) - 1
        den *= (1 << (i + 1)) - 1
    q, r = divmod(num, den)
    assert r == 0
    return q


@dataclass(frozen=True)
class KernelSet:
    """Dimension-transition tables for one field size.

    ``V[i, j, k]`` is the probability that intersecting an ``i``- and a
    ``j``-dimensional uniform subspace gives dimension ``k``; ``C`` is the
    same for the sum. ``exact`` holds the rational tables when available.
    """

    m: int
    V: np.ndarray
    C: np.ndarray
    exact: tuple | None = None

    @property
    def q(self) -> int:
        return 1 << self.m


def _exact_tables(m: int):
    n = m + 1
    V = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    C = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            total = gaussian_binomial(m, j)
            for k in range(max(0, i + j - m), min(i, j) + 1):
                count = (
                    gaussian_binomial(i, k)
                    * gaussian_binomial(m - i, j - k)
                    * (1 << ((i - k) * (j - k)))
                )
                p = Fraction(count, total)
                V[i][j][k] = p
                C[i][j][i + j - k] = p
    return V, C


def _to_float(table) -> np.ndarray:
    arr = np.array([[[float(x) for x in row] for row in plane] for plane in table])
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def build_kernels(m: int) -> KernelSet:
    """Closed-form kernels for GF(2^m), ``1 <= m <= 10``; cached per ``m``."""
    if not 1 <= m <= M_MAX:
        raise OutOfRange(f"field extension degree must be in 1..{M_MAX}, got {m}")
    V, C = _exact_tables(m)
    return KernelSet(m, _to_float(V), _to_float(C), exact=(V, C))


def _span(vectors) -> frozenset:
    space = {0}
    for v in vectors:
        space |= {x ^ v for x in space}
    return frozenset(space)


@lru_cache(maxsize=None)
def all_subspaces(m: int) -> dict[int, tuple[frozenset, ...]]:
    """Every subspace of GF(2)^m (vectors as bit masks), grouped by dimension."""
    seen = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for space in frontier:
            for v in range(1, 1 << m):
                if v in space:
                    continue
                bigger = frozenset(space | {x ^ v for x in space})
                if bigger not in seen:
                    seen.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    by_dim: dict[int, list] = {k: [] for k in range(m + 1)}
    for space in seen:
        by_dim[len(space).bit_length() - 1].append(space)
    return {k: tuple(sorted(v, key=sorted)) for k, v in by_dim.items()}


def enumerate_kernels_oracle(m: int) -> KernelSet:
    """Brute-force kernels from all ordered pairs of subspaces (``m <= 4``).

    Entries of ``exact`` are rational frequencies; ``V`` and ``C`` are
    their float images.
    """
    if m > ORACLE_M_MAX:
        raise TooLarge(f"enumeration oracle is limited to m <= {ORACLE_M_MAX}")
    if m < 1:
        raise OutOfRange(f"m must be positive, got {m}")
    subs = all_subspaces(m)
    n = m + 1
    V = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    C = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        counts_cap = [0] * n
        counts_sum = [0] * n
        for U, W in itertools.product(subs[i], subs[j]):
            counts_cap[len(U & W).bit_length() - 1] += 1
            counts_sum[len(_span(U | W)).bit_length() - 1] += 1
        pairs = len(subs[i]) * len(subs[j])
        for k in range(n):
            V[i][j][k] = Fraction(counts_cap[k], pairs)
            C[i][j][k] = Fraction(counts_sum[k], pairs)
    return KernelSet(m, _to_float(V), _to_float(C), exact=(V, C))


def point_mass(m: int, k: int) -> np.ndarray:
    p = np.zeros(m + 1)
    p[k] = 1.0
    return p


def channel_distribution(m: int, eps: float) -> np.ndarray:
    """Ambiguity dimension of a symbol whose ``m`` bits are erased i.i.d."""
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"erasure probability must be in [0, 1], got {eps}")
    k = np.arange(m + 1)
    binom = np.array([math.comb(m, int(x)) for x in k], dtype=float)
    return binom * eps ** k * (1.0 - eps) ** (m - k)


def check_distribution(p, tol: float = 1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < -tol) or abs(p.sum() - 1.0) > tol:
        raise ValueError(f"not a probability vector over dimensions: {p}")
    return p


def kernels_to_dict(ks: KernelSet) -> dict:
    """Structured dump keyed by ``m``; exact entries as ``"num/den"`` strings."""
    def fmt(table):
        return [[[str(x) for x in row] for row in plane] for plane in table]

    out = {"m": ks.m, "q": ks.q}
    if ks.exact is not None:
        out["V"], out["C"] = fmt(ks.exact[0]), fmt(ks.exact[1])
    else:
        out["V"], out["C"] = ks.V.tolist(), ks.C.tolist()
    return out


def dumps_kernels(ks: KernelSet) -> str:
    return json.dumps(kernels_to_dict(ks), indent=1)
