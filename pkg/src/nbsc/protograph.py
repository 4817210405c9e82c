"""
Block and spatially-coupled protographs.

A protograph is stored as its base matrix: rows are check nodes, columns are
variable nodes and each entry is the number of parallel edges between them.
A coupled ensemble is built by spreading the edges of a block base matrix
over ``ms + 1`` component matrices and placing the components on a band:
component ``B_i`` sits at block (row ``r + i``, column ``r``) for every block
column ``r`` of the chain.

Indices are 0-based internally; window positions and block labels that end
up in reports are 1-based.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

__all__ = [
    "BaseMatrix",
    "EdgeSpreading",
    "ScEnsemble",
    "WindowView",
    "ProtographError",
    "ShapeMismatch",
    "SumMismatch",
    "OutOfRange",
    "UnknownEnsemble",
    "spread_edges",
    "couple",
    "design_rate",
    "window_at",
    "catalog",
    "CATALOG_NAMES",
    "load_ensemble",
    "ensemble_to_dict",
    "ensemble_name",
]


class ProtographError(ValueError):
    pass


class ShapeMismatch(ProtographError):
    pass


class SumMismatch(ProtographError):
    pass


class OutOfRange(ProtographError):
    pass


class UnknownEnsemble(ProtographError):
    pass


def _as_rows(entries) -> tuple[tuple[int, ...], ...]:
    arr = np.asarray(entries)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeMismatch(f"base matrix must be a non-empty 2-D grid, got shape {arr.shape}")
    if not np.all(np.equal(np.mod(arr, 1), 0)):
        raise ProtographError("base matrix entries must be integers")
    arr = arr.astype(np.int64)
    return tuple(tuple(int(x) for x in row) for row in arr)


@dataclass(frozen=True)
class BaseMatrix:
    """Protograph of a block ensemble: ``(c - b) x c`` edge multiplicities."""

    rows: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", _as_rows(self.rows))
        arr = self.array
        if np.any(arr < 0):
            raise ProtographError("base matrix entries must be non-negative")
        if np.any(arr.sum(axis=1) == 0) or np.any(arr.sum(axis=0) == 0):
            raise ProtographError("every row and column needs at least one edge")
        if self.n_checks >= self.n_vars:
            raise ProtographError("need c > b >= 0, i.e. fewer checks than variables")

    @property
    def array(self) -> np.ndarray:
        arr = np.array(self.rows, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def n_checks(self) -> int:
        return len(self.rows)

    @property
    def n_vars(self) -> int:
        return len(self.rows[0])

    c = n_vars

    @property
    def b(self) -> int:
        return self.n_vars - self.n_checks

    @property
    def design_rate(self) -> Fraction:
        return Fraction(self.b, self.n_vars)

    @property
    def var_degrees(self) -> np.ndarray:
        return self.array.sum(axis=0)

    @property
    def check_degrees(self) -> np.ndarray:
        return self.array.sum(axis=1)

    @property
    def dv(self) -> int:
        """Variable-node degree; only defined for column-regular matrices."""
        deg = self.var_degrees
        if np.any(deg != deg[0]):
            raise ProtographError("base matrix is not variable-regular")
        return int(deg[0])

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"BaseMatrix({label}{[list(r) for r in self.rows]})"


@dataclass(frozen=True)
class EdgeSpreading:
    block: BaseMatrix
    components: tuple[BaseMatrix, ...]

    @property
    def ms(self) -> int:
        return len(self.components) - 1


def _component(x) -> BaseMatrix:
    # Components may have all-zero rows or columns, so skip BaseMatrix's
    # connectivity check.
    if isinstance(x, BaseMatrix):
        return x
    rows = _as_rows(x)
    if np.any(np.array(rows) < 0):
        raise ProtographError("component entries must be non-negative")
    obj = object.__new__(BaseMatrix)
    object.__setattr__(obj, "rows", rows)
    object.__setattr__(obj, "name", "")
    return obj


def spread_edges(block, components) -> EdgeSpreading:
    """Validate that ``components`` spread the edges of ``block``.

    Raises
    ------
    ShapeMismatch
        A component does not have the shape of ``block``.
    SumMismatch
        The entrywise sum of the components differs from ``block``.
    """
    if not isinstance(block, BaseMatrix):
        block = BaseMatrix(block)
    comps = tuple(_component(x) for x in components)
    if len(comps) < 2:
        raise ProtographError("edge spreading needs at least two components (ms >= 1)")
    for comp in comps:
        if comp.shape != block.shape:
            raise ShapeMismatch(f"component shape {comp.shape} != block shape {block.shape}")
    total = sum(comp.array for comp in comps)
    if not np.array_equal(total, block.array):
        raise SumMismatch(f"components sum to {total.tolist()}, expected {block.array.tolist()}")
    return EdgeSpreading(block, comps)


@dataclass(frozen=True)
class ScEnsemble:
    """Terminated spatially-coupled ensemble with ``L`` block columns."""

    spreading: EdgeSpreading
    L: int
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise OutOfRange(f"termination length must be a positive integer, got {self.L}")

    @property
    def ms(self) -> int:
        return self.spreading.ms

    @property
    def block(self) -> BaseMatrix:
        return self.spreading.block

    @property
    def c(self) -> int:
        return self.block.n_vars

    @property
    def b(self) -> int:
        return self.block.b

    @property
    def rows_per_block(self) -> int:
        return self.block.n_checks

    @property
    def n_block_rows(self) -> int:
        return self.L + self.ms

    @cached_property
    def coupled(self) -> np.ndarray:
        cb, c = self.block.shape
        H = np.zeros((cb * (self.L + self.ms), c * self.L), dtype=np.int64)
        for r in range(self.L):
            for i, comp in enumerate(self.spreading.components):
                H[(r + i) * cb:(r + i + 1) * cb, r * c:(r + 1) * c] = comp.array
        H.flags.writeable = False
        return H

    @property
    def design_rate(self) -> Fraction:
        return design_rate(self)

    def with_L(self, L: int) -> "ScEnsemble":
        return ScEnsemble(self.spreading, L, self.name)


def couple(spreading: EdgeSpreading, L: int) -> ScEnsemble:
    return ScEnsemble(spreading, L)


def design_rate(ens) -> Fraction:
    """``R_L = 1 - (c-b)(L+ms) / (cL)`` for coupled ensembles, ``b/c`` for blocks."""
    if isinstance(ens, BaseMatrix):
        return ens.design_rate
    cb, c = ens.block.shape
    return 1 - Fraction(cb * (ens.L + ens.ms), c * ens.L)


@dataclass(frozen=True)
class WindowView:
    """Window of ``W`` block rows by ``W`` block columns anchored at block ``t``.

    ``row_blocks`` and ``col_blocks`` are 0-based half-open ranges, already
    clipped to the chain; ``t`` is 1-based.
    """

    W: int
    t: int
    row_blocks: range
    col_blocks: range
    matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def truncated(self) -> bool:
        return len(self.row_blocks) < self.W or len(self.col_blocks) < self.W


def window_at(ens: ScEnsemble, W: int, t: int) -> WindowView:
    if not 1 <= W <= ens.L + ens.ms:
        raise OutOfRange(f"window size {W} outside 1..{ens.L + ens.ms}")
    if not 1 <= t <= ens.L:
        raise OutOfRange(f"window position {t} outside 1..{ens.L}")
    cb, c = ens.block.shape
    rows = range(t - 1, min(t - 1 + W, ens.L + ens.ms))
    cols = range(t - 1, min(t - 1 + W, ens.L))
    sub = ens.coupled[rows.start * cb:rows.stop * cb, cols.start * c:cols.stop * c]
    return WindowView(W, t, rows, cols, sub)


_BLOCKS = {
    "B24": [[2, 2]],
    "B36": [[3, 3]],
}
_SPREADINGS = {
    "C24": ([[2, 2]], [[[1, 1]], [[1, 1]]]),
    "C36ms1": ([[3, 3]], [[[2, 1]], [[1, 2]]]),
    "C36ms2": ([[3, 3]], [[[1, 1]], [[1, 1]], [[1, 1]]]),
}
CATALOG_NAMES = tuple(_BLOCKS) + tuple(_SPREADINGS)
DEFAULT_L = 100


def catalog(name: str, L: int = DEFAULT_L):
    """Named ensembles: ``B24``, ``B36`` (block) and ``C24``, ``C36ms1``, ``C36ms2``."""
    if name in _BLOCKS:
        return BaseMatrix(_BLOCKS[name], name=name)
    if name in _SPREADINGS:
        block, comps = _SPREADINGS[name]
        return ScEnsemble(spread_edges(block, comps), L, name=name)
    raise UnknownEnsemble(f"unknown ensemble {name!r}; choose from {', '.join(CATALOG_NAMES)}")


def load_ensemble(source: str, L: int | None = None):
    """Resolve a catalog name or a JSON ensemble file.

    The file holds ``{"components": [[[...]], ...], "L": int}``. A single
    component (and no ``L``) describes a block ensemble.
    """
    if source in CATALOG_NAMES:
        return catalog(source, DEFAULT_L if L is None else L)
    if not os.path.exists(source):
        raise UnknownEnsemble(f"{source!r} is neither a catalog name nor a file")
    with open(source) as fh:
        data = json.load(fh)
    comps = data.get("components")
    if not comps:
        raise ProtographError(f"{source}: missing 'components'")
    name = data.get("name") or os.path.splitext(os.path.basename(source))[0]
    if len(comps) == 1:
        return BaseMatrix(comps[0], name=name)
    block = np.sum([np.asarray(cmp, dtype=np.int64) for cmp in comps], axis=0)
    L = L if L is not None else int(data.get("L", DEFAULT_L))
    return ScEnsemble(spread_edges(block, comps), L, name=name)


def ensemble_to_dict(ens) -> dict:
    if isinstance(ens, BaseMatrix):
        return {"components": [[list(r) for r in ens.rows]]}
    return {
        "components": [[list(r) for r in comp.rows] for comp in ens.spreading.components],
        "L": ens.L,
    }


def ensemble_name(ens) -> str:
    return ens.name or "custom"
