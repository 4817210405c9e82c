"""
Decoding-complexity and equal-latency model for windowed decoding.

Latency is counted in bits: a window of ``W`` block columns of ``c``
symbols lifted by ``M`` holds ``W c M m`` bits, the same as a block code of
lifting ``M' = W M``. With FFT-based belief propagation a check node costs
``q m`` and a variable node ``q`` per symbol, and a ``(d_v, d_c)``-regular
window holds ``d_v W c M`` edges, so the per-window order is
``M * W c d_v (q + q m)``. The ``M`` factor is dropped throughout, boundary
irregularity and iteration counts are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "LatencyConfig",
    "OperatingPoint",
    "MissingThreshold",
    "equal_latency",
    "latency_bits",
    "complexity_order",
    "compare_operating_points",
]


class MissingThreshold(ValueError):
    pass


def equal_latency(W: int, M: int) -> int:
    """Block-code lifting factor with the same latency as a ``W``-block window."""
    if W < 1 or M < 1:
        raise ValueError("W and M must be positive")
    return W * M


def latency_bits(W: int, c: int, M: int, m: int) -> int:
    return W * c * M * m


@dataclass(frozen=True)
class LatencyConfig:
    W: int
    c: int
    m: int
    M: int

    @property
    def M_block(self) -> int:
        return equal_latency(self.W, self.M)

    @property
    def W_b(self) -> int:
        return latency_bits(self.W, self.c, self.M, self.m)


def complexity_order(d_v: int, c: int, W: int, m: int) -> int:
    """``W c d_v (q + q m)`` with ``q = 2**m``."""
    for name, val in (("d_v", d_v), ("c", c), ("W", W), ("m", m)):
        if val < 1:
            raise ValueError(f"{name} must be >= 1, got {val}")
    q = 1 << m
    return W * c * d_v * (q + q * m)


@dataclass
class OperatingPoint:
    label: str
    d_v: int
    c: int
    m: int
    W: int
    threshold: float | None = None
    capacity_gap: float | None = None

    @property
    def latency_proxy(self) -> int:
        return self.W * self.m

    @property
    def complexity(self) -> int:
        return complexity_order(self.d_v, self.c, self.W, self.m)


def compare_operating_points(points) -> list[dict]:
    """Rows sorted by complexity; equal rows keep their input order."""
    rows = []
    for i, p in enumerate(points):
        if p.threshold is None:
            raise MissingThreshold(f"operating point {p.label!r} has no threshold")
        rows.append({
            "label": p.label,
            "m": p.m,
            "q": 1 << p.m,
            "W": p.W,
            "Wm": p.latency_proxy,
            "complexity": p.complexity,
            "threshold": p.threshold,
            "capacity_gap": p.capacity_gap,
            "_pos": i,
        })
    rows.sort(key=lambda r: (r["complexity"], r["_pos"]))
    for r in rows:
        del r["_pos"]
    return rows
