import pytest
from hypothesis import given, strategies as st

from nbsc.complexity import (
    LatencyConfig,
    MissingThreshold,
    OperatingPoint,
    compare_operating_points,
    complexity_order,
    equal_latency,
)


@given(st.integers(1, 6), st.integers(1, 8), st.integers(1, 200), st.integers(1, 10))
def test_formula(dv, c, W, m):
    q = 2 ** m
    assert complexity_order(dv, c, W, m) == W * c * dv * (q + q * m)


def test_fs_over_wd_ratio():
    assert complexity_order(3, 2, 101, 4) / complexity_order(3, 2, 10, 4) == pytest.approx(10.1)


def test_equal_latency():
    cfg = LatencyConfig(W=7, c=2, m=5, M=100)
    assert cfg.M_block == equal_latency(7, 100) == 700
    assert cfg.W_b == 7 * 2 * 100 * 5


def test_rejects_nonpositive():
    with pytest.raises(ValueError):
        complexity_order(0, 2, 5, 3)


def test_ranking_and_stability():
    pts = [OperatingPoint("b", 3, 2, 5, 10, 0.49), OperatingPoint("a", 3, 2, 5, 10, 0.48),
           OperatingPoint("c", 3, 2, 5, 5, 0.47)]
    rows = compare_operating_points(pts)
    assert [r["label"] for r in rows] == ["c", "b", "a"]


def test_missing_threshold():
    with pytest.raises(MissingThreshold):
        compare_operating_points([OperatingPoint("x", 3, 2, 5, 7)])
