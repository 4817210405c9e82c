import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from nbsc.capacity import binary_j, shannon_limit_db
from nbsc.exit_awgn import (
    AwgnChannel,
    OutOfRange,
    channel_mi,
    evaluate_fs_awgn,
    get_mi_table,
    load_mi_table,
    mi_inverse,
    save_mi_table,
)
from nbsc.protograph import catalog

SEED = 11


@pytest.fixture(scope="module")
def table1():
    return get_mi_table(1, 100_000, SEED)


def test_binary_table_matches_quadrature(table1):
    for s2 in (0.01, 0.3, 1.0, 4.0, 10.0, 40.0):
        assert abs(table1.J(s2) - binary_j(s2)) < 2e-3


def test_quadrature_j_agrees_with_hermite():
    for s2 in (0.2, 2.0, 20.0):
        assert binary_j(s2) == pytest.approx(oracles.j_sigma(math.sqrt(s2)), abs=1e-9)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_table_monotone_and_bounded(m):
    t = get_mi_table(m, 100_000, SEED)
    assert np.all(np.diff(t.values) >= 0)
    assert 0.0 <= t.values[0] and t.values[-1] <= 1.0


@given(st.floats(0.001, 0.995))
def test_inverse_roundtrip(mi):
    t = get_mi_table(1, 100_000, SEED)
    assert t.J(mi_inverse(t, mi)) == pytest.approx(mi, abs=1e-9)


def test_inverse_domain(table1):
    with pytest.raises(OutOfRange):
        mi_inverse(table1, 1.2)
    s2, sat = mi_inverse(table1, 1.0, with_flag=True)
    assert sat and s2 == pytest.approx(table1.s2[-1])


def test_table_persistence(tmp_path, table1):
    path = tmp_path / "t.json"
    save_mi_table(table1, str(path))
    back = load_mi_table(str(path))
    np.testing.assert_array_equal(back.values, table1.values)


def test_table_seed_determinism():
    from nbsc.exit_awgn import build_mi_table
    a = build_mi_table(2, 16_384, 5, grid=np.array([0.5, 2.0]))
    b = build_mi_table(2, 16_384, 5, grid=np.array([0.5, 2.0]))
    np.testing.assert_array_equal(a.raw, b.raw)


def test_channel_mi_binary():
    lim = shannon_limit_db(0.5)
    assert lim == pytest.approx(oracles.shannon_limit_quad(0.5), abs=1e-6)
    assert channel_mi(1, AwgnChannel(lim, 0.5)) == pytest.approx(0.5, abs=1e-3)
    # independent bits: the per-bit MI does not depend on m
    assert channel_mi(3, AwgnChannel(1.0, 0.5)) == pytest.approx(channel_mi(1, AwgnChannel(1.0, 0.5)), abs=1e-3)


def test_binary_exit_trajectory(table1):
    B = catalog("B36")
    for db in (0.9, 1.4):
        ours = evaluate_fs_awgn(B, 1, db, table1, seed=SEED, record=True)
        _, _, ref = oracles.pexit(oracles.block_edges([[3, 3]]), db, 0.5, max_iters=60, record=True)
        n = min(len(ours.history), len(ref), 60)
        for x, y in zip(ours.history[:n], ref[:n]):
            assert np.max(np.abs(x - y)) < 1e-3
