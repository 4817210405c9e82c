import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nbsc.de_bec import cn_update, vn_update
from nbsc.subspace_kernels import (
    OutOfRange,
    all_subspaces,
    build_kernels,
    channel_distribution,
    enumerate_kernels_oracle,
    gaussian_binomial,
)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_closed_form_matches_enumeration(m):
    closed = build_kernels(m)
    oracle = enumerate_kernels_oracle(m)
    assert closed.exact[0] == oracle.exact[0]
    assert closed.exact[1] == oracle.exact[1]
    assert np.max(np.abs(closed.V - oracle.V)) <= 1e-12
    assert np.max(np.abs(closed.C - oracle.C)) <= 1e-12


def test_gaussian_binomial_values():
    assert [gaussian_binomial(4, k) for k in range(5)] == [1, 15, 35, 15, 1]
    # number of subspaces of GF(2)^3 by brute force
    subs = all_subspaces(3)
    assert [len(subs[k]) for k in range(4)] == [gaussian_binomial(3, k) for k in range(4)]


@given(st.integers(0, 10).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m))))
def test_gaussian_binomial_symmetry(mk):
    m, k = mk
    assert gaussian_binomial(m, k) == gaussian_binomial(m, m - k)


def test_m_out_of_range():
    with pytest.raises(OutOfRange):
        build_kernels(11)
    with pytest.raises(OutOfRange):
        build_kernels(0)


@pytest.mark.parametrize("m", range(1, 11))
def test_rows_are_distributions(m):
    ks = build_kernels(m)
    np.testing.assert_allclose(ks.V.sum(axis=2), 1.0, atol=1e-12)
    np.testing.assert_allclose(ks.C.sum(axis=2), 1.0, atol=1e-12)


def test_small_examples():
    ks = build_kernels(2)
    # two random lines in GF(2)^2 coincide with probability 1/3
    assert ks.exact[0][1][1][1] == Fraction(1, 3)
    assert ks.exact[1][1][1][1] == Fraction(1, 3)
    assert ks.exact[1][1][1][2] == Fraction(2, 3)


def test_binary_reduces_to_erasure_rules():
    ks = build_kernels(1)
    a, b = 0.3, 0.6
    v = vn_update([1 - a, a], [[1 - b, b]], ks)
    c = cn_update([[1 - a, a], [1 - b, b]], ks)
    assert v[1] == pytest.approx(a * b)
    assert c[1] == pytest.approx(1 - (1 - a) * (1 - b))


def _dominates(p, q):
    # p is at least as erased as q
    return np.all(np.cumsum(p[::-1]) >= np.cumsum(q[::-1]) - 1e-12)


@given(st.integers(1, 5), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_update_monotone_in_channel(m, e1, e2, e3):
    lo, hi = sorted((e1, e2))
    ks = build_kernels(m)
    other = channel_distribution(m, e3)
    assert _dominates(vn_update(channel_distribution(m, hi), [other], ks),
                      vn_update(channel_distribution(m, lo), [other], ks))
    assert _dominates(cn_update([channel_distribution(m, hi), other], ks),
                      cn_update([channel_distribution(m, lo), other], ks))


@given(st.integers(1, 4), st.lists(st.floats(0, 1), min_size=3, max_size=4))
def test_update_order_independent(m, eps):
    ks = build_kernels(m)
    msgs = [channel_distribution(m, e) for e in eps]
    for upd in (lambda ms_: cn_update(ms_, ks), lambda ms_: vn_update(ms_[0], ms_[1:], ks)):
        ref = upd(msgs)
        for perm in itertools.permutations(msgs):
            np.testing.assert_allclose(upd(list(perm)), ref, atol=1e-12)
