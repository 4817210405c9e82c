import json

import pytest
from hypothesis import given, strategies as st

from nbsc.protograph import catalog
from nbsc.threshold_search import (
    BadBracket,
    NotFoundWithinCap,
    SearchConfig,
    SweepItem,
    bec_threshold,
    bisect,
    compute_threshold,
    find_w_star,
    parse_schedule,
    sweep,
)


@given(st.floats(0.01, 0.99), st.sampled_from([1e-2, 1e-3, 1e-4]))
def test_bisect_step_predicate(x0, tol):
    b = bisect(lambda x: x < x0, 0.0, 1.0, tol)
    assert b.good <= x0 <= b.bad
    assert b.width <= tol
    assert abs(b.threshold - x0) <= tol


@given(st.floats(-2.0, 4.0))
def test_bisect_decreasing_orientation(x0):
    b = bisect(lambda db: db > x0, 6.0, -3.0, 0.01)
    assert abs(b.threshold - x0) <= 0.01


def test_bad_bracket():
    with pytest.raises(BadBracket):
        bisect(lambda x: False, 0.0, 1.0, 1e-3)
    with pytest.raises(BadBracket):
        bisect(lambda x: True, 0.0, 1.0, 1e-3)


def test_parse_schedule():
    assert parse_schedule("fs") == ("fs", None)
    assert parse_schedule("WD:7") == ("wd", 7)
    with pytest.raises(ValueError):
        parse_schedule("wd:0")
    with pytest.raises(ValueError):
        parse_schedule("sliding")


def test_block_threshold_and_gap():
    res = bec_threshold(catalog("B24"), 1, config=SearchConfig(tol_bec=1e-3))
    assert abs(res.threshold - 1 / 3) < 1e-3
    assert res.capacity_gap == pytest.approx(0.5 - res.threshold)
    assert res.bracket <= 1e-3


def test_error_is_recorded_not_raised():
    res = compute_threshold(SweepItem("B24", 1, "wd", 5))
    assert res.threshold is None and "coupled" in res.error


def test_sweep_checkpoint_resume(tmp_path):
    cfg = SearchConfig(tol_bec=1e-2, L=10)
    items = [SweepItem("B24", 1), SweepItem("C36ms1", 1, "wd", 4)]
    ck = tmp_path / "ck.jsonl"
    first = sweep(items, cfg, workers=1, checkpoint=str(ck))
    assert len(ck.read_text().splitlines()) == 2
    # a resumed run reads results back instead of recomputing
    lines = [json.loads(x) for x in ck.read_text().splitlines()]
    lines[0]["result"]["evals"] = -1
    ck.write_text("".join(json.dumps(x) + "\n" for x in lines))
    again = sweep(items, cfg, workers=1, checkpoint=str(ck))
    assert again[0].evals == -1
    assert again[1].threshold == first[1].threshold


def test_sweep_parallel_matches_serial():
    cfg = SearchConfig(tol_bec=1e-2, L=10)
    items = [SweepItem("C36ms1", m, "wd", 4) for m in (1, 2)]
    assert [r.threshold for r in sweep(items, cfg, workers=2)] == [r.threshold for r in sweep(items, cfg, workers=1)]


def test_w_star_small_chain():
    ens = catalog("C36ms1", L=12)
    cfg = SearchConfig(tol_bec=1e-3)
    ws = find_w_star(ens, "bec", [1], ladder=[2, 3, 4, 6, 8, 13], config=cfg)
    assert ws.W in (2, 3, 4, 6, 8, 13)
    assert all(not all(f.values()) for _, f in ws.checked[:-1])


def test_w_star_cap():
    ens = catalog("C36ms2", L=12)
    with pytest.raises(NotFoundWithinCap):
        find_w_star(ens, "bec", [1], fraction=0.0, ladder=[2], fs={1: 0.9}, config=SearchConfig())
