import pickle

from hypothesis import given, strategies as st

from dhg.extdist import INF, from_json, from_raw, is_finite, to_json


def test_inf_is_singleton_and_survives_pickle():
    assert pickle.loads(pickle.dumps(INF)) is INF
    assert str(INF) == "inf"


@given(st.integers(min_value=0, max_value=10**6))
def test_ordering_and_saturating_add(n):
    assert n < INF and INF > n and not INF < n
    assert INF + n is INF and n + INF is INF
    assert is_finite(n) and not is_finite(INF)


def test_raw_and_json_round_trip():
    assert from_raw(-1) is INF and from_raw(4) == 4
    assert to_json(INF) == "inf" and to_json(3) == 3
    assert from_json("inf") is INF and from_json(3) == 3
