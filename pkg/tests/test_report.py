import json
import math
from fractions import Fraction

import numpy as np
import pytest

from dhg import INF, __version__
from dhg.digraph import Side
from dhg.report import content_hash, dumps, jsonable, manifest


def test_jsonable_handles_package_types():
    data = {"a": INF, "b": math.inf, "c": -math.inf, "d": np.int64(3), "e": Fraction(1, 3),
            "f": {"z", "y"}, "g": Side.IN, "h": np.array([1, 2])}
    assert jsonable(data) == {"a": "inf", "b": "inf", "c": "-inf", "d": 3, "e": "1/3",
                              "f": ["y", "z"], "g": "in", "h": [1, 2]}


def test_nan_is_rejected():
    with pytest.raises(ValueError):
        jsonable(float("nan"))


def test_dumps_is_key_order_independent():
    assert dumps({"b": 1, "a": 2}) == dumps({"a": 2, "b": 1}) == '{"a":2,"b":1}'
    assert json.loads(dumps({"x": [1]}, pretty=True)) == {"x": [1]}


def test_manifest_and_hash():
    m = manifest("delta", {"g.txt": content_hash("a b\n")}, {"radius": 3})
    assert m["toolVersion"] == __version__ and m["params"] == {"radius": 3}
    assert content_hash("a b\n") == content_hash(b"a b\n")
    assert content_hash("a b\n").startswith("sha256:")
