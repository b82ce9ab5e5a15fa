"""Deterministic JSON reports with an embedded run manifest."""
import hashlib
import json
import math
from enum import Enum
from fractions import Fraction

import numpy as np

from . import __version__
from .extdist import INF


def jsonable(obj):
    if obj is INF:
        return "inf"
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            raise ValueError("NaN has no JSON form")
        return obj
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return jsonable(float(obj))
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    return obj


def content_hash(data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


def manifest(command, inputs=None, params=None):
    return {
        "command": command,
        "inputs": dict(sorted((inputs or {}).items())),
        "params": jsonable(params or {}),
        "toolVersion": __version__,
    }


def dumps(report, pretty=False):
    body = jsonable(report)
    if pretty:
        return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
    return json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False,
                      allow_nan=False)
