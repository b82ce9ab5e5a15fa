"""Rays and anti-rays on generated families.

A ray spec is a finite prefix followed by a deterministic step rule. For an
anti-ray ``R(i)`` is the i-th vertex counted backwards, so the edges run
``R(i+1) -> R(i)``.
"""
import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, ExpansionNeeded
from .families import FAMILIES, GeneratedFamily, get_family, split_name

__all__ = ["Kind", "StepRule", "RaySpec", "materialize", "materialize_in", "builtin_rays"]


class Kind(Enum):
    RAY = "ray"
    ANTI_RAY = "anti-ray"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        value = str(value).lower().replace("_", "-")
        if value in ("antiray", "anti"):
            value = "anti-ray"
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f"kind must be 'ray' or 'anti-ray', got {value!r}") from None


@dataclass(frozen=True)
class StepRule:
    """``shift`` moves the numeric index by ``by`` within a series
    (``family-successor`` is shift by +1); ``append`` adds a digit to a tree
    address."""
    rule: str
    params: tuple = ()

    def __post_init__(self):
        if self.rule not in ("shift", "family-successor", "append"):
            raise DomainError(f"unknown step rule {self.rule!r}")

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    def apply(self, name):
        if self.rule == "append":
            sep = "" if "_" in name else "_"
            return f"{name}{sep}{self.get('digit', '0')}"
        series, index = split_name(name)
        want = self.get("series")
        if want is not None and want != series:
            raise DomainError(f"step rule expects series {want!r}, got {name!r}")
        by = 1 if self.rule == "family-successor" else int(self.get("by", 1))
        return f"{series}{index + by}"

    def to_json(self):
        return {"rule": self.rule, **dict(self.params)}

    @classmethod
    def from_json(cls, data):
        data = dict(data)
        rule = data.pop("rule")
        return cls(rule, tuple(sorted(data.items())))


@dataclass(frozen=True)
class RaySpec:
    family: GeneratedFamily
    kind: Kind
    prefix: tuple
    step: StepRule
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.prefix:
            raise DomainError("ray prefix must be non-empty")

    @property
    def is_ray(self):
        return self.kind is Kind.RAY

    def key(self):
        """Canonical identity used for ordering, independent of the label."""
        return json.dumps(self._core(), sort_keys=True)

    def _core(self):
        return {
            "family": self.family.name,
            "kind": self.kind.value,
            "prefix": list(self.prefix),
            "step": self.step.to_json(),
        }

    def to_json(self):
        data = self._core()
        if self.label:
            data["label"] = self.label
        return data

    @classmethod
    def from_json(cls, data, families=None):
        families = families or FAMILIES
        fam = data["family"]
        family = families[fam] if fam in families else get_family(fam)
        return cls(family, Kind.parse(data["kind"]), tuple(data["prefix"]),
                   StepRule.from_json(data["step"]), data.get("label", ""))

    def describe(self):
        return self.label or self.key()


def _check_step(ray, a, b):
    fam = ray.family
    if ray.is_ray:
        ok = b in fam.out_neighbors(a)
    else:
        ok = b in fam.in_neighbors(a)
    if not ok:
        arrow = f"{a}->{b}" if ray.is_ray else f"{b}->{a}"
        raise DomainError(f"{ray.describe()}: {arrow} is not an edge of {fam.name}")


def materialize(ray, up_to):
    """Vertices R(0..up_to) as a tuple of names."""
    if up_to < 0:
        raise DomainError("up_to must be non-negative")
    seq = list(ray.prefix[: up_to + 1])
    for a, b in zip(seq, seq[1:]):
        _check_step(ray, a, b)
    while len(seq) <= up_to:
        nxt = ray.step.apply(seq[-1])
        if not ray.family.valid(nxt):
            raise DomainError(f"{ray.describe()}: step leaves the family at {nxt!r}")
        _check_step(ray, seq[-1], nxt)
        seq.append(nxt)
    if len(set(seq)) != len(seq):
        raise DomainError(f"{ray.describe()}: vertices repeat")
    return tuple(seq)


def materialize_in(trunc, ray, up_to=None):
    """Materialize inside a truncation.

    With ``up_to`` every vertex must be present (else ExpansionNeeded);
    without it the walk stops at the last vertex before leaving.
    """
    if up_to is not None:
        seq = materialize(ray, up_to)
        for k, v in enumerate(seq):
            if v not in trunc:
                raise ExpansionNeeded(
                    f"{ray.describe()}: R({k}) = {v} lies outside radius {trunc.radius}",
                    trunc.radius + (up_to - k) + 1)
        return seq
    seq = []
    limit = 4 * trunc.radius + len(ray.prefix) + 4
    for v in materialize(ray, limit):
        if v not in trunc:
            break
        seq.append(v)
    return tuple(seq)


def _ray(family, kind, prefix, label, **step):
    rule = step.pop("rule", "shift")
    return RaySpec(FAMILIES[family], Kind(kind), tuple(prefix),
                   StepRule(rule, tuple(sorted(step.items()))), label)


def builtin_rays(family):
    """Representative rays and anti-rays for each registered family."""
    name = family if isinstance(family, str) else family.name
    get_family(name)
    pools = {
        "ex-topbound": [
            _ray("ex-topbound", "ray", ["v0"], "eta", series="v", by=1),
            _ray("ex-topbound", "anti-ray", ["x0"], "mu", series="x", by=1),
        ],
        "ex-dist0": [
            _ray("ex-dist0", "ray", ["x0"], "omega", series="x", by=1),
            _ray("ex-dist0", "anti-ray", ["y0"], "eta", series="y", by=1),
            _ray("ex-dist0", "anti-ray", ["z0"], "mu", series="z", by=1),
        ],
        "nat": [_ray("nat", "ray", ["0"], "up", by=1)],
        "int": [
            _ray("int", "ray", ["0"], "up", by=1),
            _ray("int", "anti-ray", ["0"], "from-up", by=1),
            _ray("int", "ray", ["0"], "down", by=-1),
            _ray("int", "anti-ray", ["0"], "from-down", by=-1),
        ],
        "monoid-ab": [
            _ray("monoid-ab", "ray", ["a0"], "a-powers", series="a", by=1),
            _ray("monoid-ab", "ray", ["ba0"], "b-a-powers", series="ba", by=1),
        ],
        "oriented-tree3": [
            _ray("oriented-tree3", "ray", ["x0"], "forward", series="x", by=1),
            _ray("oriented-tree3", "anti-ray", ["x0"], "backward", series="x", by=-1),
            _ray("oriented-tree3", "ray", ["x0", "t0"], "branch0", rule="append", digit="0"),
            _ray("oriented-tree3", "anti-ray", ["t0"], "branch0-in", rule="append", digit="0"),
            _ray("oriented-tree3", "ray", ["x0", "x1", "t1"], "branch1", rule="append", digit="1"),
        ],
    }
    return list(pools[name])
