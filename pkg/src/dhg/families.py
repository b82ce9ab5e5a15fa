"""Lazily generated infinite digraphs and their finite truncations.

A family is given by neighbour rules on vertex names. ``expand`` grows the
weak ball around the base vertices: every layer adds both out- and
in-neighbours. The truncation is the induced subgraph on that ball, so
edges between frontier vertices are kept and only vertices further out are
missing.
"""
import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

from .digraph import Digraph, dist
from .errors import DomainError, GenerationError
from .extdist import INF

__all__ = [
    "GeneratedFamily", "Truncation", "BoundedDist", "expand", "FAMILIES",
    "get_family", "truncate", "split_name",
]

_NAME = re.compile(r"^([a-z]*)(-?\d+)$")


def split_name(name):
    """``"v12" -> ("v", 12)``, ``"-3" -> ("", -3)``, ``"ba0" -> ("ba", 0)``."""
    m = _NAME.match(name)
    if m is None:
        raise DomainError(f"vertex name {name!r} has no series/index form")
    return m.group(1), int(m.group(2))


@dataclass(frozen=True, eq=False)
class GeneratedFamily:
    name: str
    out_neighbors: Callable
    in_neighbors: Callable
    base_vertices: tuple
    valid: Callable = lambda v: True
    # h with h(v) = h(u) + 1 on every edge; certifies missing paths
    grading: Optional[Callable] = None
    visual_base: Optional[tuple] = None
    locally_finite: bool = True
    description: str = ""

    def __repr__(self):
        return f"GeneratedFamily({self.name!r})"


class BoundedDist(NamedTuple):
    value: object
    exact: bool
    lower: object


@dataclass(eq=False)
class Truncation:
    family: GeneratedFamily
    radius: int
    graph: Digraph
    frontier: frozenset
    level: dict = field(repr=False)

    def __contains__(self, name):
        return name in self.level

    def bounded_dist(self, u, v):
        """Truncated distance plus whether it is the true distance.

        A walk of length l from u to v never leaves the weak ball of radius
        (level(u) + level(v) + l) / 2, so once that fits inside the
        truncation the search was complete for that length.
        """
        d = dist(self.graph, u, v)
        lu, lv = self.level[u], self.level[v]
        if not self.frontier:
            return BoundedDist(d, True, d)
        if d is not INF:
            exact = (lu + lv + d - 1) // 2 <= self.radius
            return BoundedDist(d, exact, d if exact else 0)
        grading = self.family.grading
        if grading is not None:
            length = grading(v) - grading(u)
            if length < 0 or (lu + lv + length) // 2 <= self.radius:
                return BoundedDist(INF, True, INF)
            return BoundedDist(INF, False, length)
        return BoundedDist(INF, False, max(0, 2 * self.radius - lu - lv + 1))

    def required_radius(self, u, v, length):
        return -(-(self.level[u] + self.level[v] + length) // 2)


def expand(family, radius, base=None, check=True):
    """Truncate ``family`` to the weak ball of ``radius`` around ``base``."""
    if radius < 0:
        raise DomainError("radius must be non-negative")
    base = tuple(base) if base is not None else tuple(family.base_vertices)
    level = {}
    order = []
    queue = deque()
    for b in base:
        _check_name(family, b, "base")
        if b not in level:
            level[b] = 0
            order.append(b)
            queue.append(b)
    while queue:
        u = queue.popleft()
        if level[u] == radius:
            continue
        for v in list(_rule(family, "out", u)) + list(_rule(family, "in", u)):
            if v not in level:
                level[v] = level[u] + 1
                order.append(v)
                queue.append(v)
    index = {v: i for i, v in enumerate(order)}
    edges = []
    for u in order:
        outs = _rule(family, "out", u)
        for v in outs:
            if v in index:
                edges.append((index[u], index[v]))
        if check:
            for v in outs:
                if v in index and u not in _rule(family, "in", v):
                    raise GenerationError(
                        f"{family.name}: {u}->{v} is an out-edge but {u} is not an in-neighbour of {v}")
    labels = []
    for v in order:
        try:
            labels.append(split_name(v))
        except DomainError:
            labels.append((v, None))
    graph = Digraph(order, edges, labels)
    frontier = frozenset(v for v in order if level[v] == radius)
    return Truncation(family, radius, graph, frontier, level)


def _check_name(family, name, context):
    if not isinstance(name, str) or not family.valid(name):
        raise GenerationError(f"{family.name}: malformed vertex id {name!r} ({context})")


def _rule(family, direction, u):
    fn = family.out_neighbors if direction == "out" else family.in_neighbors
    result = fn(u)
    for v in result:
        _check_name(family, v, f"{direction}-neighbour of {u}")
    return result


# -- registered families -------------------------------------------------

def _series_valid(allowed, nonneg=True):
    def valid(name):
        m = _NAME.match(name)
        if m is None or m.group(1) not in allowed:
            return False
        return int(m.group(2)) >= 0 or not nonneg
    return valid


def _topbound_out(name):
    s, i = split_name(name)
    if s == "u":
        return [f"v{i}"]
    if s == "v":
        return [f"w{i}", f"v{i + 1}"]
    if s == "w":
        return [f"x{i}"]
    if s == "x":
        return [f"y{i}"] + ([f"x{i - 1}"] if i > 0 else [])
    return []


def _topbound_in(name):
    s, i = split_name(name)
    if s == "v":
        return [f"u{i}"] + ([f"v{i - 1}"] if i > 0 else [])
    if s == "w":
        return [f"v{i}"]
    if s == "x":
        return [f"w{i}", f"x{i + 1}"]
    if s == "y":
        return [f"x{i}"]
    return []


def _dist0_out(name):
    s, i = split_name(name)
    if s == "x":
        return [f"x{i + 1}", f"y{i}", f"z{i}"]
    return [f"{s}{i - 1}"] if i > 0 else []


def _dist0_in(name):
    s, i = split_name(name)
    if s == "x":
        return [f"x{i - 1}"] if i > 0 else []
    return [f"x{i}", f"{s}{i + 1}"]


def _nat_out(name):
    return [str(int(name) + 1)]


def _nat_in(name):
    i = int(name)
    return [str(i - 1)] if i > 0 else []


def _int_out(name):
    i = int(name)
    return [str(i + 1), str(i - 1)]


def _int_in(name):
    i = int(name)
    return [str(i - 1), str(i + 1)]


# Monoid <a, b | aa = bb, ab = ba>: normal forms a^k ("ak") and b a^k ("bak").
# Right multiplication: a^k.a = a^(k+1), a^k.b = b a^k,
# b a^k.a = b a^(k+1), b a^k.b = a^(k+2).
def _monoid_out(name):
    s, k = split_name(name)
    if s == "a":
        return [f"a{k + 1}", f"ba{k}"]
    return [f"ba{k + 1}", f"a{k + 2}"]


def _monoid_in(name):
    s, k = split_name(name)
    if s == "a":
        return ([f"a{k - 1}"] if k >= 1 else []) + ([f"ba{k - 2}"] if k >= 2 else [])
    return ([f"ba{k - 1}"] if k >= 1 else []) + [f"a{k}"]


def _monoid_length(name):
    s, k = split_name(name)
    return k if s == "a" else k + 1


# Three-regular tree: a directed double ray x_i -> x_{i+1}; each x_i has a
# third edge x_i -> t_i into a binary tree whose edges go both ways.
# Tree vertices are "t<i>" and "t<i>_<bits>".
_TREE = re.compile(r"^t(-?\d+)(?:_([01]+))?$")


def _tree_valid(name):
    return _TREE.match(name) is not None or _series_valid({"x"}, nonneg=False)(name)


def _tree_children(name):
    sep = "" if "_" in name else "_"
    return [f"{name}{sep}0", f"{name}{sep}1"]


def _tree_parent(name):
    m = _TREE.match(name)
    bits = m.group(2)
    if bits is None:
        return None
    return name[:-1] if len(bits) > 1 else name[: name.index("_")]


def _tree_out(name):
    if name.startswith("x"):
        _, i = split_name(name)
        return [f"x{i + 1}", f"t{i}"]
    parent = _tree_parent(name)
    return ([parent] if parent is not None else []) + _tree_children(name)


def _tree_in(name):
    if name.startswith("x"):
        _, i = split_name(name)
        return [f"x{i - 1}"]
    parent = _tree_parent(name)
    if parent is None:
        _, i = split_name(name)
        return [f"x{i}"] + _tree_children(name)
    return [parent] + _tree_children(name)


FAMILIES = {
    f.name: f
    for f in (
        GeneratedFamily(
            "ex-topbound", _topbound_out, _topbound_in, ("v0",),
            valid=_series_valid({"u", "v", "w", "x", "y"}),
            visual_base=("v0", "x0"),
            description="ray v0 v1 ... and anti-ray ... x1 x0 joined by v_i -> w_i -> x_i",
        ),
        GeneratedFamily(
            "ex-dist0", _dist0_out, _dist0_in, ("x0",),
            valid=_series_valid({"x", "y", "z"}),
            visual_base=("x0",),
            description="ray x0 x1 ... with edges x_i -> y_i, x_i -> z_i into two anti-rays",
        ),
        GeneratedFamily(
            "nat", _nat_out, _nat_in, ("0",),
            valid=_series_valid({""}), grading=int, visual_base=("0",),
            description="Cayley digraph of (N, +) with generator 1",
        ),
        GeneratedFamily(
            "int", _int_out, _int_in, ("0",),
            valid=_series_valid({""}, nonneg=False), visual_base=("0",),
            description="Cayley digraph of (Z, +) with generators +1, -1",
        ),
        GeneratedFamily(
            "monoid-ab", _monoid_out, _monoid_in, ("a0",),
            valid=_series_valid({"a", "ba"}), grading=_monoid_length,
            visual_base=("a0",),
            description="Cayley digraph of <a, b | aa = bb, ab = ba>",
        ),
        GeneratedFamily(
            "oriented-tree3", _tree_out, _tree_in, ("x0",),
            valid=_tree_valid,
            description="3-regular tree with a directed double ray, other edges bidirected",
        ),
    )
}


def get_family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None


@lru_cache(maxsize=64)
def _cached(name, radius):
    return expand(FAMILIES[name], radius)


def truncate(family, radius):
    """Cached ``expand`` for registered families; direct for others."""
    if isinstance(family, str):
        get_family(family)
        return _cached(family, radius)
    if FAMILIES.get(family.name) is family:
        return _cached(family.name, radius)
    return expand(family, radius)
