import math
import random
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dhg import INF, truncate
from dhg.digraph import Digraph
from dhg.errors import DomainError, ParameterError
from dhg.hyperbolicity import derive_constants
from dhg.rays import RaySpec, builtin_rays, materialize
from dhg.visual import (WorkingSet, audit_neighborhood_shrink, audit_quasi_ultrametric,
                        audit_visual_sandwich, chain_closure, check_base, greedy_base,
                        independence_evidence, neighborhood, rho_eps, rho_S_eps, rho_s,
                        rho_windows, visual_matrix, zero_trend)

from conftest import make_graph
from oracles import brute_rho, random_digraph


def rays(family):
    return {r.label: r for r in builtin_rays(family)}


def vertex_ws(g):
    return WorkingSet((), SimpleNamespace(graph=g), 0, 0)


@pytest.fixture(scope="module")
def line():
    names = [f"p{i}" for i in range(6)]
    g = make_graph(names, [(f"p{i}", f"p{i + 1}") for i in range(5)])
    return g, derive_constants(g)


def test_vertex_cases(line):
    g, consts = line
    ws = vertex_ws(g)
    assert rho_s("p2", "p2", "p4", ws).value == 0
    assert rho_eps("p2", "p2", "p4", ws, 0.7, consts) == 1.0
    assert rho_s("p0", "p3", "p4", ws).value == 3
    assert math.isclose(rho_eps("p0", "p3", "p4", ws, 0.5, consts), math.exp(-1.5))
    assert math.isclose(rho_eps("p0", "p3", "p4", ws, 0.5, consts), 0.22313, abs_tol=1e-5)


def test_no_geodesic_means_infinite():
    g = Digraph(["a", "b"])
    ws = vertex_ws(g)
    est = rho_s("a", "a", "b", ws)
    assert est.value is INF and not est.connected
    consts = derive_constants(g)
    assert rho_eps("a", "a", "b", ws, 1.0, consts) == math.inf


def test_far_geodesics_give_zero():
    # a -> b never comes near s, although everything is finite from s
    g = make_graph(["s", "a", "b"], [("a", "b")])
    est = rho_s("s", "a", "b", vertex_ws(g))
    assert est.connected and est.value is INF
    assert rho_eps("s", "a", "b", vertex_ws(g), 1.0, derive_constants(g)) == 0.0


def test_base_sets(line):
    g, consts = line
    ws = vertex_ws(g)
    one = rho_S_eps(["p0"], "p3", "p4", ws, 0.5, consts)
    assert one == rho_eps("p0", "p3", "p4", ws, 0.5, consts)
    assert rho_S_eps(["p0", "p4"], "p3", "p4", ws, 0.5, consts) == 1.0


def test_eps_gate():
    consts = derive_constants(truncate("ex-topbound", 12).graph)
    ws = WorkingSet.build("ex-topbound", ["v0", "v1"], 4, radius=8)
    with pytest.raises(ParameterError, match="admissible"):
        rho_eps("v0", "v0", "v1", ws, 1.0, consts)
    with pytest.raises(ParameterError):
        rho_eps("v0", "v0", "v1", ws, 0, consts)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**31))
def test_rho_matches_geodesic_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    names, edges = random_digraph(rng, n, rng.randint(1, 3 * n))
    g = make_graph(names, edges)
    ws = vertex_ws(g)
    s = rng.choice(names)
    for a in names:
        for b in names:
            want, connected = brute_rho(names, edges, s, [a], [b])
            est = rho_s(s, a, b, ws)
            assert est.connected == connected
            if connected:
                assert (est.value is INF) if want == math.inf else est.value == want


def test_windowed_rho_matches_oracle():
    ws = WorkingSet.build("ex-dist0", list(builtin_rays("ex-dist0")), 8, radius=16)
    g = ws.trunc.graph
    names, edges = list(g.vertices), list(g.edges)
    for a in ws.points:
        for b in ws.points:
            sa = list(materialize(a, ws.N))[ws.n0:]
            sb = list(materialize(b, ws.N))[ws.n0:]
            want, connected = brute_rho(names, edges, "x0", sa, sb)
            est = rho_s("x0", a, b, ws)
            assert est.connected == connected
            if connected:
                assert est.value == want


def test_chain_closure_basics():
    rho = np.array([[0.3, 0.5], [0.9, 0.2]])
    d = chain_closure(rho)
    assert d[0, 0] == 0 and d[1, 1] == 0
    assert d[0, 1] == 0.5 and d[1, 0] == 0.9
    rho3 = np.array([[0, 0.9, 0.2], [0.9, 0, 0.9], [0.9, 0.3, 0]])
    assert math.isclose(chain_closure(rho3)[0, 1], 0.5)


@pytest.fixture(scope="module")
def dist0_setup():
    consts = derive_constants(truncate("ex-dist0", 40).graph)
    return consts, consts.default_eps()


def test_dist0_zero_distance_pattern(dist0_setup):
    consts, eps = dist0_setup
    fwd_eta, fwd_mu = [], []
    for N in (12, 16, 20):
        ws = WorkingSet.build("ex-dist0", list(builtin_rays("ex-dist0")), N, radius=40)
        vm = visual_matrix(("x0",), ws, eps, consts)
        L = vm.labels
        fwd_eta.append(vm.d_at(L[0], L[1]))
        fwd_mu.append(vm.d_at(L[0], L[2]))
        assert vm.d_at(L[1], L[2]) == math.inf and vm.d_at(L[2], L[1]) == math.inf
        assert audit_quasi_ultrametric(vm.rho, consts, eps, L).passed
        assert audit_visual_sandwich(vm.d, vm.rho, eps, consts, L).passed
    assert zero_trend(fwd_eta) != "not-decreasing"
    assert zero_trend(fwd_mu) != "not-decreasing"


def test_topbound_asymmetry():
    consts = derive_constants(truncate("ex-topbound", 40).graph)
    eps = consts.default_eps()
    r = rays("ex-topbound")
    forward, backward = [], []
    for N in (12, 16, 20):
        ws = WorkingSet.build("ex-topbound", [r["eta"], r["mu"]], N, radius=40)
        vm = visual_matrix(("v0", "x0"), ws, eps, consts)
        forward.append(vm.d_at("class:eta", "class:mu"))
        backward.append(vm.d_at("class:mu", "class:eta"))
    assert all(b > a for a, b in zip(forward[1:], forward))
    assert all(b == math.inf for b in backward)


def test_windows_helper(dist0_setup):
    consts, eps = dist0_setup
    r = rays("ex-dist0")
    ws = WorkingSet.build("ex-dist0", [r["omega"], r["eta"]], 16, radius=32)
    vals, stable = rho_windows(("x0",), r["omega"], r["eta"], ws, eps, consts)
    assert len(vals) == 3 and all(0 < v <= 1 for v in vals)
    assert isinstance(stable, bool)


def test_zero_trend_labels():
    assert zero_trend([0.5, 0.2, 1e-12]) == "zero-evidence"
    assert zero_trend([0.5, 0.4, 0.3]) == "decreasing"
    assert zero_trend([0.5, 0.5]) == "not-decreasing"


@pytest.mark.parametrize("family", ["ex-topbound", "ex-dist0", "nat", "int", "monoid-ab"])
def test_random_vertex_triples_pass_audits(family):
    consts = derive_constants(truncate(family, 12).graph)
    eps = consts.default_eps()
    rng = random.Random(family)
    trunc = truncate(family, 12)
    inner = sorted(v for v, k in trunc.level.items() if k <= 3)
    points = rng.sample(inner, min(5, len(inner)))
    ws = WorkingSet.build(family, points, 6, radius=12)
    S = trunc.family.visual_base
    vm = visual_matrix(S, ws, eps, consts)
    assert audit_quasi_ultrametric(vm.rho, consts, eps, vm.labels).passed
    assert audit_visual_sandwich(vm.d, vm.rho, eps, consts, vm.labels).passed


def test_two_point_sandwich_is_tight():
    consts = derive_constants(truncate("ex-dist0", 12).graph)
    eps = consts.default_eps()
    ws = WorkingSet.build("ex-dist0", ["x2", "y1"], 6, radius=12)
    vm = visual_matrix(("x0",), ws, eps, consts)
    assert vm.d[0, 1] == vm.rho[0, 1]
    assert audit_visual_sandwich(vm.d, vm.rho, eps, consts, vm.labels).passed


def test_audits_catch_bad_matrices():
    consts = derive_constants(truncate("ex-dist0", 12).graph)
    eps = consts.default_eps()
    rho = np.array([[0.0, 0.1, 0.9], [0.1, 0.0, 0.1], [0.9, 0.1, 0.0]])
    assert not audit_quasi_ultrametric(rho, consts, eps).passed
    d = np.zeros((3, 3))
    assert not audit_visual_sandwich(d, rho, eps, consts).passed


def test_base_checks():
    g = truncate("ex-dist0", 10).graph
    assert check_base(g, ["x0"]) == []
    two = make_graph(["a", "b"], [])
    assert check_base(two, ["a"]) == ["b"]
    base = greedy_base(two)
    assert check_base(two, base) == []
    with pytest.raises(DomainError):
        check_base(g, [])


def test_tree_has_no_single_vertex_base_check_on_interior():
    trunc = truncate("oriented-tree3", 6)
    base = greedy_base(trunc.graph)
    assert check_base(trunc.graph, base) == []


def test_topbound_neighbourhoods():
    trunc = truncate("ex-topbound", 24)
    r = rays("ex-topbound")
    for radius in (2, 4, 6):
        minus = neighborhood(trunc, r["eta"], "v0", radius, "minus")
        plus = neighborhood(trunc, r["mu"], "v0", radius, "plus")
        assert not any(v.startswith("w") for v in minus | plus)
        assert {f"u{i}" for i in range(radius + 1, 15)} <= minus
        assert {f"v{i}" for i in range(radius + 1, 15)} <= minus
        assert {f"x{i}" for i in range(radius, 15)} <= plus
        assert {f"y{i}" for i in range(radius, 15)} <= plus


def test_neighbourhood_without_avoidance():
    trunc = truncate("nat", 12)
    up = rays("nat")["up"]
    # the tail is R(9..12); y must reach all of it
    everything = neighborhood(trunc, up, "0", -1, "minus")
    assert everything == {str(i) for i in range(10)}
    without0 = neighborhood(trunc, up, "0", 0, "minus")
    assert "0" not in without0 and "1" in without0


def test_neighbourhood_side_needs_matching_direction():
    trunc = truncate("ex-topbound", 12)
    with pytest.raises(DomainError):
        neighborhood(trunc, rays("ex-topbound")["mu"], "v0", 2, "minus")


def test_neighbourhood_shrink_audit():
    trunc = truncate("ex-topbound", 24)
    r = rays("ex-topbound")
    kappa = derive_constants(truncate("ex-topbound", 12).graph).kappa
    eta = r["eta"]
    later = RaySpec(eta.family, eta.kind, ("v3",), eta.step, "eta+3")
    report = audit_neighborhood_shrink(trunc, eta, [later], "v0", 6, kappa, "minus")
    assert report.passed and report.checked > 0


def test_independence_evidence():
    g = truncate("ex-dist0", 10).graph
    assert independence_evidence(g, ["x0"], 4)["x0"] >= 2
