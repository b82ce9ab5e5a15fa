import pytest

from dhg import truncate
from dhg.boundary import (Classification, Outcome, RayClass, audit_no_3_chain, classify,
                          extract_geodesic_ray, is_geodesic_ray, relate_equiv, relate_leq,
                          sweep, tail_within)
from dhg.errors import DomainError, ExpansionNeeded, PreconditionError
from dhg.families import GeneratedFamily
from dhg.geodesics import is_geodesic
from dhg.rays import Kind, RaySpec, StepRule, builtin_rays, materialize, materialize_in


def rays(family):
    return {r.label: r for r in builtin_rays(family)}


def shifted(ray, k):
    seq = materialize(ray, max(k, len(ray.prefix) - 1))
    return RaySpec(ray.family, ray.kind, tuple(seq[k:]), ray.step, f"{ray.label}+{k}")


def _skip_out(name):
    i = int(name[1:])
    return [f"s{i + 1}", f"s{i + 2}"]


def _skip_in(name):
    i = int(name[1:])
    return [f"s{j}" for j in (i - 1, i - 2) if j >= 0]


# a one-way line with extra edges s_i -> s_{i+2}; its unit-step ray is a
# (2, 1)-quasi-geodesic but not a geodesic
SKIP = GeneratedFamily("skip-line", _skip_out, _skip_in, ("s0",),
                       valid=lambda v: v[0] == "s" and v[1:].isdigit())
SKIP_RAY = RaySpec(SKIP, Kind.RAY, ("s0",), StepRule("shift", (("by", 1), ("series", "s"))), "unit")


def test_materialize():
    assert materialize(rays("nat")["up"], 3) == ("0", "1", "2", "3")
    assert materialize(rays("ex-topbound")["eta"], 2) == ("v0", "v1", "v2")
    mu = rays("ex-topbound")["mu"]
    assert materialize(mu, 2) == ("x0", "x1", "x2")
    g = truncate("ex-topbound", 6).graph
    assert g.has_edge("x2", "x1") and g.has_edge("x1", "x0")


def test_materialize_rejects_non_edges():
    bad = RaySpec(rays("ex-topbound")["eta"].family, Kind.RAY, ("v0", "x0"),
                  StepRule("shift", (("series", "x"),)))
    with pytest.raises(DomainError):
        materialize(bad, 3)


def test_materialize_in_needs_expansion():
    trunc = truncate("nat", 4)
    with pytest.raises(ExpansionNeeded) as exc:
        materialize_in(trunc, rays("nat")["up"], 7)
    assert exc.value.required_radius > 4
    assert materialize_in(trunc, rays("nat")["up"]) == ("0", "1", "2", "3", "4")


def test_ray_json_round_trip():
    for fam in ("ex-topbound", "oriented-tree3"):
        for r in builtin_rays(fam):
            again = RaySpec.from_json(r.to_json())
            assert again == r and again.key() == r.key()


def test_geodesic_rays():
    assert is_geodesic_ray(rays("nat")["up"], 10).geodesic
    check = is_geodesic_ray(rays("ex-topbound")["eta"], 8)
    assert check.geodesic and check.certified
    bad = is_geodesic_ray(SKIP_RAY, 6)
    assert not bad.geodesic and bad.certified
    assert bad.witness == ("s0", "s1", "s2")


def test_eta_below_mu_at_every_radius():
    eta, mu = rays("ex-topbound")["eta"], rays("ex-topbound")["mu"]
    for r in range(0, 8):
        v = relate_leq(eta, mu, 2, r, 20)
        assert v.outcome is Outcome.HOLDS
        a, b, c = v.witness
        assert a[0] == "v" and b[0] == "w" and c[0] == "x"


def test_mu_not_below_eta():
    eta, mu = rays("ex-topbound")["eta"], rays("ex-topbound")["mu"]
    assert relate_leq(mu, eta, 5, 6, 20).outcome is Outcome.FAILS


def test_short_truncation_is_inconclusive():
    eta, mu = rays("ex-topbound")["eta"], rays("ex-topbound")["mu"]
    v = relate_leq(mu, eta, 5, 6, 12)
    assert v.outcome is Outcome.INCONCLUSIVE and v.reason


def test_resolution_precondition():
    eta, mu = rays("ex-topbound")["eta"], rays("ex-topbound")["mu"]
    with pytest.raises(PreconditionError):
        relate_leq(eta, mu, 4, 6, 10)


def test_reflexive_and_shifted():
    eta = rays("ex-topbound")["eta"]
    v = relate_leq(eta, eta, 0, 4, 12)
    assert v.holds and len(v.witness) == 1
    later = shifted(eta, 1)
    there, back = relate_equiv(eta, later, 1, 4, 16)
    assert there.holds and back.holds


def test_independent_anti_rays():
    r = rays("ex-dist0")
    there, back = relate_equiv(r["eta"], r["mu"], 4, 4, 20)
    assert there.outcome is Outcome.FAILS and back.outcome is Outcome.FAILS


def test_sweep_requires_every_radius():
    eta, mu = rays("ex-topbound")["eta"], rays("ex-topbound")["mu"]
    assert sweep(relate_leq, eta, mu, [2, 4, 6], M=4, N=20).holds
    assert sweep(relate_leq, mu, eta, [2, 4, 6], M=4, N=20).outcome is Outcome.FAILS


def test_topbound_classes():
    cls = classify(builtin_rays("ex-topbound"), 4, [4, 6, 8], 24)
    assert len(cls.classes) == 2 and not cls.flags
    assert cls.leq("eta", "mu") and not cls.leq("mu", "eta")
    assert audit_no_3_chain(cls).passed


def test_dist0_classes():
    cls = classify(builtin_rays("ex-dist0"), 4, [4, 6, 8], 20)
    assert len(cls.classes) == 3 and not cls.flags
    assert cls.leq("omega", "eta") and cls.leq("omega", "mu")
    assert not cls.leq("eta", "mu") and not cls.leq("mu", "eta")
    assert not cls.leq("eta", "omega")
    assert audit_no_3_chain(cls).passed


def test_int_line_has_two_incomparable_points():
    r = rays("int")
    cls = classify([r["up"], r["from-down"]], 4, [4, 6], 20)
    assert len(cls.classes) == 2 and not cls.order and not cls.flags


def test_shifted_copies_share_a_class():
    eta = rays("ex-topbound")["eta"]
    cls = classify([eta, shifted(eta, 2), shifted(eta, 5)], 4, [4, 6], 20)
    assert len(cls.classes) == 1


def test_workers_do_not_change_the_answer():
    pool = builtin_rays("oriented-tree3")
    a = classify(pool, 3, [2, 4], 12)
    b = classify(pool, 3, [2, 4], 12, workers=4)
    assert a.to_json() == b.to_json()


def test_classification_json_round_trip():
    cls = classify(builtin_rays("ex-dist0"), 4, [4], 12)
    again = Classification.from_json(cls.to_json())
    assert [c.label for c in again.classes] == [c.label for c in cls.classes]
    assert again.order == cls.order


def test_single_class_passes_vacuously():
    cls = classify(builtin_rays("nat"), 4, [4], 12)
    assert len(cls.classes) == 1 and audit_no_3_chain(cls).passed


def test_chain_audit_catches_a_long_chain():
    r = rays("ex-dist0")
    fake = Classification("boundary", (RayClass((r["omega"],)), RayClass((r["eta"],)),
                                       RayClass((r["mu"],))),
                          frozenset({(0, 1), (1, 2), (0, 2)}), {})
    report = audit_no_3_chain(fake)
    assert not report.passed
    kinds = {v["kind"] for v in report.violations}
    assert "chain" in kinds and "content" in kinds


def test_extraction_from_a_geodesic():
    eta = rays("ex-topbound")["eta"]
    ext = extract_geodesic_ray(eta, "v0", 12)
    trunc = truncate("ex-topbound", 12)
    assert ext.walk[0] == "v0" and is_geodesic(trunc.graph, ext.walk)
    assert ext.walk[:5] == ("v0", "v1", "v2", "v3", "v4")
    assert extract_geodesic_ray(rays("nat")["up"], "0", 10).walk == tuple(str(i) for i in range(11))


def test_extraction_straightens_a_quasi_geodesic():
    ext = extract_geodesic_ray(SKIP_RAY, "s0", 10)
    trunc = truncate(SKIP, 10)
    assert is_geodesic(trunc.graph, ext.walk)
    assert len(ext.walk) > 3
    assert ext.corridor <= 1


def test_equivalent_rays_have_close_tails():
    r = rays("int")
    trunc = truncate("int", 16)
    k, n = tail_within(trunc, r["up"], r["from-up"], 0)
    assert k == 0 and n > 0
    eta = rays("ex-topbound")["eta"]
    trunc = truncate("ex-topbound", 16)
    k, n = tail_within(trunc, eta, shifted(eta, 3), 0)
    assert k == 0
