"""Named end-to-end checks on the registered families.

Each recipe returns a report with a list of named checks; a recipe passes
when all of its checks do.
"""
from .boundary import audit_no_3_chain, classify, is_geodesic_ray, tail_within
from .ends import classify_ends, refinement_map
from .extdist import INF
from .families import truncate
from .hyperbolicity import audit_transitive_cover, audit_triangle_sides, delta_of, derive_constants
from .digraph import independent_set_lower_bound
from .rays import builtin_rays
from .report import manifest
from .visual import (WorkingSet, audit_quasi_ultrametric, audit_visual_sandwich,
                     neighborhood, visual_matrix, zero_trend)

__all__ = ["RECIPES", "run_recipe"]


class _Checks:
    def __init__(self):
        self.items = []

    def add(self, name, passed, detail=None):
        entry = {"name": name, "passed": bool(passed)}
        if detail is not None:
            entry["detail"] = detail
        self.items.append(entry)

    @property
    def passed(self):
        return all(c["passed"] for c in self.items)


def _rays(family):
    return {r.label: r for r in builtin_rays(family)}


def _count_recipe(family, expected, M=4, rs=(4, 6, 8), N=20):
    checks = _Checks()
    cls = classify(builtin_rays(family), M, rs, N)
    checks.add("class-count", len(cls.classes) == expected,
               {"expected": expected, "found": len(cls.classes)})
    checks.add("no-flags", not cls.flags, cls.flags or None)
    checks.add("no-long-chains", audit_no_3_chain(cls).passed)
    return checks, {"classification": cls.to_json()}


def nat_one_point():
    return _count_recipe("nat", 1)


def int_two_points():
    checks, extra = _count_recipe("int", 2)
    cls = classify(builtin_rays("int"), 4, (4, 6, 8), 20)
    checks.add("incomparable", not cls.order)
    return checks, extra


def monoid_ab_one_point():
    checks, extra = _count_recipe("monoid-ab", 1)
    trunc = truncate("monoid-ab", 20)
    ab = trunc.bounded_dist("a1", "ba0")
    ba = trunc.bounded_dist("ba0", "a1")
    checks.add("dist(a,b) = inf", ab.value is INF and ab.exact)
    checks.add("dist(b,a) = inf", ba.value is INF and ba.exact)
    extra["dist"] = {"a->b": ab.value, "b->a": ba.value, "certified": ab.exact and ba.exact}
    return checks, extra


def topbound_boundary():
    checks = _Checks()
    rays = _rays("ex-topbound")
    eta, mu = rays["eta"], rays["mu"]
    cls = classify([eta, mu], 4, (4, 6, 8), 24)
    checks.add("two-classes", len(cls.classes) == 2)
    checks.add("eta <= mu", cls.leq(eta, mu))
    checks.add("not mu <= eta", not cls.leq(mu, eta))
    checks.add("no-long-chains", audit_no_3_chain(cls).passed)
    trunc = truncate("ex-topbound", 24)
    hoods = {}
    for r in (2, 4, 6, 8):
        minus = neighborhood(trunc, eta, "v0", r, "minus")
        plus = neighborhood(trunc, mu, "v0", r, "plus")
        hoods[r] = {"minus": sorted(minus), "plus": sorted(plus)}
        ws = [v for v in minus | plus if v.startswith("w")]
        checks.add(f"no w-vertices at r={r}", not ws, ws or None)
        checks.add(f"C-(eta) has u,v at r={r}", {f"u{r + 1}", f"v{r + 1}"} <= minus)
        checks.add(f"C+(mu) has x,y at r={r}", {f"x{r}", f"y{r}"} <= plus)
    ends = classify_ends([eta, mu], (4, 6, 8), 24)
    ends_later = classify_ends([eta, mu], (4, 6, 8), 29)
    _, ref = refinement_map(cls, ends)
    checks.add("ends stable at N+5", len(ends.classes) == len(ends_later.classes))
    checks.add("boundary refines ends", ref.passed)
    small = truncate("ex-topbound", 12).graph
    delta = delta_of(small).delta
    k, total = tail_within(trunc, eta, mu, 6 * delta)
    checks.add("tail of mu near eta", total - k >= total // 2, {"tailStart": k, "length": total})
    checks.add("eta is a geodesic ray", is_geodesic_ray(eta, 16).geodesic)
    seq = []
    S = ("v0", "x0")
    consts = derive_constants(truncate("ex-topbound", 40).graph)
    eps = consts.default_eps()
    for N in (12, 16, 20):
        ws = WorkingSet.build("ex-topbound", [eta, mu], N, radius=40)
        vm = visual_matrix(S, ws, eps, consts)
        seq.append((vm.d_at("class:eta", "class:mu"), vm.d_at("class:mu", "class:eta")))
    forward = [a for a, _ in seq]
    checks.add("d(eta,mu) decreases", zero_trend(forward) != "not-decreasing", forward)
    checks.add("d(mu,eta) stays away from 0", all(b == float("inf") or b > 0.5 for _, b in seq))
    return checks, {"classification": cls.to_json(), "neighbourhoods": hoods,
                    "ends": ends.to_json(), "delta": delta,
                    "visual": {"eps": eps, "windows": [12, 16, 20], "d": seq}}


def dist0_zero_distance():
    checks = _Checks()
    rays = _rays("ex-dist0")
    omega, eta, mu = rays["omega"], rays["eta"], rays["mu"]
    cls = classify([omega, eta, mu], 4, (4, 6, 8), 20)
    checks.add("three-classes", len(cls.classes) == 3)
    checks.add("omega <= eta", cls.leq(omega, eta))
    checks.add("omega <= mu", cls.leq(omega, mu))
    checks.add("eta, mu incomparable", not cls.leq(eta, mu) and not cls.leq(mu, eta))
    checks.add("no-long-chains", audit_no_3_chain(cls).passed)
    consts = derive_constants(truncate("ex-dist0", 40).graph)
    eps = consts.default_eps()
    S = ("x0",)
    rows = []
    audits = []
    for N in (12, 16, 20):
        ws = WorkingSet.build("ex-dist0", [omega, eta, mu], N, radius=40)
        vm = visual_matrix(S, ws, eps, consts)
        L = vm.labels
        rows.append({
            "N": N,
            "omega-eta": vm.d_at(L[0], L[1]), "omega-mu": vm.d_at(L[0], L[2]),
            "eta-mu": vm.d_at(L[1], L[2]), "mu-eta": vm.d_at(L[2], L[1]),
            "rho-eta-mu": vm.rho_at(L[1], L[2]), "rho-mu-eta": vm.rho_at(L[2], L[1]),
        })
        audits.append(audit_quasi_ultrametric(vm.rho, consts, eps, L).passed)
        audits.append(audit_visual_sandwich(vm.d, vm.rho, eps, consts, L).passed)
    for key in ("omega-eta", "omega-mu"):
        vals = [r[key] for r in rows]
        checks.add(f"d({key}) decreases", zero_trend(vals) != "not-decreasing", vals)
    floor_ok = all(r["eta-mu"] >= 0.5 * r["rho-eta-mu"] and r["mu-eta"] >= 0.5 * r["rho-mu-eta"]
                   for r in rows)
    checks.add("d(eta,mu), d(mu,eta) above half of rho", floor_ok)
    checks.add("visual audits", all(audits))
    g = truncate("ex-dist0", 20).graph
    size, members = independent_set_lower_bound(g, ["y5", "z5"])
    checks.add("y5, z5 independent", size == 2, list(members))
    return checks, {"classification": cls.to_json(), "eps": eps, "windows": rows}


RECIPES = {
    "topbound-boundary": topbound_boundary,
    "dist0-zero-distance": dist0_zero_distance,
    "monoid-ab-one-point": monoid_ab_one_point,
    "int-two-points": int_two_points,
    "nat-one-point": nat_one_point,
}


def run_recipe(name):
    checks, extra = RECIPES[name]()
    report = {
        "recipe": name,
        "checks": checks.items,
        "passed": checks.passed,
        "manifest": manifest("recipe", {}, {"name": name}),
    }
    report.update(extra)
    return report
