"""Ends of locally finite digraphs and the boundary-to-ends map.

``R1 <= R2`` for ends asks for a directed path of any length from R1 to R2
that avoids the out- and in-balls of radius r around the base. Negative
answers only speak about the truncation searched; callers that need
stability re-run at a larger N.
"""
from .audit import AuditReport
from .boundary import (Outcome, ResolutionVerdict, _base, _beyond, _same_family, _search,
                       avoided_region, classify_with)
from .errors import DomainError, PreconditionError
from .families import truncate
from .rays import materialize_in

__all__ = ["relate_end", "classify_ends", "refinement_map"]


def relate_end(r1, r2, r, N, base=None):
    family = _same_family(r1, r2)
    if not family.locally_finite:
        raise DomainError(f"{family.name} is not locally finite; ends need finite degrees")
    if N < r + 1:
        raise PreconditionError(f"need N >= r + 1, got N={N}, r={r}")
    base = _base(family, base)
    trunc = truncate(family, N)
    blocked = avoided_region(trunc, base, r)
    s1 = materialize_in(trunc, r1)
    s2 = materialize_in(trunc, r2)
    params = {"r": r, "N": N, "base": list(base)}
    path = _search(trunc.graph, s1, s2, blocked)
    if path is not None:
        return ResolutionVerdict("end-leq", params, Outcome.HOLDS, witness=path)
    if min(_beyond(s1, blocked), _beyond(s2, blocked)) < 1:
        return ResolutionVerdict("end-leq", params, Outcome.INCONCLUSIVE,
                                 reason="a ray has no vertex outside the avoided balls")
    return ResolutionVerdict("end-leq", params, Outcome.FAILS,
                             reason=f"no avoiding path inside the radius-{N} truncation")


def classify_ends(rays, rs, N, base=None, workers=1):
    rs = [rs] if isinstance(rs, int) else list(rs)
    return classify_with(relate_end, "ends", rays, rs, {"N": N},
                         workers=workers, N=N, base=base)


def refinement_map(boundary, ends):
    """Map boundary classes to end classes; fail if one straddles two."""
    report = AuditReport("boundary-refines-ends")
    mapping = {}
    for i, cls in enumerate(boundary.classes):
        targets = set()
        for m in cls.members:
            report.checked += 1
            try:
                targets.add(ends.index_of(m))
            except DomainError:
                report.violations.append({"kind": "missing", "ray": m.describe()})
        if len(targets) > 1:
            report.violations.append({
                "kind": "straddle", "boundaryClass": cls.label,
                "endClasses": sorted(ends.classes[j].label for j in targets)})
        elif targets:
            mapping[cls.label] = ends.classes[targets.pop()].label
    report.extremal = {"map": mapping}
    return mapping, report
