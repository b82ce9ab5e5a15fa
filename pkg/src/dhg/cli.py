"""``dhg`` command line.

Exit codes: 0 ok, 1 audit violations, 2 usage errors, 3 capacity or
expansion errors. Errors are also written to stderr as ``{"error": ...}``.
"""
import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .boundary import Classification, audit_no_3_chain, classify, relate_leq
from .digraph import Digraph, Side, dist, ingest_edge_list
from .ends import classify_ends, refinement_map
from .errors import DhgError, DomainError
from .families import FAMILIES, get_family, truncate
from .geodesics import QiSpec, qi_check
from .hyperbolicity import (Sampled, audit_transitive_cover, audit_triangle_sides, b_profile, delta_of,
                            derive_constants)
from .rays import RaySpec, builtin_rays
from .recipes import RECIPES, run_recipe
from .report import content_hash, dumps, manifest
from .visual import (WorkingSet, audit_quasi_ultrametric, audit_visual_sandwich, greedy_base,
                     interior, check_base, neighborhood, visual_matrix)


class UsageError(DhgError):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _workers():
    raw = os.environ.get("DHG_WORKERS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"DHG_WORKERS must be an integer, got {raw!r}") from None
    return max(1, value)


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_json(path, inputs):
    text = _read(path)
    inputs[str(path)] = content_hash(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from None


def _graph(args, inputs):
    """(graph, truncation or None) from --family/--radius or --input."""
    if args.family and args.input:
        raise UsageError("give either --family or --input, not both")
    if args.family:
        trunc = truncate(args.family, args.radius)
        inputs[f"family:{args.family}"] = f"radius:{args.radius}"
        return trunc.graph, trunc
    if args.input:
        text = _read(args.input)
        inputs[str(args.input)] = content_hash(text)
        if args.input.endswith(".json"):
            return Digraph.from_json(json.loads(text)), None
        return ingest_edge_list(text), None
    raise UsageError("need --family NAME or --input FILE")


def _rays(args, inputs):
    if args.rays in (None, "builtin"):
        if not args.family:
            raise UsageError("builtin rays need --family")
        return builtin_rays(args.family)
    data = _read_json(args.rays, inputs)
    items = data["rays"] if isinstance(data, dict) else data
    return [RaySpec.from_json(item) for item in items]


def _radii(text):
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad radius list {text!r}") from None


def _common(p):
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--input")
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--seed", type=int)
    p.add_argument("--pretty", action="store_true")


def build_parser():
    parser = _Parser(prog="dhg", description="Hyperbolic digraph toolkit")
    parser.add_argument("--version", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        return p

    cmd("ingest", "parse an edge list into canonical JSON")
    cmd("gen", "truncate a registered family")
    p = cmd("dist", "directed distances between two vertices")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p = cmd("delta", "hyperbolicity constant with a witness triangle")
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--samples", type=int, default=1000)
    p = cmd("bprofile", "largest finite distance inside balls")
    p.add_argument("--side", choices=["out", "in"], default="out")
    p.add_argument("--rmax", type=int, default=6)
    p = cmd("triangles-audit", "side-length and transitive-triangle audits")
    p.add_argument("--eps", default="1")

    for group in ("boundary", "ends"):
        gp = sub.add_parser(group, help=f"{group} classification")
        gsub = gp.add_subparsers(dest="action", parser_class=_Parser)
        p = gsub.add_parser("classes")
        _common(p)
        p.add_argument("--rays", default="builtin")
        if group == "boundary":
            p.add_argument("--M", type=int, default=4)
        p.add_argument("--r", default="4,6,8")
        p.add_argument("--N", type=int, default=24)
        if group == "boundary":
            p = gsub.add_parser("relate")
            _common(p)
            p.add_argument("--rays", default="builtin")
            p.add_argument("--a", required=True)
            p.add_argument("--b", required=True)
            p.add_argument("--M", type=int, default=4)
            p.add_argument("--r", type=int, default=4)
            p.add_argument("--N", type=int, default=24)
        else:
            p = gsub.add_parser("refine")
            _common(p)
            p.add_argument("--boundary", required=True)
            p.add_argument("--ends", required=True)

    p = cmd("refine", "boundary classes, end classes and the map between them")
    p.add_argument("--rays", default="builtin")
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--r", default="4,6,8")
    p.add_argument("--N", type=int, default=24)

    p = cmd("vismetric", "visual pseudo-semimetric on a working set")
    p.add_argument("--base", default="auto")
    p.add_argument("--working", default="builtin")
    p.add_argument("--eps", default="auto")
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--n0", type=int)

    p = cmd("neighborhood", "vertices joined to a class tail by avoiding geodesics")
    p.add_argument("--rays", default="builtin")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--side", choices=["plus", "minus"], required=True)

    p = cmd("qi-check", "audit a map between two digraphs")
    p.add_argument("--target", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--no-codense", action="store_true")

    p = sub.add_parser("recipe", help="run a named end-to-end check")
    p.add_argument("name", nargs="?", choices=sorted(RECIPES))
    p.add_argument("--all", action="store_true")
    p.add_argument("--pretty", action="store_true")
    sub.add_parser("version", help="print the tool version")
    return parser


def _params(args):
    skip = {"pretty", "command", "action", "version"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _status(*reports):
    return 1 if any(not r.passed for r in reports) else 0


def _cmd_ingest(args, inputs):
    if not args.input:
        raise UsageError("ingest needs --input FILE")
    g, _ = _graph(args, inputs)
    return {"digraph": g.to_json()}, 0


def _cmd_gen(args, inputs):
    if not args.family:
        raise UsageError("gen needs --family")
    g, trunc = _graph(args, inputs)
    return {"digraph": g.to_json(), "frontier": sorted(trunc.frontier), "radius": trunc.radius}, 0


def _cmd_dist(args, inputs):
    g, trunc = _graph(args, inputs)
    out = {"from": args.source, "to": args.target,
           "dist": dist(g, args.source, args.target), "reverse": dist(g, args.target, args.source)}
    out["dist_sym"] = min(out["dist"], out["reverse"])
    if trunc is not None:
        out["exact"] = trunc.bounded_dist(args.source, args.target).exact
        out["reverseExact"] = trunc.bounded_dist(args.target, args.source).exact
    return out, 0


def _cmd_delta(args, inputs):
    g, _ = _graph(args, inputs)
    if args.mode == "sampled":
        if args.seed is None:
            raise UsageError("sampled mode needs --seed")
        mode = Sampled(args.seed, args.samples)
    else:
        mode = "exact"
    return delta_of(g, mode).to_json(), 0


def _cmd_bprofile(args, inputs):
    g, _ = _graph(args, inputs)
    return b_profile(g, args.side, args.rmax).to_json(), 0


def _cmd_triangles(args, inputs):
    g, _ = _graph(args, inputs)
    d = delta_of(g).delta
    consts = derive_constants(g, d, rmax=d + 2 + int(Fraction(args.eps)))
    a = audit_triangle_sides(g, d, consts.out_profile, consts.in_profile, Fraction(args.eps))
    b = audit_transitive_cover(g, d, consts)
    return {"delta": d, "constants": consts.to_json(), "audits": [a.to_json(), b.to_json()]}, _status(a, b)


def _cmd_boundary(args, inputs):
    rays = _rays(args, inputs)
    if args.action == "classes":
        cls = classify(rays, args.M, _radii(args.r), args.N, workers=_workers())
        audit = audit_no_3_chain(cls)
        return {"classification": cls.to_json(), "audit": audit.to_json()}, _status(audit)
    if args.action == "relate":
        by = {r.describe(): r for r in rays}
        try:
            a, b = by[args.a], by[args.b]
        except KeyError as exc:
            raise UsageError(f"unknown ray label {exc.args[0]!r}") from None
        return {"verdict": relate_leq(a, b, args.M, args.r, args.N).to_json()}, 0
    raise UsageError("boundary needs 'classes' or 'relate'")


def _cmd_ends(args, inputs):
    if args.action == "classes":
        cls = classify_ends(_rays(args, inputs), _radii(args.r), args.N, workers=_workers())
        return {"classification": cls.to_json()}, 0
    if args.action == "refine":
        b = Classification.from_json(_read_json(args.boundary, inputs)["classification"])
        e = Classification.from_json(_read_json(args.ends, inputs)["classification"])
        mapping, report = refinement_map(b, e)
        return {"map": mapping, "audit": report.to_json()}, _status(report)
    raise UsageError("ends needs 'classes' or 'refine'")


def _cmd_refine(args, inputs):
    rays = _rays(args, inputs)
    rs = _radii(args.r)
    b = classify(rays, args.M, rs, args.N, workers=_workers())
    e = classify_ends(rays, rs, args.N, workers=_workers())
    mapping, report = refinement_map(b, e)
    return {"boundary": b.to_json(), "ends": e.to_json(), "map": mapping,
            "audit": report.to_json()}, _status(report)


def _working_set(args, inputs):
    if args.working == "builtin":
        if not args.family:
            raise UsageError("builtin working set needs --family")
        return WorkingSet.build(args.family, builtin_rays(args.family), args.N, args.n0)
    data = _read_json(args.working, inputs)
    family = get_family(data["family"])
    named = {r.label: r for r in builtin_rays(family)}
    points = []
    for p in data["points"]:
        if isinstance(p, str):
            points.append(p)
        elif "ray" in p:
            points.append(named[p["ray"]])
        else:
            points.append(RaySpec.from_json(p))
    n0, N = data.get("window", [None, args.N])
    return WorkingSet.build(family, points, N, n0, data.get("radius"))


def _cmd_vismetric(args, inputs):
    ws = _working_set(args, inputs)
    g = ws.trunc.graph
    if args.base == "auto":
        S = ws.trunc.family.visual_base or greedy_base(g)
    else:
        data = _read_json(args.base, inputs)
        S = tuple(data["members"] if isinstance(data, dict) else data)
    consts = derive_constants(g) if g.n <= 320 else derive_constants(
        truncate(ws.trunc.family, max(4, ws.trunc.radius // 2)).graph)
    eps = consts.default_eps() if args.eps == "auto" else float(Fraction(args.eps))
    vm = visual_matrix(S, ws, eps, consts)
    qu = audit_quasi_ultrametric(vm.rho, consts, eps, vm.labels)
    sw = audit_visual_sandwich(vm.d, vm.rho, eps, consts, vm.labels)
    return {"matrix": vm.to_json(), "constants": consts.to_json(),
            "audits": [qu.to_json(), sw.to_json()]}, _status(qu, sw)


def _cmd_neighborhood(args, inputs):
    if not args.family:
        raise UsageError("neighborhood needs --family")
    rays = {r.describe(): r for r in _rays(args, inputs)}
    if args.cls not in rays:
        raise UsageError(f"unknown class label {args.cls!r}")
    trunc = truncate(args.family, args.radius)
    hood = neighborhood(trunc, rays[args.cls], args.x, args.r, args.side)
    return {"class": args.cls, "x": args.x, "r": args.r, "side": args.side,
            "vertices": sorted(hood)}, 0


def _cmd_qi(args, inputs):
    g1, _ = _graph(args, inputs)
    text = _read(args.target)
    inputs[args.target] = content_hash(text)
    g2 = Digraph.from_json(json.loads(text)) if args.target.endswith(".json") else ingest_edge_list(text)
    spec = QiSpec.from_json(_read_json(args.spec, inputs))
    report = qi_check(g1, g2, spec, codense=not args.no_codense)
    return report.to_json(), _status(report)


COMMANDS = {
    "ingest": _cmd_ingest, "gen": _cmd_gen, "dist": _cmd_dist, "delta": _cmd_delta,
    "bprofile": _cmd_bprofile, "triangles-audit": _cmd_triangles, "boundary": _cmd_boundary,
    "ends": _cmd_ends, "refine": _cmd_refine, "vismetric": _cmd_vismetric,
    "neighborhood": _cmd_neighborhood, "qi-check": _cmd_qi,
}


def _emit(obj, pretty, stream=None):
    (stream or sys.stdout).write(dumps(obj, pretty) + "\n")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.version or args.command == "version":
            _emit({"toolVersion": __version__}, False)
            return 0
        if args.command is None:
            raise UsageError("no command given; try 'dhg --help'")
        if args.command == "recipe":
            names = sorted(RECIPES) if args.all else [args.name] if args.name else []
            if not names:
                raise UsageError("recipe needs a name or --all")
            reports = [run_recipe(n) for n in names]
            body = reports[0] if len(reports) == 1 and not args.all else {"recipes": reports}
            _emit(body, args.pretty)
            return 0 if all(r["passed"] for r in reports) else 1
        inputs = {}
        body, status = COMMANDS[args.command](args, inputs)
        command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
        body = dict(body)
        body["manifest"] = manifest(command, inputs, _params(args))
        _emit(body, args.pretty)
        return status
    except DhgError as exc:
        _emit({"error": exc.payload()}, False, sys.stderr)
        return exc.exit_code
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
