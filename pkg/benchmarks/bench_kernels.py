"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Each row runs one kernel on a family truncation with both backends and
checks that the outputs agree before reporting the speed-up.
"""
import argparse
import json
import sys
import time

import numpy as np

from dhg import kernels, truncate

CASES = [("ex-topbound", 16), ("ex-topbound", 40), ("ex-dist0", 40), ("monoid-ab", 40),
         ("oriented-tree3", 6)]


def _inputs(family, radius):
    g = truncate(family, radius).graph
    indptr, indices = g.csr()
    D = kernels.apsp(indptr, indices, g.n)
    F, G = kernels.bottleneck_tables(D, indptr, indices)
    return g, indptr, indices, D, F, G


def _stages(g, indptr, indices, D, F, G):
    return {
        "apsp": lambda: kernels.apsp(indptr, indices, g.n),
        "bottleneck": lambda: kernels.bottleneck_tables(D, indptr, indices),
        "delta_scan": lambda: kernels.delta_scan(D, F, G),
        "b_profile": lambda: kernels.b_profile(D, 6),
        "cover_scan": lambda: kernels.cover_scan(D, F, G),
    }


def _same(a, b):
    if isinstance(a, tuple) and not isinstance(a[0], np.ndarray):
        return tuple(map(int, a)) == tuple(map(int, b))
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def run(repeat):
    if "cython" not in kernels.available():
        sys.exit("compiled extension not built; run: pip install -e . --no-build-isolation")
    rows = []
    for family, radius in CASES:
        args = _inputs(family, radius)
        for stage in _stages(*args):
            timings = {}
            outputs = {}
            for backend in ("python", "cython"):
                with kernels.use_backend(backend):
                    fn = _stages(*args)[stage]
                    timings[backend], outputs[backend] = _time(fn, repeat)
            rows.append({
                "family": family, "radius": radius, "n": args[0].n, "kernel": stage,
                "python_s": timings["python"], "cython_s": timings["cython"],
                "speedup": timings["python"] / max(timings["cython"], 1e-9),
                "agree": _same(outputs["python"], outputs["cython"]),
            })
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = run(args.repeat)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'family':<16}{'n':>5}  {'kernel':<14}{'python':>10}{'cython':>10}{'x':>8}  agree")
        for r in rows:
            print(f"{r['family']:<16}{r['n']:>5}  {r['kernel']:<14}{r['python_s']:>10.4f}"
                  f"{r['cython_s']:>10.4f}{r['speedup']:>8.1f}  {r['agree']}")
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
