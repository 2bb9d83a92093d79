"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Times Howell forms over Z/m for random matrices and the decomposable-span
enumeration used by the class-2 formula, on both backends, and checks that
the two produce identical output.
"""

import argparse
import random
import sys
import timeit

from brunr import _backend
from brunr.class2 import example_case, pfaffian_family_subspace, s_group


def howell_cases(quick):
    rng = random.Random(0)
    sizes = [(20, 20, 8), (40, 40, 12), (60, 30, 64)] if quick else [(40, 40, 12), (80, 80, 36), (150, 100, 64),
                                                                     (200, 120, 360)]
    for r, c, m in sizes:
        rows = [[rng.randrange(m) for _ in range(c)] for _ in range(r)]
        yield f"howell {r}x{c} mod {m}", (lambda rows=rows, c=c, m=m, b=None:
                                            _backend.howell_form(rows, c, m, backend=b))


def span_cases(quick):
    S = s_group(example_case(5, 5))
    yield f"decomposable_span case 5, p=5 (|S| = 5^{len(S)})", (lambda b=None: _backend.decomposable_span(S, 4, 5, backend=b))
    if not quick:
        S, _ = pfaffian_family_subspace(3, 3)
        yield f"decomposable_span block family m=3, p=3 (|S| = 3^{len(S)})", (
            lambda b=None: _backend.decomposable_span(S, 6, 3, backend=b))
        full = [[int(i == j) for j in range(10)] for i in range(10)]
        yield "decomposable_span all of Lambda^2 F_3^5 (3^10)", (
            lambda b=None: _backend.decomposable_span(full, 5, 3, backend=b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)
    if _backend._compiled is None:
        print("compiled kernels are not built; only the pure-Python backend is available", file=sys.stderr)
        return 1
    print(f"{'kernel':58s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    for name, fn in [*howell_cases(args.quick), *span_cases(args.quick)]:
        if fn(b="cython") != fn(b="python"):
            print(f"{name}: backends DISAGREE", file=sys.stderr)
            return 2
        tc = min(timeit.repeat(lambda: fn(b="cython"), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(b="python"), number=1, repeat=args.repeat))
        print(f"{name:58s} {tc:10.4f} {tp:10.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
