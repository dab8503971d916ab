"""Compare the compiled and pure-Python countermodel search kernels.

    python benchmarks/bench_kernels.py --count 40 --worlds 3
"""

import argparse
import statistics
import time

from recmodal import kernels
from recmodal.corpus import generate_corpus
from recmodal.formula import parse, render
from recmodal.oracle import search_countermodel

EXTRA = [
    "p |> q -> (r |> q -> (p | r) |> q)",
    "p |> q -> (p |> r -> p |> (q & r))",
    "(true |> p) |> p",
    "((p |> q) |> (q |> p)) | (p |> ~q)",
]


def time_backend(backend, formulas, worlds, det, repeat):
    per_formula = []
    hits = []
    for phi in formulas:
        best = float("inf")
        for _ in range(repeat):
            start = time.perf_counter()
            hit = search_countermodel(phi, worlds, det, backend=backend)
            best = min(best, time.perf_counter() - start)
        per_formula.append(best)
        hits.append(hit is not None)
    return per_formula, hits


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=40, help="corpus formulas to include")
    ap.add_argument("--worlds", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--deterministic", action="store_true")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python kernel is available")
    formulas = [parse(t) for t in EXTRA] + generate_corpus(args.count, args.seed)
    results = {}
    for b in backends:
        results[b] = time_backend(b, formulas, args.worlds, args.deterministic, args.repeat)

    if len(backends) == 2 and results["cython"][1] != results["python"][1]:
        raise SystemExit("backends disagree on countermodel existence")

    print(f"{len(formulas)} formulas, {args.worlds} worlds, {'deterministic' if args.deterministic else 'nondeterministic'} models")
    for b in backends:
        times = results[b][0]
        print(f"{b:<8} total {sum(times):8.3f}s  median {statistics.median(times) * 1e3:8.2f}ms  max {max(times) * 1e3:8.2f}ms")
    if len(backends) == 2:
        py, cy = results["python"][0], results["cython"][0]
        print(f"speedup  total {sum(py) / sum(cy):.1f}x")
        slowest = max(range(len(formulas)), key=lambda i: py[i])
        print(f"slowest for python: {render(formulas[slowest])} ({py[slowest] * 1e3:.1f}ms vs {cy[slowest] * 1e3:.2f}ms)")


if __name__ == "__main__":
    main()
