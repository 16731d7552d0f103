"""Compiled vs. pure-Python kernels: pivoted QR and the row-norm rotation chain.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import sys
import timeit

import numpy as np

from levselect import kernels
from levselect.synthgen import power_law_targets

QR_SHAPES = [(50, 80), (200, 300), (400, 600)]
CHAIN_SIZES = [(200, 10), (1000, 20), (4000, 50)]


def chain_inputs(n, k):
    targets, _ = power_law_targets(n, k, 0.7)
    start = np.zeros((n, k))
    start[:k] = np.eye(k)
    return start, targets


def bench(fn, repeat):
    fn()  # warm up
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", help="also write the results here")
    args = p.parse_args(argv)

    impls = kernels.implementations()
    if "cython" not in impls:
        print("compiled extension not built; only the Python backend is timed", file=sys.stderr)
    rng = np.random.default_rng(0)
    rows = []
    for m, n in QR_SHAPES:
        a = rng.standard_normal((m, n))
        for name, mod in impls.items():
            rows.append(("pivoted_qr", f"{m}x{n}", name, bench(lambda: mod.pivoted_qr(a), args.repeat)))
    for n, k in CHAIN_SIZES:
        start, targets = chain_inputs(n, k)
        for name, mod in impls.items():
            rows.append(("row_norm_chain", f"n={n},k={k}", name,
                         bench(lambda: mod.row_norm_chain(start, targets), args.repeat)))

    print(f"{'kernel':<16}{'size':<16}{'backend':<10}{'seconds':>12}{'speedup':>10}")
    base = {(r[0], r[1]): r[3] for r in rows if r[2] == "python"}
    for kernel, size, name, secs in rows:
        print(f"{kernel:<16}{size:<16}{name:<10}{secs:>12.5f}{base[(kernel, size)] / secs:>9.1f}x")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([dict(kernel=k, size=s, backend=b, seconds=t) for k, s, b, t in rows], fh, indent=2)


if __name__ == "__main__":
    main()
