"""Compare the compiled and pure-Python search kernels.

    python benchmarks/bench_kernels.py [--order 4] [--repeat 3]
"""
import argparse
import random
import time

from aglab import _kernels_py

try:
    from aglab import _kernels as compiled
except ImportError:
    compiled = None

CASES = [
    ("AG", dict(ag=True)),
    ("AG, left identity", dict(ag=True, left_identity=True)),
    ("AG*", dict(ag=True, star=True)),
    ("AG up to iso", dict(ag=True, up_to_iso=True)),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    if compiled is None:
        print("compiled kernels not built; timing the fallback only")

    print(f"{'case':24s} {'count':>7s}" + "".join(f" {name:>10s}" for name, _ in backends) + "   speedup")
    for label, kw in CASES:
        row, counts = [], set()
        for _, k in backends:
            t, c = best_of(lambda: k.count(args.order, **kw), args.repeat)
            row.append(t)
            counts.add(c)
        assert len(counts) == 1, f"backends disagree on {label}: {counts}"
        speed = f"{row[0] / row[1]:8.1f}x" if len(row) == 2 else ""
        print(f"{label:24s} {counts.pop():7d}" + "".join(f" {t:9.3f}s" for t in row) + f"  {speed}")

    rng = random.Random(0)
    n = 6
    flats = [[rng.randrange(n) for _ in range(n * n)] for _ in range(200)]
    row = []
    for _, k in backends:
        t, _ = best_of(lambda: [k.canonical_form(f, n) for f in flats], args.repeat)
        row.append(t)
    speed = f"{row[0] / row[1]:8.1f}x" if len(row) == 2 else ""
    print(f"{'canonical form, n=6':24s} {len(flats):7d}" + "".join(f" {t:9.3f}s" for t in row) + f"  {speed}")


if __name__ == "__main__":
    main()
