"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

from disparity_audit import _pykernels

try:
    from disparity_audit import _ckernels
except ImportError:
    _ckernels = None


def small_tables(limit=25):
    return [
        (a, b, c, n - a - b - c)
        for n in range(1, limit + 1)
        for a in range(n + 1)
        for b in range(n - a + 1)
        for c in range(n - a - b + 1)
    ]


LARGE_TABLES = [(300, 200, 250, 260), (1000, 5, 990, 30), (4000, 6000, 4500, 5500)]
GAMMA_ARGS = [(s / 2, x) for s in range(1, 101) for x in (0.1, 1.0, 10.0, 50.0, 200.0, 500.0)]

WORKLOADS = {
    "fisher, all 2x2 tables with n <= 25": (
        lambda k: [k.fisher_two_sided(*t) for t in SMALL]
    ),
    "fisher, three large tables": (lambda k: [k.fisher_two_sided(*t) for t in LARGE_TABLES]),
    "upper gamma Q, 600 (s, x) pairs": (lambda k: [k.upper_gamma_q(s, x) for s, x in GAMMA_ARGS]),
}
SMALL = small_tables()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled kernels not built; timing the Python backend only")

    print(f"{'workload':40s} " + " ".join(f"{b:>12s}" for b in backends) + "    speedup")
    for name, work in WORKLOADS.items():
        times = {
            b: min(timeit.repeat(lambda: work(mod), number=1, repeat=args.repeat))
            for b, mod in backends.items()
        }
        row = f"{name:40s} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
