"""Compare the compiled kernels with the numpy fallback.

    python bench/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

from sortnet import _fallback
from sortnet.generators import batcher_oddeven_sort, known_network

try:
    from sortnet import _kernels
except ImportError:
    _kernels = None


def cases():
    for name in ("paper17d10", "paper19d11", "paper20d11"):
        yield name, known_network(name)
    for n in (22, 24):
        yield f"batcher{n}", batcher_oddeven_sort(n)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = [("numpy", _fallback)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels is None:
        print("compiled kernels not built; timing the fallback only")

    print(f"{'kernel':<14}{'network':<12}{'inputs':>10}" + "".join(f"{name:>12}" for name, _ in impls) + f"{'speedup':>10}")
    for name, net in cases():
        comps = net.comparator_array()
        total = 1 << net.n
        for kernel in ("first_failure", "output_codes"):
            if kernel == "output_codes" and net.n > 20:
                continue
            times = [best(lambda m=mod: getattr(m, kernel)(net.n, comps, 0, total), args.repeat) for _, mod in impls]
            speedup = f"{times[0] / times[1]:.1f}x" if len(times) == 2 else "-"
            cells = "".join(f"{t * 1000:>10.1f}ms" for t in times)
            print(f"{kernel:<14}{name:<12}{total:>10}{cells}{speedup:>10}")


if __name__ == "__main__":
    main()
