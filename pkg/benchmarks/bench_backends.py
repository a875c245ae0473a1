"""Time the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python benchmarks/bench_backends.py

The two backends compute bit-identical doubles; this script only measures
speed. Workloads mirror the heavy paths: a long splitter chain product, a
long outer-chain scan, and a full network propagation at M=40, N=200 with
blocks (the largest figure-grid point).
"""

import math
import timeit

from zenolink import _kernels_py
from zenolink import oracle
from zenolink.protocol import ProtocolParams

try:
    from zenolink import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def bench(label, func, repeat=5, number=20):
    best = min(timeit.repeat(func, repeat=repeat, number=number)) / number
    print(f"  {label:<28} {best * 1e3:9.3f} ms")
    return best


def main():
    chain_n = 10_000
    theta = math.pi / (2 * chain_n)
    chain_args = (math.cos(theta), math.sin(theta), 1.0, math.sqrt(1.0 - 1e-4), chain_n)

    scan_m = 10_000
    phi = math.pi / (2 * scan_m)
    scan_args = (math.cos(phi), math.sin(phi), math.sqrt(1.0 - 1e-4), 0.9, scan_m)

    params = ProtocolParams(40, 200, kappa1=3e-4, kappa2=1e-4, bob_blocks=True)
    network = oracle.build_network(params)
    encoded = oracle._encode(network)
    fold_args = (*encoded, network.mode_count, len(network.detectors), 1.0)

    workloads = (
        (f"chain_product, n={chain_n}", "chain_product", chain_args),
        (f"outer_scan, m={scan_m}", "outer_scan", scan_args),
        (f"propagate_fold, {len(network.elements)} elements", "propagate_fold", fold_args),
    )

    print("pure Python backend")
    python_times = {}
    for label, name, args in workloads:
        func = getattr(_kernels_py, name)
        python_times[name] = bench(label, lambda f=func, a=args: f(*a))

    if _kernels_c is None:
        print("compiled backend not built; install with the Cython extension to compare")
        return

    print("compiled backend")
    for label, name, args in workloads:
        func = getattr(_kernels_c, name)
        compiled = bench(label, lambda f=func, a=args: f(*a))
        print(f"  {'speedup':<28} {python_times[name] / compiled:9.1f} x")


if __name__ == "__main__":
    main()
