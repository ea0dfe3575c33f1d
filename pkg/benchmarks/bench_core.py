"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_core.py [--repeat N]

Prints one row per kernel with the best-of-N wall time for each backend and
the speed-up. Without the compiled core only the fallback column is filled.
"""

import argparse
import math
import timeit

import numpy as np

from freeelastica import _kernels, _pycore

K = 1.0 / math.sqrt(2.0)


def _cases():
    x = np.linspace(-10.0, 10.0, 20_000)
    a = np.linspace(0.0, 1.2, 2_000)
    grid = np.linspace(-1.0, 1.0, 801)
    u = 1.3 * (1.0 - grid * grid)
    dx = float(grid[1] - grid[0])
    return {
        "jacobi (scalar x 2000)": lambda be: [be.jacobi(float(v), K) for v in x[:2000]],
        "jacobi_array (20000)": lambda be: be.jacobi_array(x, K),
        "primitive_amp_array (2000)": lambda be: be.primitive_amp_array(a, a + 0.3),
        "graph_energy_grad (n=801)": lambda be: be.graph_energy_grad(u, dx),
        "agm_K + carlson_rf (x 2000)": lambda be: [be.agm_K(0.3) + be.carlson_rf(0.5, 1.0, 2.0)
                                                   for _ in range(1000)],
    }


def best_time(fn, backend, repeat):
    return min(timeit.repeat(lambda: fn(backend), number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    compiled = _kernels.backend if _kernels.COMPILED else None
    print(f"{'kernel':30}  {'python [s]':>11}  {'cython [s]':>11}  {'speed-up':>8}")
    for name, fn in _cases().items():
        tp = best_time(fn, _pycore, args.repeat)
        if compiled is None:
            print(f"{name:30}  {tp:11.4f}  {'-':>11}  {'-':>8}")
        else:
            tc = best_time(fn, compiled, args.repeat)
            print(f"{name:30}  {tp:11.4f}  {tc:11.4f}  {tp / tc:8.1f}")


if __name__ == "__main__":
    main()
