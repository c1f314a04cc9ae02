"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Reports the best-of-N wall time per call for the Jacobi eigensolver and for
the ensemble descent used by the convex-roof search, and the speed-up.
"""

import argparse
import timeit

import numpy as np

from quditent import _pykernels

try:
    from quditent import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def _hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


def _ensemble(rows, dim, seed):
    rng = np.random.default_rng(seed)
    w = rng.standard_normal((rows, dim)) + 1j * rng.standard_normal((rows, dim))
    return w / np.linalg.norm(w)


def _best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def cases():
    for n in (4, 9, 16, 36):
        h = _hermitian(n, n)
        yield f"jacobi_eigh n={n}", lambda impl, h=h: impl.jacobi_eigh(h)
    for m, n, measure, name, sweeps in (
        (2, 2, 0, "concurrence", 5),
        (2, 2, 1, "negativity", 5),
        (3, 3, 1, "negativity", 1),
    ):
        w0 = _ensemble(2 * m, m * n, m + n)

        def run(impl, w0=w0, m=m, n=n, measure=measure, sweeps=sweeps):
            impl.roof_descent(w0.copy(), m, n, measure, 1e-3, sweeps)

        yield f"roof_descent {m}x{n} {name} ({sweeps} sweeps)", run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'case':44s} {'python':>12s} {'cython':>12s} {'speed-up':>9s}")
    for name, fn in cases():
        t_py = _best(lambda: fn(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:44s} {t_py * 1e3:10.3f}ms")
            continue
        t_c = _best(lambda: fn(_ckernels), args.repeat)
        print(f"{name:44s} {t_py * 1e3:10.3f}ms {t_c * 1e3:10.3f}ms {t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()
