"""Compiled Jacobi kernel against the pure-Python fallback.

    python benchmarks/bench_eig.py --dims 2 4 8 16 --repeat 200
"""

import argparse
import time

import numpy as np

from cstar_ineq import _kernel
from cstar_ineq.linalg import MAX_SWEEPS, OFFDIAG_RTOL


def _random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return np.ascontiguousarray(0.5 * (g + g.conj().T))


def time_backend(backend, mats):
    t0 = time.perf_counter()
    for a in mats:
        _kernel.eigh(a, OFFDIAG_RTOL, MAX_SWEEPS, backend)
    return (time.perf_counter() - t0) / len(mats)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8, 16])
    p.add_argument("--repeat", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    backends = _kernel.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'dim':>4} " + " ".join(f"{b:>14}" for b in backends) + "   speedup   same bits")
    rng = np.random.default_rng(args.seed)
    for n in args.dims:
        mats = [_random_hermitian(rng, n) for _ in range(args.repeat)]
        times = {b: time_backend(b, mats) for b in backends}
        cells = " ".join(f"{times[b] * 1e6:11.1f} us" for b in backends)
        if len(backends) == 2:
            ref = [_kernel.eigh(a, OFFDIAG_RTOL, MAX_SWEEPS, "python") for a in mats[:20]]
            got = [_kernel.eigh(a, OFFDIAG_RTOL, MAX_SWEEPS, "compiled") for a in mats[:20]]
            same = all(np.array_equal(r[3], g[3]) and np.array_equal(r[4], g[4]) for r, g in zip(ref, got))
            print(f"{n:>4} {cells}   {times['python'] / times['compiled']:7.1f}x   {same}")
        else:
            print(f"{n:>4} {cells}")


if __name__ == "__main__":
    main()
