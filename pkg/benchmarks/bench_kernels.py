"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends live in ``cforge._kernels`` whatever CFORGE_DISABLE_NUMBA
says, so one process can time them side by side.  The first numba call of
each kernel is reported separately since it includes compilation.
"""
import argparse
import time

import numpy as np

from cforge import _kernels as K


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def scan_table(d):
    """F_p[x]/(x^d): local, so the scan visits all p^d candidates."""
    T = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d - i):
            T[i, j, i + j] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[0] = 1
    return T, unit


def cases(rng):
    p = 32003
    for n in (40, 120, 240):
        a = rng.integers(0, p, size=(n, n))
        yield f"rref {n}x{n} p={p}", lambda a=a: K.rref_numpy(a, p), lambda a=a: K.rref_numba(a, p)
    for n in (60, 200):
        a, b = rng.integers(0, p, size=(n, n)), rng.integers(0, p, size=(n, n))
        yield f"matmul {n}x{n} p={p}", lambda a=a, b=b: K.matmul_numpy(a, b, p), \
            lambda a=a, b=b: K.matmul_numba(a, b, p)
    for p, d in ((2, 14), (3, 9)):
        T, unit = scan_table(d)
        yield f"idempotent scan p={p} dim={d}", lambda T=T, u=unit, p=p: K.idempotent_scan_numpy(T, p, u), \
            lambda T=T, u=unit, p=p: K.idempotent_scan_numba(T, p, u)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K._HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"{'case':34s} {'numpy s':>10s} {'numba s':>10s} {'first numba s':>14s} {'speedup':>8s}")
    for name, fn_np, fn_nb in cases(rng):
        t = time.perf_counter()
        r_nb = fn_nb()
        first = time.perf_counter() - t
        r_np = fn_np()
        same = (r_np is None and r_nb is None) or all(
            np.array_equal(np.asarray(x) % 32003, np.asarray(y) % 32003)
            for x, y in zip(r_np if isinstance(r_np, tuple) else (r_np,),
                            r_nb if isinstance(r_nb, tuple) else (r_nb,)))
        if not same:
            raise SystemExit(f"backends disagree on {name}")
        t_np = best_of(fn_np, args.repeat)
        t_nb = best_of(fn_nb, args.repeat)
        print(f"{name:34s} {t_np:10.4f} {t_nb:10.4f} {first:14.3f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
