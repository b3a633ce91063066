"""Low level mod-p kernels.

Two interchangeable backends: numba-compiled loops and plain numpy.  The
numba path is used when numba imports and ``CFORGE_DISABLE_NUMBA`` is unset
(or "0").  Both return identical results; the benchmark in ``benchmarks/``
compares them.
"""
import os

import numpy as np

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def _flag_off(name):
    return os.environ.get(name, "0").strip().lower() in ("", "0", "false", "no")


USE_NUMBA = _HAVE_NUMBA and _flag_off("CFORGE_DISABLE_NUMBA")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _inner_chunk(p):
    # largest number of products p^2 that can be summed without int64 overflow
    return max(1, (2 ** 63 - 1) // ((p - 1) * (p - 1) + 1) - 1)


# ---------------------------------------------------------------- numpy path

def rref_numpy(a, p):
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def matmul_numpy(a, b, p):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    k = a.shape[1]
    step = _inner_chunk(p)
    if k <= step:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        out = (out + a[:, s:s + step] @ b[s:s + step]) % p
    return out


# ---------------------------------------------------------------- numba path

if _HAVE_NUMBA:

    @njit
    def _inv_mod(x, p):
        # extended Euclid, x assumed nonzero mod p
        r0, r1 = p, x % p
        s0, s1 = 0, 1
        while r1 != 0:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        return s0 % p

    @njit
    def _rref_nb(a, p):
        rows, cols = a.shape
        for i in range(rows):
            for j in range(cols):
                a[i, j] %= p
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = t
            inv = _inv_mod(a[r, c], p)
            for j in range(cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return pivots[:r]

    @njit
    def _matmul_nb(a, b, p, step):
        n, k = a.shape
        m = b.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for t in range(k):
                x = a[i, t]
                if x == 0:
                    continue
                for j in range(m):
                    out[i, j] += x * b[t, j]
                if (t + 1) % step == 0:
                    for j in range(m):
                        out[i, j] %= p
            for j in range(m):
                out[i, j] %= p
        return out

    def rref_numba(a, p):
        a = np.array(a, dtype=np.int64)
        piv = _rref_nb(a, np.int64(p))
        return a, piv

    def matmul_numba(a, b, p):
        a = np.ascontiguousarray(a, dtype=np.int64) % p
        b = np.ascontiguousarray(b, dtype=np.int64) % p
        return _matmul_nb(a, b, np.int64(p), np.int64(_inner_chunk(p)))


def rref_kernel(a, p):
    """Return ``(R, pivots)`` for the reduced row echelon form of ``a`` mod p."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return a.reshape(a.shape) % p, np.zeros(0, dtype=np.int64)
    if USE_NUMBA:
        return rref_numba(a, p)
    return rref_numpy(a, p)


def matmul_kernel(a, b, p):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if USE_NUMBA and a.shape[0] * a.shape[1] * b.shape[1] > 4096:
        return matmul_numba(a, b, p)
    return matmul_numpy(a, b, p)


# ------------------------------------------------------ idempotent scan
# Exhaustive search for a nontrivial idempotent in a small algebra given by
# its structure table T (T[i, j] = coordinates of b_i b_j).  Candidates are
# visited in the order of their base-p integer encoding (coordinate 0 is the
# least significant digit).

def _digits(idx, p, d):
    out = np.empty((idx.shape[0], d), dtype=np.int64)
    rest = idx.copy()
    for k in range(d):
        out[:, k] = rest % p
        rest //= p
    return out


def idempotent_scan_numpy(T, p, unit, chunk=4096):
    d = T.shape[0]
    total = p ** d
    Tm = T.reshape(d * d, d)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        X = _digits(idx, p, d)
        outer = (X[:, :, None] * X[:, None, :]).reshape(idx.shape[0], d * d) % p
        sq = matmul_numpy(outer, Tm, p)
        ok = np.all(sq == X, axis=1)
        ok &= np.any(X != 0, axis=1)
        ok &= np.any(X != unit[None, :], axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            return X[hit[0]].copy()
    return None


if _HAVE_NUMBA:

    @njit
    def _scan_nb(T, p, unit):
        d = T.shape[0]
        total = 1
        for _ in range(d):
            total *= p
        x = np.zeros(d, dtype=np.int64)
        sq = np.zeros(d, dtype=np.int64)
        for n in range(total):
            r = n
            for k in range(d):
                x[k] = r % p
                r //= p
            for k in range(d):
                sq[k] = 0
            for i in range(d):
                if x[i] == 0:
                    continue
                for j in range(d):
                    if x[j] == 0:
                        continue
                    c = (x[i] * x[j]) % p
                    for k in range(d):
                        sq[k] = (sq[k] + c * T[i, j, k]) % p
            same = True
            zero = True
            one = True
            for k in range(d):
                if sq[k] != x[k]:
                    same = False
                    break
                if x[k] != 0:
                    zero = False
                if x[k] != unit[k]:
                    one = False
            if same and not zero and not one:
                return n
        return -1

    def idempotent_scan_numba(T, p, unit):
        T = np.ascontiguousarray(T, dtype=np.int64)
        n = _scan_nb(T, np.int64(p), np.ascontiguousarray(unit, dtype=np.int64))
        if n < 0:
            return None
        return _digits(np.array([n], dtype=np.int64), p, T.shape[0])[0]


def idempotent_scan(T, p, unit):
    """First nontrivial idempotent (coordinates) or None."""
    T = np.asarray(T, dtype=np.int64) % p
    unit = np.asarray(unit, dtype=np.int64) % p
    if T.shape[0] == 0:
        return None
    if USE_NUMBA:
        return idempotent_scan_numba(T, p, unit)
    return idempotent_scan_numpy(T, p, unit)
