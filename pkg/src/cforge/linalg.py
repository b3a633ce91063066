"""Exact dense linear algebra over F_p.

Matrices are numpy int64 arrays with entries in [0, p).  Pivoting is
deterministic: columns are scanned left to right and inside a column the
first nonzero row (top to bottom) is taken.  Kernel vectors are returned as
rows.
"""
import numpy as np

from ._kernels import matmul_kernel, rref_kernel
from .errors import InconsistentSystem, InvalidInput

DEFAULT_PRIME = 32003
MAX_PRIME = 2 ** 31 - 1


def is_prime(n):
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p):
    """Validate ``p`` as the characteristic and return it as an int."""
    try:
        p = int(p)
    except (TypeError, ValueError):
        raise InvalidInput(f"prime must be an integer, got {p!r}")
    if not is_prime(p):
        raise InvalidInput(f"{p} is not a prime")
    if p > MAX_PRIME:
        raise InvalidInput(f"prime {p} exceeds the supported bound {MAX_PRIME}")
    return p


def as_mat(a, p, shape=None):
    a = np.asarray(a, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    return a % p


def matmul(a, b, p):
    return matmul_kernel(a, b, p)


def rref(m, p):
    """Reduced row echelon form.  Returns ``(R, pivots, rank)``."""
    m = np.asarray(m, dtype=np.int64)
    if m.ndim != 2:
        raise InvalidInput("rref expects a 2d matrix")
    R, piv = rref_kernel(m, p)
    piv = [int(c) for c in piv]
    return R, piv, len(piv)


def rank(m, p):
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return rref(m, p)[2]


def _kernel_from_rref(R, piv, ncols, p):
    free = [c for c in range(ncols) if c not in set(piv)]
    K = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        K[k, f] = 1
        for i, c in enumerate(piv):
            K[k, c] = (-R[i, f]) % p
    return K


def nullspace(m, p):
    """Basis (as rows) of ``{x : m @ x = 0}``."""
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv, _ = rref(m, p)
    return _kernel_from_rref(R, piv, cols, p)


def solve(a, b, p):
    """Solve ``a @ x = b``.

    Returns ``(x, K)``: the particular solution with all free variables at 0
    and a kernel basis (rows).  Raises InconsistentSystem when there is no
    solution.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise InvalidInput("right hand side has the wrong length")
    if rows == 0:
        return np.zeros(cols, dtype=np.int64), np.eye(cols, dtype=np.int64)
    aug = np.concatenate([a % p, (b % p)[:, None]], axis=1)
    R, piv, _ = rref(aug, p)
    if piv and piv[-1] == cols:
        raise InconsistentSystem("linear system is inconsistent")
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, cols]
    return x, _kernel_from_rref(R[:, :cols], piv, cols, p)


def solve_many(a, B, p):
    """Solve ``a @ X = B`` column by column (free variables at 0)."""
    a = np.asarray(a, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    rows, cols = a.shape
    k = B.shape[1]
    if rows == 0:
        return np.zeros((cols, k), dtype=np.int64)
    aug = np.concatenate([a % p, B % p], axis=1)
    R, piv, _ = rref(aug, p)
    if piv and piv[-1] >= cols:
        raise InconsistentSystem("linear system is inconsistent")
    X = np.zeros((cols, k), dtype=np.int64)
    for i, c in enumerate(piv):
        X[c] = R[i, cols:]
    return X


def inverse(a, p):
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise InvalidInput("inverse of a non-square matrix")
    try:
        X = solve_many(a, np.eye(n, dtype=np.int64), p)
    except InconsistentSystem:
        raise InconsistentSystem("matrix is singular") from None
    if rank(a, p) != n:
        raise InconsistentSystem("matrix is singular")
    return X


def row_basis(m, p):
    """Rows of the rref of ``m`` (a canonical basis of its row space)."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return m.copy(), []
    R, piv, r = rref(m, p)
    return R[:r].copy(), piv


def extend_to_complement(sub, full, p):
    """Indices of rows of ``full`` that extend the span of ``sub`` to the
    span of ``sub`` plus ``full``, scanned greedily in order."""
    sub = np.asarray(sub, dtype=np.int64)
    full = np.asarray(full, dtype=np.int64)
    n = full.shape[1]
    cur = sub.reshape(-1, n) % p
    r = rank(cur, p) if cur.shape[0] else 0
    chosen = []
    for i in range(full.shape[0]):
        trial = np.concatenate([cur, full[i:i + 1] % p], axis=0)
        rt = rank(trial, p)
        if rt > r:
            chosen.append(i)
            cur, r = trial, rt
    return chosen


# ------------------------------------------------------------- polynomials
# Polynomials are lists of ints, constant term first, no trailing zeros.

def ptrim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def pnorm(f, p):
    return ptrim([int(c) % p for c in f])


def pmonic(f, p):
    f = pnorm(f, p)
    if not f:
        return f
    inv = pow(f[-1], p - 2, p)
    return [(c * inv) % p for c in f]


def pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return ptrim(out)


def padd(f, g, p):
    n = max(len(f), len(g))
    return pnorm([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                  for i in range(n)], p)


def psub(f, g, p):
    return padd(f, [-c for c in g], p)


def pdivmod(f, g, p):
    f = pnorm(f, p)
    g = pnorm(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    r = list(f)
    while len(r) >= len(g) and r:
        c = (r[-1] * inv) % p
        s = len(r) - len(g)
        q[s] = c
        for i, b in enumerate(g):
            r[s + i] = (r[s + i] - c * b) % p
        r = ptrim(r)
    return ptrim(q), r


def pgcd(f, g, p):
    f, g = pnorm(f, p), pnorm(g, p)
    while g:
        f, g = g, pdivmod(f, g, p)[1]
    return pmonic(f, p)


def pxgcd(f, g, p):
    """Return ``(d, s, t)`` with ``s f + t g = d`` and ``d`` monic."""
    r0, r1 = pnorm(f, p), pnorm(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], p - 2, p)
    sc = [inv]
    return pmul(r0, sc, p), pmul(s0, sc, p), pmul(t0, sc, p)


def ppowmod(f, e, m, p):
    """``f**e mod m``."""
    result = [1]
    base = pdivmod(f, m, p)[1]
    while e:
        if e & 1:
            result = pdivmod(pmul(result, base, p), m, p)[1]
        base = pdivmod(pmul(base, base, p), m, p)[1]
        e >>= 1
    return pdivmod(result, m, p)[1]


def pderiv(f, p):
    return pnorm([i * c for i, c in enumerate(f)][1:], p)


def peval_matrix(f, a, p):
    """Evaluate the polynomial ``f`` at the square matrix ``a`` (Horner)."""
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in reversed(pnorm(f, p)):
        out = (matmul(out, a, p) + c * eye) % p
    return out


def minimal_polynomial(a, p):
    """Monic minimal polynomial of a square matrix, constant term first."""
    a = np.asarray(a, dtype=np.int64) % p
    n = a.shape[0]
    if a.shape != (n, n):
        raise InvalidInput("minimal polynomial of a non-square matrix")
    powers = [np.eye(n, dtype=np.int64).reshape(-1)]
    cur = np.eye(n, dtype=np.int64)
    for k in range(1, n + 2):
        cur = matmul(cur, a, p)
        M = np.stack(powers, axis=1)
        try:
            x, _ = solve(M, (-cur.reshape(-1)) % p, p)
        except InconsistentSystem:
            powers.append(cur.reshape(-1))
            continue
        return pnorm([int(c) for c in x] + [1], p)
    raise AssertionError("minimal polynomial degree exceeded n")  # pragma: no cover


# -------------------------------------------------------- algebra tables
# A structure table ``T`` of shape (d, d, d) holds in ``T[i, j]`` the
# coordinates of ``b_i * b_j``.

def table_mul(T, x, y, p):
    d = T.shape[0]
    outer = np.outer(np.asarray(x, dtype=np.int64) % p,
                     np.asarray(y, dtype=np.int64) % p) % p
    return matmul(outer.reshape(1, d * d), T.reshape(d * d, d), p)[0]


def is_commutative(T, p):
    return bool(np.array_equal(T % p, np.transpose(T, (1, 0, 2)) % p))


def frobenius_fixed_space(T, p):
    """Basis (rows) of ``{x : x^p = x}`` in a commutative F_p-algebra."""
    T = np.asarray(T, dtype=np.int64) % p
    if T.ndim != 3 or T.shape[0] != T.shape[1] or T.shape[1] != T.shape[2]:
        raise InvalidInput("structure table must have shape (d, d, d)")
    if not is_commutative(T, p):
        raise InvalidInput("Frobenius fixed space needs a commutative algebra")
    d = T.shape[0]
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64)
    cols = []
    for i in range(d):
        base = np.zeros(d, dtype=np.int64)
        base[i] = 1
        acc = None
        e = p
        while e:
            if e & 1:
                acc = base.copy() if acc is None else table_mul(T, acc, base, p)
            e >>= 1
            if e:
                base = table_mul(T, base, base, p)
        cols.append(acc)
    F = np.stack(cols, axis=1)
    return nullspace((F - np.eye(d, dtype=np.int64)) % p, p)


def frobenius_fixed_space_dim(T, p):
    return int(frobenius_fixed_space(T, p).shape[0])
