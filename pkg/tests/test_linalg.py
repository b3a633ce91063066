import numpy as np
import pytest
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from cforge import _kernels as K
from cforge import linalg as la
from cforge.errors import InconsistentSystem, InvalidInput


def sympy_rref(m, p):
    F = GF(p)
    M = DomainMatrix([[F(int(x)) for x in row] for row in m], m.shape, F)
    R, piv = M.rref()
    return np.array([[int(x) % p for x in row] for row in R.to_list()], dtype=np.int64), list(piv)


@pytest.mark.parametrize("p", [2, 3, 101, 32003])
def test_rref_matches_sympy(p):
    rng = np.random.default_rng(p)
    for _ in range(20):
        r, c = rng.integers(1, 8, size=2)
        m = rng.integers(0, p, size=(r, c))
        if rng.random() < 0.5:  # force dependencies
            m[-1] = (m[0] * 3 + m[-1] * 0) % p
        R, piv, rk = la.rref(m, p)
        R2, piv2 = sympy_rref(m, p)
        assert piv == piv2 and rk == len(piv2)
        assert np.array_equal(R, R2)


def test_nullspace_and_solve():
    p = 32003
    rng = np.random.default_rng(5)
    for _ in range(30):
        m = rng.integers(0, p, size=(4, 7))
        m[3] = (m[0] + 2 * m[1]) % p
        N = la.nullspace(m, p)
        assert N.shape[0] == 7 - la.rank(m, p)
        assert not la.matmul(m, N.T, p).any()
        x0 = rng.integers(0, p, size=7)
        b = la.matmul(m, x0.reshape(-1, 1), p)[:, 0]
        x, ker = la.solve(m, b, p)
        assert np.array_equal(la.matmul(m, x.reshape(-1, 1), p)[:, 0], b)
        assert ker.shape == N.shape


def test_inconsistent_and_singular():
    p = 7
    with pytest.raises(InconsistentSystem):
        la.solve(np.array([[1, 1], [2, 2]]), np.array([1, 3]), p)
    with pytest.raises(InconsistentSystem):
        la.inverse(np.array([[1, 2], [2, 4]]), p)
    a = np.array([[2, 1], [1, 1]])
    assert np.array_equal(la.matmul(a, la.inverse(a, p), p), np.eye(2, dtype=np.int64))


def test_prime_checks():
    with pytest.raises(InvalidInput):
        la.check_prime(15)
    assert la.is_prime(32003) and not la.is_prime(1)


def test_large_inner_dimension_does_not_overflow():
    p = 32003
    a = np.full((2, 50000), p - 1, dtype=np.int64)
    # sum of 50000 copies of (p-1)^2 = 50000 mod p
    out = la.matmul(a, a.T.copy(), p)
    assert out[0, 0] == 50000 % p


@pytest.mark.skipif(not K._HAVE_NUMBA, reason="numba missing")
def test_backends_agree():
    rng = np.random.default_rng(11)
    for p in (2, 5, 32003):
        for _ in range(10):
            m = rng.integers(0, p, size=(6, 9))
            R1, p1 = K.rref_numpy(m, p)
            R2, p2 = K.rref_numba(m, p)
            assert np.array_equal(R1 % p, R2 % p) and list(p1) == list(p2)
            b = rng.integers(0, p, size=(9, 40))
            assert np.array_equal(K.matmul_numpy(m, b, p), K.matmul_numba(m, b, p))


@pytest.mark.skipif(not K._HAVE_NUMBA, reason="numba missing")
def test_idempotent_scan_backends_agree():
    # F_2 x F_2 with basis e1, e2: idempotents e1, e2
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0, 0] = 1
    T[1, 1, 1] = 1
    unit = np.array([1, 1])
    for p in (2, 3):
        a = K.idempotent_scan_numpy(T, p, unit)
        b = K.idempotent_scan_numba(T, p, unit)
        assert np.array_equal(a, b) and np.array_equal(a, [1, 0])
    # F_4 = F_2[x]/(x^2+x+1): a field, no nontrivial idempotent
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0] = [1, 0]
    T[0, 1] = T[1, 0] = [0, 1]
    T[1, 1] = [1, 1]
    assert K.idempotent_scan_numpy(T, 2, np.array([1, 0])) is None
    assert K.idempotent_scan_numba(T, 2, np.array([1, 0])) is None


def test_polynomials():
    p = 7
    f = la.pmul([1, 1], [6, 1], p)  # (x+1)(x-1), lowest degree first
    assert f == [6, 0, 1]
    assert la.pdivmod(f, [1, 1], p) == ([6, 1], [])
    assert la.minimal_polynomial([[0, 1], [1, 0]], p) == [6, 0, 1]


def test_env_flag_selects_numpy_backend():
    import os
    import subprocess
    import sys
    code = ("import cforge, json; from cforge.cli import fixture_path; from cforge.problem import load_problem;"
            "from cforge.decomposition import decompose;"
            "P = load_problem(fixture_path('example-9vertex'));"
            "print(cforge.BACKEND, len(decompose(P.complexes['D']).parts))")
    out = {}
    for flag in ("1", "0"):
        env = dict(os.environ, CFORGE_DISABLE_NUMBA=flag)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[flag] = r.stdout.split()
    assert out["1"] == ["numpy", "1"]
    assert out["0"][1] == "1" and out["0"][0] == ("numba" if K._HAVE_NUMBA else "numpy")
