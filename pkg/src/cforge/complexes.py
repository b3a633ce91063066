"""Bounded complexes of projectives, chain maps and homotopy.

A complex lives on an interval ``[lo, hi]`` of degrees with differentials of
degree +1; outside the interval every object is zero.  A chain map is stored
on the union of the intervals of its domain and codomain.
"""
import numpy as np

from . import linalg as la
from .algebra import (ProjMorphism, compose, layout, left_compose_matrix,
                      right_compose_matrix)
from .errors import InvalidInput, NotAChainMap, NotAComplex


class Complex:
    __slots__ = ("alg", "lo", "objs", "diffs")

    def __init__(self, alg, lo, objs, diffs=None, check=True):
        self.alg = alg
        self.lo = int(lo)
        self.objs = tuple(tuple(int(v) for v in o) for o in objs)
        n = len(self.objs)
        if diffs is None:
            diffs = [None] * max(n - 1, 0)
        diffs = list(diffs)
        if len(diffs) != max(n - 1, 0):
            raise InvalidInput("a complex on k degrees needs k - 1 differentials")
        out = []
        for k, d in enumerate(diffs):
            src, tgt = self.objs[k], self.objs[k + 1]
            if d is None:
                d = ProjMorphism.zero(alg, src, tgt)
            if d.dom != src or d.cod != tgt:
                raise InvalidInput(f"differential in degree {self.lo + k} has the wrong shape")
            out.append(d)
        self.diffs = tuple(out)
        if check:
            bad = self.failing_degree()
            if bad is not None:
                raise NotAComplex(f"d^{bad + 1} o d^{bad} is not zero")

    @property
    def hi(self):
        return self.lo + len(self.objs) - 1

    def obj(self, i):
        if self.lo <= i <= self.hi:
            return self.objs[i - self.lo]
        return ()

    def d(self, i):
        """Differential ``X^i -> X^{i+1}``."""
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return ProjMorphism.zero(self.alg, self.obj(i), self.obj(i + 1))

    def failing_degree(self):
        for k in range(len(self.diffs) - 1):
            if not compose(self.diffs[k + 1], self.diffs[k]).is_zero():
                return self.lo + k
        return None

    def is_zero(self):
        return all(not o for o in self.objs)

    def support(self):
        degs = [self.lo + k for k, o in enumerate(self.objs) if o]
        return (min(degs), max(degs)) if degs else None

    def restrict(self, lo, hi):
        """Brutal truncation to the degrees ``lo..hi`` (padding with zeros)."""
        objs = [self.obj(i) for i in range(lo, hi + 1)]
        diffs = [self.d(i) for i in range(lo, hi)]
        return Complex(self.alg, lo, objs, diffs, check=False)

    def trimmed(self):
        s = self.support()
        if s is None:
            return Complex(self.alg, self.lo, [], check=False)
        return self.restrict(*s)

    def same_as(self, other):
        """Equality after padding both to a common interval."""
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        for i in range(lo, hi + 1):
            if self.obj(i) != other.obj(i):
                return False
        return all(self.d(i) == other.d(i) for i in range(lo, hi))

    def __repr__(self):
        labs = self.alg.labels
        parts = ["+".join(f"P{labs[v]}" for v in o) or "0" for o in self.objs]
        return f"Complex[{self.lo},{self.hi}](" + " -> ".join(parts) + ")"

    def to_dict(self):
        labs = self.alg.labels
        return {
            "lo": self.lo,
            "objects": [[labs[v] for v in o] for o in self.objs],
            "differentials": {str(self.lo + k): d.to_entries()
                              for k, d in enumerate(self.diffs) if not d.is_zero()},
        }

    @classmethod
    def from_dict(cls, alg, d):
        lo = int(d.get("lo", 0))
        objs = [alg.obj(*o) for o in d["objects"]]
        diffs = [None] * max(len(objs) - 1, 0)
        for key, entries in (d.get("differentials") or {}).items():
            k = int(key) - lo
            if not 0 <= k < len(diffs):
                raise InvalidInput(f"differential in degree {key} is outside the complex")
            diffs[k] = ProjMorphism.from_terms(alg, objs[k], objs[k + 1], entries)
        return cls(alg, lo, objs, diffs)


def direct_sum(*cs):
    alg = cs[0].alg
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    objs = [tuple(v for c in cs for v in c.obj(i)) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        blocks = [[c.d(i) if J == I else None for J, c in enumerate(cs)]
                  for I, c in enumerate(cs)]
        diffs.append(ProjMorphism.block(alg, [c.obj(i + 1) for c in cs],
                                        [c.obj(i) for c in cs], blocks))
    return Complex(alg, lo, objs, diffs, check=False)


def shift(X, k):
    """``X[k]``: degree i holds ``X^{i+k}`` and the differential gets ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    return Complex(X.alg, X.lo - k, X.objs, [d.scale(sign) for d in X.diffs], check=False)


def truncate_F(X):
    """Delete degree 0."""
    return X.restrict(1, X.hi) if X.hi >= 1 else Complex(X.alg, 1, [], check=False)


def truncate_G(X, n=None):
    """Delete the top degree ``n`` (default: the top of the interval)."""
    n = X.hi if n is None else n
    return X.restrict(X.lo, n - 1)


# ================================================================ chain maps

class ChainMap:
    __slots__ = ("dom", "cod", "lo", "hi", "comps")

    def __init__(self, dom, cod, comps=None, lo=None, hi=None, check=False):
        self.dom, self.cod = dom, cod
        self.lo = min(dom.lo, cod.lo) if lo is None else lo
        self.hi = max(dom.hi, cod.hi) if hi is None else hi
        comps = dict(comps or {})
        self.comps = []
        alg = dom.alg
        for i in range(self.lo, self.hi + 1):
            c = comps.get(i)
            if c is None:
                c = ProjMorphism.zero(alg, dom.obj(i), cod.obj(i))
            if c.dom != dom.obj(i) or c.cod != cod.obj(i):
                raise InvalidInput(f"component in degree {i} has the wrong shape")
            self.comps.append(c)
        extra = [i for i in comps if not self.lo <= i <= self.hi and not comps[i].is_zero()]
        if extra:
            raise InvalidInput(f"component in degree {extra[0]} is outside both complexes")
        if check:
            bad = self.failing_degree()
            if bad is not None:
                raise NotAChainMap(f"square in degree {bad} does not commute")

    @property
    def alg(self):
        return self.dom.alg

    def comp(self, i):
        if self.lo <= i <= self.hi:
            return self.comps[i - self.lo]
        return ProjMorphism.zero(self.alg, self.dom.obj(i), self.cod.obj(i))

    def failing_degree(self):
        for i in range(self.lo - 1, self.hi + 1):
            lhs = compose(self.cod.d(i), self.comp(i))
            rhs = compose(self.comp(i + 1), self.dom.d(i))
            if lhs != rhs:
                return i
        return None

    def is_chain_map(self):
        return self.failing_degree() is None

    @classmethod
    def identity(cls, X):
        return cls(X, X, {i: ProjMorphism.identity(X.alg, X.obj(i)) for i in range(X.lo, X.hi + 1)})

    @classmethod
    def zero(cls, X, Y):
        return cls(X, Y)

    def vector(self):
        if not self.comps:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([c.coords for c in self.comps])

    @classmethod
    def from_vector(cls, dom, cod, vec, lo=None, hi=None):
        lo = min(dom.lo, cod.lo) if lo is None else lo
        hi = max(dom.hi, cod.hi) if hi is None else hi
        comps, off = {}, 0
        for i in range(lo, hi + 1):
            size = layout(dom.alg, dom.obj(i), cod.obj(i)).size
            comps[i] = ProjMorphism(dom.alg, dom.obj(i), cod.obj(i), vec[off:off + size])
            off += size
        return cls(dom, cod, comps, lo, hi)

    def on(self, lo, hi):
        """Same map on an explicit degree interval."""
        return ChainMap(self.dom, self.cod, {i: self.comp(i) for i in range(lo, hi + 1)}, lo, hi)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def is_invertible(self):
        return all(c.is_invertible() for c in self.comps)

    def __matmul__(self, f):
        """``g @ f`` is ``g o f``."""
        if f.cod is not self.dom and not f.cod.same_as(self.dom):
            raise InvalidInput("chain maps are not composable")
        lo = min(f.lo, self.lo)
        hi = max(f.hi, self.hi)
        comps = {i: compose(self.comp(i), f.comp(i)) for i in range(lo, hi + 1)}
        return ChainMap(f.dom, self.cod, comps)

    def _binop(self, other, sign):
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        comps = {}
        for i in range(lo, hi + 1):
            a, b = self.comp(i), other.comp(i)
            comps[i] = a + b if sign > 0 else a - b
        return ChainMap(self.dom, self.cod, comps)

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return ChainMap(self.dom, self.cod, {i: self.comp(i).scale(c) for i in range(self.lo, self.hi + 1)})

    def equals(self, other):
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return all(self.comp(i) == other.comp(i) for i in range(lo, hi + 1))

    def inverse(self):
        from .algebra import inverse as pinv
        comps = {i: pinv(self.comp(i)) for i in range(self.lo, self.hi + 1)}
        return ChainMap(self.cod, self.dom, comps)

    def restrict(self, lo, hi):
        X, Y = self.dom.restrict(lo, hi), self.cod.restrict(lo, hi)
        return ChainMap(X, Y, {i: self.comp(i) for i in range(lo, hi + 1)}, lo, hi)

    def __repr__(self):
        return f"ChainMap({self.dom!r} -> {self.cod!r})"

    def to_dict(self):
        return {str(i): c.to_entries() for i, c in zip(range(self.lo, self.hi + 1), self.comps)
                if not c.is_zero()}


def F_map(f):
    return f.restrict(1, f.hi) if f.hi >= 1 else f.restrict(1, 1)


def G_map(f, n=None):
    n = f.hi if n is None else n
    return f.restrict(f.lo, n - 1)


def direct_sum_map(rows, cols, grid):
    """Chain map between direct sums from a grid of chain maps (None = 0).
    ``rows`` are the codomain summands and ``cols`` the domain summands."""
    X = direct_sum(*cols)
    Y = direct_sum(*rows)
    lo, hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
    alg = X.alg
    comps = {}
    for i in range(lo, hi + 1):
        blocks = [[g.comp(i) if g is not None else None for g in row] for row in grid]
        comps[i] = ProjMorphism.block(alg, [r.obj(i) for r in rows], [c.obj(i) for c in cols], blocks)
    return ChainMap(X, Y, comps)


# =========================================================== hom spaces

def _degrees(X, Y):
    return min(X.lo, Y.lo), max(X.hi, Y.hi)


def _offsets(X, Y, lo, hi):
    offs, off = {}, 0
    for i in range(lo, hi + 1):
        size = layout(X.alg, X.obj(i), Y.obj(i)).size
        offs[i] = (off, size)
        off += size
    return offs, off


def chain_constraint_matrix(X, Y, lo=None, hi=None):
    """Matrix whose kernel is the space of chain maps X -> Y."""
    if lo is None:
        lo, hi = _degrees(X, Y)
    alg = X.alg
    offs, total = _offsets(X, Y, lo, hi)
    blocks = []
    for i in range(lo - 1, hi + 1):
        out = layout(alg, X.obj(i), Y.obj(i + 1)).size
        if out == 0:
            continue
        row = np.zeros((out, total), dtype=np.int64)
        if i in offs and offs[i][1]:
            o, s = offs[i]
            row[:, o:o + s] += left_compose_matrix(Y.d(i), X.obj(i))
        if (i + 1) in offs and offs[i + 1][1]:
            o, s = offs[i + 1]
            row[:, o:o + s] -= right_compose_matrix(X.d(i), Y.obj(i + 1))
        blocks.append(row % alg.p)
    if not blocks:
        return np.zeros((0, total), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


class HomSpace:
    """Linear subspace of chain maps with a basis in reduced form.

    ``basis`` rows are in rref, so the coordinates of an element are its
    values at the pivot columns."""

    def __init__(self, X, Y, rows, lo, hi):
        self.X, self.Y, self.lo, self.hi = X, Y, lo, hi
        p = X.alg.p
        if rows.shape[0]:
            self.basis, self.pivots = la.row_basis(rows, p)
        else:
            self.basis, self.pivots = rows, []

    @property
    def dim(self):
        return int(self.basis.shape[0])

    def maps(self):
        return [ChainMap.from_vector(self.X, self.Y, v, self.lo, self.hi) for v in self.basis]

    def element(self, coeffs):
        p = self.X.alg.p
        coeffs = np.asarray(coeffs, dtype=np.int64).reshape(1, -1)
        vec = la.matmul(coeffs, self.basis, p)[0] if self.dim else np.zeros(self.basis.shape[1], dtype=np.int64)
        return ChainMap.from_vector(self.X, self.Y, vec, self.lo, self.hi)

    def coords(self, f):
        v = f.on(self.lo, self.hi).vector()
        return v[self.pivots] % self.X.alg.p

    def contains(self, f):
        v = f.on(self.lo, self.hi).vector() % self.X.alg.p
        return np.array_equal(la.matmul(self.coords(f).reshape(1, -1), self.basis, self.X.alg.p)[0], v) \
            if self.dim else not v.any()


def chain_map_space(X, Y):
    lo, hi = _degrees(X, Y)
    C = chain_constraint_matrix(X, Y, lo, hi)
    K = la.nullspace(C, X.alg.p)
    return HomSpace(X, Y, K, lo, hi)


def null_homotopic_rows(X, Y, lo=None, hi=None):
    """Rows spanning ``{d_Y s + s d_X}`` inside the chain map coordinates."""
    if lo is None:
        lo, hi = _degrees(X, Y)
    alg = X.alg
    offs, total = _offsets(X, Y, lo, hi)
    # s^i : X^i -> Y^{i-1}
    soffs, soff = {}, 0
    for i in range(lo, hi + 2):
        size = layout(alg, X.obj(i), Y.obj(i - 1)).size
        soffs[i] = (soff, size)
        soff += size
    M = np.zeros((total, soff), dtype=np.int64)
    for i in range(lo, hi + 1):
        o, s = offs[i]
        if not s:
            continue
        # f^i = d_Y^{i-1} s^i + s^{i+1} d_X^i
        so, ss = soffs[i]
        if ss:
            M[o:o + s, so:so + ss] += left_compose_matrix(Y.d(i - 1), X.obj(i))
        so, ss = soffs[i + 1]
        if ss:
            M[o:o + s, so:so + ss] += right_compose_matrix(X.d(i), Y.obj(i))
    M %= alg.p
    if M.shape[1] == 0:
        return np.zeros((0, total), dtype=np.int64)
    return la.row_basis(M.T.copy(), alg.p)[0]


class HomotopyHom:
    def __init__(self, chain, null_rows, reps):
        self.chain = chain
        self.null_rows = null_rows
        self.reps = reps

    @property
    def dim(self):
        return len(self.reps)


def homotopy_category_hom(X, Y):
    """Hom in the homotopy category with coset representatives."""
    Z = chain_map_space(X, Y)
    B = null_homotopic_rows(X, Y, Z.lo, Z.hi)
    p = X.alg.p
    chosen = la.extend_to_complement(B, Z.basis, p) if Z.dim else []
    reps = [ChainMap.from_vector(X, Y, Z.basis[k], Z.lo, Z.hi) for k in chosen]
    return HomotopyHom(Z, B, reps)


def is_null_homotopic(f):
    p = f.alg.p
    B = null_homotopic_rows(f.dom, f.cod, f.lo, f.hi)
    v = f.vector().reshape(1, -1)
    before = la.rank(B, p) if B.shape[0] else 0
    return la.rank(np.concatenate([B, v]) if B.shape[0] else v, p) == before


def is_section(f):
    """Left inverse ``g`` (a chain map with ``g o f = 1``) or None."""
    X, Y = f.dom, f.cod
    S = chain_map_space(Y, X)
    return _one_sided(f, S, left=True)


def is_retraction(f):
    """Right inverse ``g`` (``f o g = 1``) or None."""
    X, Y = f.dom, f.cod
    S = chain_map_space(Y, X)
    return _one_sided(f, S, left=False)


def _one_sided(f, S, left):
    p = f.alg.p
    lo, hi = S.lo, S.hi
    target = ChainMap.identity(f.dom if left else f.cod).on(lo, hi).vector()
    if S.dim == 0:
        return ChainMap.zero(S.X, S.Y) if not target.any() else None
    mats = []
    for i in range(lo, hi + 1):
        g_obj_dom, g_obj_cod = S.X.obj(i), S.Y.obj(i)
        if left:   # g o f, g: Y -> X
            mats.append(right_compose_matrix(f.comp(i), g_obj_cod))
        else:      # f o g
            mats.append(left_compose_matrix(f.comp(i), g_obj_dom))
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    big = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        big[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    A = la.matmul(big, S.basis.T.copy(), p)
    try:
        t, _ = la.solve(A, target, p)
    except la.InconsistentSystem:
        return None
    return S.element(t)


def mapping_cone(f):
    """``C(f)^i = X^{i+1} + Y^i`` with ``d = [[-d_X, 0], [f, d_Y]]``."""
    X, Y = f.dom, f.cod
    alg = X.alg
    lo = min(X.lo - 1, Y.lo)
    hi = max(X.hi - 1, Y.hi)
    objs = [X.obj(i + 1) + Y.obj(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        blocks = [[X.d(i + 1).scale(-1), None], [f.comp(i + 1), Y.d(i)]]
        diffs.append(ProjMorphism.block(alg, [X.obj(i + 2), Y.obj(i + 1)],
                                        [X.obj(i + 1), Y.obj(i)], blocks))
    return Complex(alg, lo, objs, diffs)
