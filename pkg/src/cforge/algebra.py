"""Bound quiver algebras, the category of projectives and representations.

Conventions
-----------
Modules are left modules and ``P_v = A e_v``.  A path is stored as a tuple of
arrow indices in traversal order, so the first arrow comes first.  For
projectives,

    Hom(P_a, P_b) = e_a A e_b = span of the paths from b to a,

and a morphism ``x`` acts on ``P_a`` by right multiplication.  Composition is
written on morphisms: for ``x: P_a -> P_b`` and ``y: P_b -> P_c`` the
composite ``y o x`` is the path "y then x", i.e. the tuple ``y + x``.  With
this rule the algebra product order never shows up outside this module.

A morphism between direct sums of indecomposable projectives is a block
matrix; entry ``(b, a)`` lives in ``Hom(P_dom[a], P_cod[b])`` and takes
coordinates in the path basis of that space.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg as la
from .errors import InvalidInput, NotAdmissible

DEFAULT_MAX_LENGTH = 64


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


class Algebra:
    """``A = kQ/I`` over F_p for an admissible ideal ``I``.

    ``vertices`` are labels (shown to users); internally vertices are the
    indices ``0..n-1``.  ``arrows`` is a list of ``(name, source, target)``
    with labels, and ``relations`` a list of relations, each a list of
    ``(coefficient, [arrow names in traversal order])``.
    """

    def __init__(self, vertices, arrows, relations=(), p=la.DEFAULT_PRIME,
                 max_length=DEFAULT_MAX_LENGTH):
        self.p = la.check_prime(p)
        self.labels = tuple(str(v) for v in vertices)
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInput("duplicate vertex label")
        self._vidx = {lab: i for i, lab in enumerate(self.labels)}
        arr = []
        for a in arrows:
            name, s, t = a
            name = str(name)
            arr.append(Arrow(name, self.vertex(s), self.vertex(t)))
        self.arrows = tuple(arr)
        self._aidx = {a.name: i for i, a in enumerate(self.arrows)}
        if len(self._aidx) != len(self.arrows):
            raise InvalidInput("duplicate arrow name")
        self.relations_raw = [[(int(c), [str(x) for x in path]) for c, path in rel]
                              for rel in relations]
        self.relations = [self._parse_relation(r, k) for k, r in enumerate(self.relations_raw)]
        self.max_length = int(max_length)
        self._build_basis()
        self._tensors = {}

    # ------------------------------------------------------------ parsing
    @property
    def n(self):
        return len(self.labels)

    def vertex(self, label):
        lab = str(label)
        if lab not in self._vidx:
            raise InvalidInput(f"unknown vertex {label!r}")
        return self._vidx[lab]

    def arrow(self, name):
        if name not in self._aidx:
            raise InvalidInput(f"unknown arrow {name!r}")
        return self._aidx[name]

    def obj(self, *labels):
        """ProjObject (tuple of vertex indices) from vertex labels."""
        return tuple(self.vertex(v) for v in labels)

    def path_from_names(self, names):
        path = tuple(self.arrow(x) for x in names)
        for u, v in zip(path, path[1:]):
            if self.arrows[u].target != self.arrows[v].source:
                names_s = ",".join(names)
                raise InvalidInput(f"arrows do not compose along path [{names_s}]")
        return path

    def path_ends(self, path):
        return self.arrows[path[0]].source, self.arrows[path[-1]].target

    def path_names(self, path):
        return [self.arrows[i].name for i in path]

    def _parse_relation(self, rel, k):
        terms = []
        ends = None
        for c, names in rel:
            if len(names) < 2:
                raise InvalidInput(f"relation {k}: every path must have length at least 2")
            path = self.path_from_names(names)
            e = self.path_ends(path)
            if ends is None:
                ends = e
            elif e != ends:
                raise InvalidInput(f"relation {k}: paths are not parallel")
            terms.append((c % self.p, path))
        if not terms:
            raise InvalidInput(f"relation {k} is empty")
        return ends, terms

    # ------------------------------------------------------- path basis
    def _paths_up_to(self, L):
        """All paths of length < L grouped by (source, target)."""
        out_arrows = [[] for _ in range(self.n)]
        for i, a in enumerate(self.arrows):
            out_arrows[a.source].append(i)
        boxes = {}
        layer = [(v, v, ()) for v in range(self.n)]
        length = 0
        while layer and length < L:
            for s, t, path in layer:
                boxes.setdefault((s, t), []).append(path)
            nxt = []
            for s, t, path in layer:
                for i in out_arrows[t]:
                    nxt.append((s, self.arrows[i].target, path + (i,)))
            layer = nxt
            length += 1
        return boxes

    def _box_columns(self, paths):
        # longest paths first so they become pivots and the basis keeps short paths
        return sorted(paths, key=lambda q: (-len(q), q))

    def _ideal_rows(self, boxes, L):
        prefix = {}   # paths ending at vertex x
        suffix = {}   # paths starting at vertex x
        for (s, t), paths in boxes.items():
            for q in paths:
                prefix.setdefault(t, []).append(q)
                suffix.setdefault(s, []).append(q)
        gens = {}
        for (sr, tr), terms in self.relations:
            mlen = min(len(q) for _, q in terms)
            for v in prefix.get(sr, []):
                if len(v) + mlen >= L:
                    continue
                for u in suffix.get(tr, []):
                    if len(v) + len(u) + mlen >= L:
                        continue
                    vec = {}
                    for c, q in terms:
                        full = v + q + u
                        if len(full) < L:
                            vec[full] = (vec.get(full, 0) + c) % self.p
                    vec = {k: c for k, c in vec.items() if c}
                    if not vec:
                        continue
                    s = self.arrows[v[0]].source if v else sr
                    t = self.arrows[u[-1]].target if u else tr
                    gens.setdefault((s, t), []).append(vec)
        return gens

    def _quotient(self, L):
        boxes = self._paths_up_to(L)
        gens = self._ideal_rows(boxes, L)
        info = {}
        for key, paths in boxes.items():
            cols = self._box_columns(paths)
            cidx = {q: j for j, q in enumerate(cols)}
            rows = gens.get(key, [])
            M = np.zeros((len(rows), len(cols)), dtype=np.int64)
            for i, vec in enumerate(rows):
                for q, c in vec.items():
                    M[i, cidx[q]] = c
            if rows:
                R, piv, r = la.rref(M, self.p)
                R = R[:r]
            else:
                R, piv = M, []
            info[key] = (cols, cidx, R, piv)
        return info

    def _top_layer_vanishes(self, info, L):
        for cols, cidx, R, piv in info.values():
            pset = set(piv)
            prow = {c: i for i, c in enumerate(piv)}
            nonpiv = [j for j in range(len(cols)) if j not in pset]
            for j, q in enumerate(cols):
                if len(q) != L - 1:
                    continue
                if j not in pset:
                    return False
                row = R[prow[j]]
                if nonpiv and np.any(row[nonpiv]):
                    return False
        return True

    def _build_basis(self):
        for L in range(1, self.max_length + 2):
            info = self._quotient(L)
            if self._top_layer_vanishes(info, L):
                break
        else:
            raise NotAdmissible(
                f"ideal is not admissible (no Loewy bound up to length {self.max_length})")
        self.loewy_length = L - 1
        self.basis = {}
        self._nf = {}
        for key, (cols, cidx, R, piv) in info.items():
            pset = set(piv)
            nonpiv = [j for j in range(len(cols)) if j not in pset]
            bpaths = [cols[j] for j in nonpiv]
            order = sorted(range(len(bpaths)), key=lambda k: (len(bpaths[k]), bpaths[k]))
            bpaths = [bpaths[k] for k in order]
            pos = {cols[nonpiv[k]]: i for i, k in enumerate(order)}
            d = len(bpaths)
            if d == 0:
                continue
            self.basis[key] = bpaths
            colpos = np.array([pos[cols[j]] for j in nonpiv], dtype=np.int64)
            for j, q in enumerate(cols):
                vec = np.zeros(d, dtype=np.int64)
                if j in pset:
                    i = piv.index(j)
                    vec[colpos] = (-R[i, nonpiv]) % self.p
                else:
                    vec[pos[q]] = 1
                self._nf[q if q else ("e", key[0])] = vec

    # ----------------------------------------------------- hom spaces
    def hom_basis(self, a, b):
        """Path basis of Hom(P_a, P_b), i.e. paths from b to a."""
        return self.basis.get((b, a), [])

    def hom_dim(self, a, b):
        return len(self.basis.get((b, a), ()))

    def normal_form(self, path, a, b):
        """Coordinates of a path (from b to a) in the basis of Hom(P_a, P_b)."""
        d = self.hom_dim(a, b)
        if len(path) >= self.loewy_length:
            return np.zeros(d, dtype=np.int64)
        key = path if path else ("e", a)
        if not path and a != b:
            raise InvalidInput("trivial path between distinct vertices")
        v = self._nf.get(key)
        if v is None:
            return np.zeros(d, dtype=np.int64)
        return v.copy()

    def identity_coords(self, v):
        vec = np.zeros(self.hom_dim(v, v), dtype=np.int64)
        vec[0] = 1  # the trivial path is the first basis element
        return vec

    def compose_tensor(self, a, b, c):
        """``T`` with ``T[i, j]`` = coordinates of ``y_j o x_i`` where ``x_i``
        runs over the basis of Hom(P_a, P_b) and ``y_j`` over Hom(P_b, P_c)."""
        key = (a, b, c)
        T = self._tensors.get(key)
        if T is None:
            xs = self.hom_basis(a, b)
            ys = self.hom_basis(b, c)
            T = np.zeros((len(xs), len(ys), self.hom_dim(a, c)), dtype=np.int64)
            for i, x in enumerate(xs):
                for j, y in enumerate(ys):
                    T[i, j] = self.normal_form(y + x, a, c)
            self._tensors[key] = T
        return T

    def element(self, terms, a, b):
        """Coordinates in Hom(P_a, P_b) of a combination ``[(c, names), ...]``;
        an empty name list is the identity of P_a (requires a == b)."""
        vec = np.zeros(self.hom_dim(a, b), dtype=np.int64)
        for c, names in terms:
            if not names:
                if a != b:
                    raise InvalidInput(
                        f"identity entry between P_{self.labels[a]} and P_{self.labels[b]}")
                vec = (vec + int(c) * self.identity_coords(a)) % self.p
                continue
            path = self.path_from_names(names)
            s, t = self.path_ends(path)
            if s != b or t != a:
                raise InvalidInput(
                    f"path [{','.join(names)}] does not give a map "
                    f"P_{self.labels[a]} -> P_{self.labels[b]}")
            vec = (vec + int(c) * self.normal_form(path, a, b)) % self.p
        return vec

    def element_terms(self, vec, a, b):
        out = []
        for c, q in zip(vec, self.hom_basis(a, b)):
            if c % self.p:
                out.append([int(c) % self.p, self.path_names(q)])
        return out

    # ------------------------------------------------------- radical
    def rad_rows(self, a, b):
        """Rows spanning rad(P_a, P_b) inside the coordinates of Hom(P_a, P_b)."""
        d = self.hom_dim(a, b)
        eye = np.eye(d, dtype=np.int64)
        return eye[1:] if a == b and d else eye

    @lru_cache(maxsize=None)
    def rad2_rows(self, a, c):
        d = self.hom_dim(a, c)
        rows = []
        for b in range(self.n):
            T = self.compose_tensor(a, b, c)
            if T.size == 0:
                continue
            Rx = self.rad_rows(a, b)
            Ry = self.rad_rows(b, c)
            for x in Rx:
                for y in Ry:
                    rows.append(np.einsum("ijk,i,j->k", T, x, y) % self.p)
        if not rows:
            return np.zeros((0, d), dtype=np.int64)
        return la.row_basis(np.array(rows, dtype=np.int64), self.p)[0]

    def has_irreducible_self_map(self):
        """Vertices v with rad(P_v, P_v) strictly larger than rad^2(P_v, P_v)."""
        hits = []
        for v in range(self.n):
            r1 = max(self.hom_dim(v, v) - 1, 0)
            r2 = self.rad2_rows(v, v).shape[0]
            if r1 > r2:
                hits.append(v)
        return hits

    # --------------------------------------------------- serialization
    def to_dict(self):
        return {
            "prime": self.p,
            "vertices": list(self.labels),
            "arrows": {a.name: [self.labels[a.source], self.labels[a.target]]
                       for a in self.arrows},
            "relations": [[[c, list(path)] for c, path in rel] for rel in self.relations_raw],
        }

    def describe(self):
        return {
            "vertices": len(self.labels),
            "arrows": len(self.arrows),
            "loewy_length": self.loewy_length,
            "dimension": sum(len(b) for b in self.basis.values()),
            "self_irreducible_vertices": [self.labels[v] for v in self.has_irreducible_self_map()],
        }

    def with_prime(self, p):
        return Algebra(self.labels,
                       [(a.name, self.labels[a.source], self.labels[a.target]) for a in self.arrows],
                       self.relations_raw, p=p, max_length=self.max_length)

    def __repr__(self):
        return f"Algebra(n={self.n}, arrows={len(self.arrows)}, p={self.p}, loewy={self.loewy_length})"

    @classmethod
    def from_dict(cls, d, p=None, max_length=DEFAULT_MAX_LENGTH):
        arrows = d.get("arrows", {})
        if isinstance(arrows, dict):
            arrows = [(k, v[0], v[1]) for k, v in arrows.items()]
        rels = d.get("relations", []) or []
        prime = p if p is not None else d.get("prime", la.DEFAULT_PRIME)
        return cls(d["vertices"], arrows, [[(t[0], t[1]) for t in r] for r in rels],
                   p=prime, max_length=max_length)


# ================================================================ layouts

class _Layout:
    __slots__ = ("offsets", "dims", "size")

    def __init__(self, alg, dom, cod):
        self.offsets = np.zeros((len(cod), len(dom)), dtype=np.int64)
        self.dims = np.zeros((len(cod), len(dom)), dtype=np.int64)
        off = 0
        for b, vb in enumerate(cod):
            for a, va in enumerate(dom):
                d = alg.hom_dim(va, vb)
                self.offsets[b, a] = off
                self.dims[b, a] = d
                off += d
        self.size = off


def layout(alg, dom, cod):
    cache = alg.__dict__.setdefault("_layouts", {})
    key = (dom, cod)
    lay = cache.get(key)
    if lay is None:
        lay = cache[key] = _Layout(alg, dom, cod)
    return lay


def hom_space_dim(alg, dom, cod):
    return layout(alg, tuple(dom), tuple(cod)).size


# ================================================================ morphisms

class ProjMorphism:
    """Morphism between direct sums of indecomposable projectives."""

    __slots__ = ("alg", "dom", "cod", "coords")

    def __init__(self, alg, dom, cod, coords=None):
        self.alg = alg
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        size = layout(alg, self.dom, self.cod).size
        if coords is None:
            coords = np.zeros(size, dtype=np.int64)
        coords = np.asarray(coords, dtype=np.int64).reshape(-1) % alg.p
        if coords.shape[0] != size:
            raise InvalidInput("coordinate vector has the wrong length")
        self.coords = coords

    # constructors
    @classmethod
    def zero(cls, alg, dom, cod):
        return cls(alg, dom, cod)

    @classmethod
    def identity(cls, alg, obj):
        m = cls(alg, obj, obj)
        lay = layout(alg, m.dom, m.cod)
        for a in range(len(obj)):
            m.coords[lay.offsets[a, a]] = 1
        return m

    @classmethod
    def from_entries(cls, alg, dom, cod, entries):
        """``entries``: dict ``(b, a) -> coordinate vector``."""
        m = cls(alg, dom, cod)
        lay = layout(alg, m.dom, m.cod)
        for (b, a), vec in entries.items():
            o, d = lay.offsets[b, a], lay.dims[b, a]
            vec = np.asarray(vec, dtype=np.int64).reshape(-1)
            if vec.shape[0] != d:
                raise InvalidInput(f"entry ({b},{a}) has wrong dimension")
            m.coords[o:o + d] = vec % alg.p
        return m

    @classmethod
    def from_terms(cls, alg, dom, cod, entries):
        """``entries``: iterable of ``(row, col, value)`` where value is an int
        (multiple of the identity) or a list of ``(coef, [arrow names])``."""
        vecs = {}
        for row, col, value in entries:
            row, col = int(row), int(col)
            if not (0 <= row < len(cod) and 0 <= col < len(dom)):
                raise InvalidInput(f"entry ({row},{col}) is outside the {len(cod)}x{len(dom)} matrix")
            a, b = dom[col], cod[row]
            if isinstance(value, (int, np.integer)):
                terms = [(int(value), [])]
            else:
                terms = [(t[0], list(t[1])) for t in value]
            v = alg.element(terms, a, b)
            vecs[(row, col)] = (vecs.get((row, col), 0) + v) % alg.p
        return cls.from_entries(alg, dom, cod, vecs)

    @classmethod
    def block(cls, alg, row_objs, col_objs, blocks):
        """Assemble from a grid of morphisms; ``None`` stands for zero."""
        dom = tuple(v for o in col_objs for v in o)
        cod = tuple(v for o in row_objs for v in o)
        m = cls(alg, dom, cod)
        lay = layout(alg, dom, cod)
        roff = np.cumsum([0] + [len(o) for o in row_objs])
        coff = np.cumsum([0] + [len(o) for o in col_objs])
        for I, row in enumerate(blocks):
            for J, g in enumerate(row):
                if g is None:
                    continue
                if g.dom != tuple(col_objs[J]) or g.cod != tuple(row_objs[I]):
                    raise InvalidInput("block does not match the grid objects")
                gl = layout(alg, g.dom, g.cod)
                for b in range(len(g.cod)):
                    for a in range(len(g.dom)):
                        d = gl.dims[b, a]
                        if d:
                            o = lay.offsets[roff[I] + b, coff[J] + a]
                            go = gl.offsets[b, a]
                            m.coords[o:o + d] = g.coords[go:go + d]
        return m

    def sub(self, rows, cols):
        """Submatrix on the given row and column index lists."""
        rows, cols = list(rows), list(cols)
        dom = tuple(self.dom[a] for a in cols)
        cod = tuple(self.cod[b] for b in rows)
        out = ProjMorphism(self.alg, dom, cod)
        lay = layout(self.alg, self.dom, self.cod)
        ol = layout(self.alg, dom, cod)
        for i, b in enumerate(rows):
            for j, a in enumerate(cols):
                d = lay.dims[b, a]
                if d:
                    out.coords[ol.offsets[i, j]:ol.offsets[i, j] + d] = \
                        self.coords[lay.offsets[b, a]:lay.offsets[b, a] + d]
        return out

    # accessors
    def entry(self, b, a):
        lay = layout(self.alg, self.dom, self.cod)
        o, d = lay.offsets[b, a], lay.dims[b, a]
        return self.coords[o:o + d]

    def is_zero(self):
        return not np.any(self.coords)

    def top_matrix(self, v):
        """Scalar parts of the entries between P_v summands: a matrix over F_p
        with rows indexed by the P_v summands of the codomain."""
        rows = [b for b, w in enumerate(self.cod) if w == v]
        cols = [a for a, w in enumerate(self.dom) if w == v]
        lay = layout(self.alg, self.dom, self.cod)
        M = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for i, b in enumerate(rows):
            for j, a in enumerate(cols):
                M[i, j] = self.coords[lay.offsets[b, a]]
        return M

    def is_invertible(self):
        if sorted(self.dom) != sorted(self.cod):
            return False
        for v in set(self.dom):
            M = self.top_matrix(v)
            if la.rank(M, self.alg.p) != M.shape[0]:
                return False
        return True

    # arithmetic
    def _check_parallel(self, other):
        if self.dom != other.dom or self.cod != other.cod:
            raise InvalidInput("morphisms are not parallel")

    def __add__(self, other):
        self._check_parallel(other)
        return ProjMorphism(self.alg, self.dom, self.cod, self.coords + other.coords)

    def __sub__(self, other):
        self._check_parallel(other)
        return ProjMorphism(self.alg, self.dom, self.cod, self.coords - other.coords)

    def __neg__(self):
        return ProjMorphism(self.alg, self.dom, self.cod, -self.coords)

    def scale(self, c):
        return ProjMorphism(self.alg, self.dom, self.cod, self.coords * (int(c) % self.alg.p))

    def __eq__(self, other):
        return (isinstance(other, ProjMorphism) and self.dom == other.dom
                and self.cod == other.cod and np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash((self.dom, self.cod, self.coords.tobytes()))

    def __matmul__(self, other):
        """``g @ f`` is the composite ``g o f`` (f first)."""
        return compose(self, other)

    def __repr__(self):
        return f"ProjMorphism({self.dom} -> {self.cod}, nnz={int(np.count_nonzero(self.coords))})"

    def to_entries(self):
        out = []
        for b, vb in enumerate(self.cod):
            for a, va in enumerate(self.dom):
                terms = self.alg.element_terms(self.entry(b, a), va, vb)
                if terms:
                    out.append([b, a, terms])
        return out


def compose(g, f):
    """Composite ``g o f`` of ProjMorphisms."""
    if f.cod != g.dom:
        raise InvalidInput("morphisms are not composable")
    alg, p = f.alg, f.alg.p
    out = ProjMorphism(alg, f.dom, g.cod)
    lf = layout(alg, f.dom, f.cod)
    lg = layout(alg, g.dom, g.cod)
    lo = layout(alg, out.dom, out.cod)
    for c, vc in enumerate(g.cod):
        for a, va in enumerate(f.dom):
            d = lo.dims[c, a]
            if not d:
                continue
            acc = np.zeros(d, dtype=np.int64)
            for b, vb in enumerate(f.cod):
                if not lf.dims[b, a] or not lg.dims[c, b]:
                    continue
                x = f.coords[lf.offsets[b, a]:lf.offsets[b, a] + lf.dims[b, a]]
                y = g.coords[lg.offsets[c, b]:lg.offsets[c, b] + lg.dims[c, b]]
                if not x.any() or not y.any():
                    continue
                T = alg.compose_tensor(va, vb, vc)
                acc = (acc + np.einsum("i,ijk,j->k", x, T, y)) % p
            out.coords[lo.offsets[c, a]:lo.offsets[c, a] + d] = acc
    return out


def left_compose_matrix(g, dom):
    """Matrix of ``f -> g o f`` for f in Hom(dom, g.dom)."""
    alg = g.alg
    dom = tuple(dom)
    lf = layout(alg, dom, g.dom)
    lg = layout(alg, g.dom, g.cod)
    lo = layout(alg, dom, g.cod)
    M = np.zeros((lo.size, lf.size), dtype=np.int64)
    for c, vc in enumerate(g.cod):
        for a, va in enumerate(dom):
            if not lo.dims[c, a]:
                continue
            o = lo.offsets[c, a]
            for b, vb in enumerate(g.dom):
                if not lf.dims[b, a] or not lg.dims[c, b]:
                    continue
                y = g.coords[lg.offsets[c, b]:lg.offsets[c, b] + lg.dims[c, b]]
                if not y.any():
                    continue
                T = alg.compose_tensor(va, vb, vc)
                blk = np.einsum("ijk,j->ki", T, y)
                i0 = lf.offsets[b, a]
                M[o:o + lo.dims[c, a], i0:i0 + lf.dims[b, a]] += blk
    return M % alg.p


def right_compose_matrix(e, cod):
    """Matrix of ``f -> f o e`` for f in Hom(e.cod, cod)."""
    alg = e.alg
    cod = tuple(cod)
    le = layout(alg, e.dom, e.cod)
    lf = layout(alg, e.cod, cod)
    lo = layout(alg, e.dom, cod)
    M = np.zeros((lo.size, lf.size), dtype=np.int64)
    for b, vb in enumerate(cod):
        for o_, vo in enumerate(e.dom):
            if not lo.dims[b, o_]:
                continue
            oo = lo.offsets[b, o_]
            for a, va in enumerate(e.cod):
                if not le.dims[a, o_] or not lf.dims[b, a]:
                    continue
                x = e.coords[le.offsets[a, o_]:le.offsets[a, o_] + le.dims[a, o_]]
                if not x.any():
                    continue
                T = alg.compose_tensor(vo, va, vb)
                blk = np.einsum("ijk,i->kj", T, x)
                i0 = lf.offsets[b, a]
                M[oo:oo + lo.dims[b, o_], i0:i0 + lf.dims[b, a]] += blk
    return M % alg.p


def inverse(f):
    """Two-sided inverse of an invertible ProjMorphism."""
    if not f.is_invertible():
        raise la.InconsistentSystem("morphism is not invertible")
    M = right_compose_matrix(f, f.dom)  # x -> x o f with x: cod -> dom
    ident = ProjMorphism.identity(f.alg, f.dom)
    x, _ = la.solve(M, ident.coords, f.alg.p)
    return ProjMorphism(f.alg, f.cod, f.dom, x)


def left_inverse(f):
    """Some ``g`` with ``g o f = 1`` or None."""
    M = right_compose_matrix(f, f.dom)
    try:
        x, _ = la.solve(M, ProjMorphism.identity(f.alg, f.dom).coords, f.alg.p)
    except la.InconsistentSystem:
        return None
    return ProjMorphism(f.alg, f.cod, f.dom, x)


def right_inverse(f):
    """Some ``g`` with ``f o g = 1`` or None."""
    M = left_compose_matrix(f, f.cod)
    try:
        x, _ = la.solve(M, ProjMorphism.identity(f.alg, f.cod).coords, f.alg.p)
    except la.InconsistentSystem:
        return None
    return ProjMorphism(f.alg, f.cod, f.dom, x)


def hom_basis_morphisms(alg, dom, cod):
    """The standard basis of Hom(dom, cod) as ProjMorphisms."""
    size = layout(alg, tuple(dom), tuple(cod)).size
    eye = np.eye(size, dtype=np.int64)
    return [ProjMorphism(alg, dom, cod, eye[k]) for k in range(size)]


def hom_space(alg, dom, cod):
    """Dimension of Hom(dom, cod) and its standard basis."""
    basis = hom_basis_morphisms(alg, dom, cod)
    return len(basis), basis


# ============================================================ radical

@dataclass
class RadicalFiltration:
    dim: int
    rad: np.ndarray     # rows spanning rad(P, Q)
    rad2: np.ndarray    # rows spanning rad^2(P, Q)

    def level(self, f, p):
        """0 if f is not radical, 1 if f is in rad but not rad^2, 2 otherwise."""
        v = f.coords.reshape(1, -1)
        if la.rank(np.concatenate([self.rad, v]), p) > la.rank(self.rad, p):
            return 0
        if la.rank(np.concatenate([self.rad2, v]), p) > la.rank(self.rad2, p):
            return 1
        return 2


def radical_filtration(alg, dom, cod):
    dom, cod = tuple(dom), tuple(cod)
    lay = layout(alg, dom, cod)
    r1, r2 = [], []
    for b, vb in enumerate(cod):
        for a, va in enumerate(dom):
            o = lay.offsets[b, a]
            for rows, sink in ((alg.rad_rows(va, vb), r1), (alg.rad2_rows(va, vb), r2)):
                for row in rows:
                    full = np.zeros(lay.size, dtype=np.int64)
                    full[o:o + row.shape[0]] = row
                    sink.append(full)

    def stack(rows):
        return np.array(rows, dtype=np.int64).reshape(-1, lay.size)
    return RadicalFiltration(lay.size, stack(r1), stack(r2))


# ====================================================== representations

@dataclass
class Representation:
    """Finite dimensional representation: one space per vertex and a matrix
    per arrow with rows indexed by the target space."""
    alg: Algebra
    dims: tuple
    maps: tuple

    def dim(self):
        return int(sum(self.dims))

    def check(self):
        p = self.alg.p
        for a, M in zip(self.alg.arrows, self.maps):
            if M.shape != (self.dims[a.target], self.dims[a.source]):
                return False
        for (s, t), terms in self.alg.relations:
            acc = np.zeros((self.dims[t], self.dims[s]), dtype=np.int64)
            for c, path in terms:
                acc = (acc + c * self.path_matrix(path)) % p
            if acc.any():
                return False
        return True

    def path_matrix(self, path):
        p = self.alg.p
        s = self.alg.arrows[path[0]].source
        M = np.eye(self.dims[s], dtype=np.int64)
        for i in path:
            M = la.matmul(self.maps[i], M, p)
        return M


def _vertex_layout(alg, obj, w):
    # the space at vertex w of the projective ``obj`` is Hom(P_w, obj)
    return layout(alg, (w,), tuple(obj))


def projective_representation(alg, obj):
    obj = tuple(obj)
    dims = tuple(_vertex_layout(alg, obj, w).size for w in range(alg.n))
    maps = []
    for i, a in enumerate(alg.arrows):
        # arrow action: u in Hom(P_s, obj) goes to u o alpha, alpha: P_t -> P_s
        alpha = ProjMorphism(alg, (a.target,), (a.source,),
                             alg.normal_form((i,), a.target, a.source))
        maps.append(right_compose_matrix(alpha, obj))
    return Representation(alg, dims, tuple(maps))


def as_representation(f):
    """Per vertex matrices of a ProjMorphism seen as a map of representations."""
    return [left_compose_matrix(f, (w,)) for w in range(f.alg.n)]


def kernel_rep(f):
    """Kernel of ``f`` as a representation with its inclusion matrices."""
    alg, p = f.alg, f.alg.p
    M = projective_representation(alg, f.dom)
    fw = as_representation(f)
    incl = []
    for w in range(alg.n):
        K = la.nullspace(fw[w], p) if fw[w].shape[1] else np.zeros((0, 0), dtype=np.int64)
        incl.append(K.T.copy())  # columns form a kernel basis
    maps = []
    for a, A in zip(alg.arrows, M.maps):
        Ks, Kt = incl[a.source], incl[a.target]
        if Ks.shape[1] == 0 or Kt.shape[1] == 0:
            maps.append(np.zeros((Kt.shape[1], Ks.shape[1]), dtype=np.int64))
            continue
        img = la.matmul(A, Ks, p)
        maps.append(la.solve_many(Kt, img, p))
    dims = tuple(K.shape[1] for K in incl)
    return Representation(alg, dims, tuple(maps)), incl


def socle(M):
    """Socle of a representation: vectors killed by every arrow.

    Returns ``(multiplicities, inclusions)`` where ``multiplicities[w]`` is the
    multiplicity of the simple S_w."""
    alg, p = M.alg, M.alg.p
    mult, incl = [], []
    for w in range(alg.n):
        outs = [M.maps[i] for i, a in enumerate(alg.arrows) if a.source == w]
        if M.dims[w] == 0:
            mult.append(0)
            incl.append(np.zeros((0, 0), dtype=np.int64))
            continue
        if outs:
            K = la.nullspace(np.concatenate(outs, axis=0), p)
        else:
            K = np.eye(M.dims[w], dtype=np.int64)
        mult.append(int(K.shape[0]))
        incl.append(K.T.copy())
    return mult, incl


def projective_cover_of_semisimple(mult):
    """ProjObject covering the semisimple module with the given multiplicities."""
    return tuple(w for w, m in enumerate(mult) for _ in range(m))
