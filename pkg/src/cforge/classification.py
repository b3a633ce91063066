"""Types of irreducible chain maps.

A chain map ``f: X -> Y`` is split degreewise as ``f^i ~ 1 + r^i`` with
``r^i : Z^i -> W^i`` radical, by Gaussian elimination in proj A.  The zero
pattern of the residuals decides the entry types, and those decide the
degreewise pattern (sec), (ret), (ret-irr-sec) or (irr-sec).
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import (ProjMorphism, compose, inverse as pinverse, left_inverse,
                      radical_filtration, right_inverse)
from .complexes import (ChainMap, F_map, chain_map_space, direct_sum, direct_sum_map,
                        is_retraction, is_section)
from .decomposition import are_isomorphic, decompose, indecomposable_iso, is_indecomposable
from .errors import HypothesisViolated, InconsistentPattern, InvalidInput

SECTION, RETRACTION, BOTH, NEITHER = "section", "retraction", "both", "neither"


# ====================================================== generic elimination

def _eliminate(grid, rows, cols, ops):
    """Peel invertible entries off a matrix of morphisms.

    ``grid[b][a] : cols[a] -> rows[b]``.  Returns the reduced grid, the new
    column objects, the pivots and matrices ``L``, ``R`` of automorphisms
    with ``L o grid o R`` equal to the reduced grid."""
    nr, nc = len(rows), len(cols)
    grid = [list(r) for r in grid]
    cur = list(cols)
    L = [[ops.ident(rows[i]) if i == j else ops.zero(rows[j], rows[i]) for j in range(nr)]
         for i in range(nr)]
    R = [[ops.ident(cols[i]) if i == j else ops.zero(cols[j], cols[i]) for j in range(nc)]
         for i in range(nc)]
    free_r, free_c = list(range(nr)), list(range(nc))
    pivots = []
    while True:
        hit = next(((b, a) for b in free_r for a in free_c if ops.is_unit(grid[b][a])), None)
        if hit is None:
            break
        b, a = hit
        u = ops.inv(grid[b][a])
        for k in range(nr):
            grid[k][a] = grid[k][a] @ u
        for k in range(nc):
            R[k][a] = R[k][a] @ u
        cur[a] = rows[b]
        for a2 in free_c:
            x = grid[b][a2]
            if a2 == a or x.is_zero():
                continue
            for k in range(nr):
                grid[k][a2] = grid[k][a2] - grid[k][a] @ x
            for k in range(nc):
                R[k][a2] = R[k][a2] - R[k][a] @ x
        for b2 in free_r:
            c = grid[b2][a]
            if b2 == b or c.is_zero():
                continue
            for k in range(nc):
                grid[b2][k] = grid[b2][k] - c @ grid[b][k]
            for k in range(nr):
                L[b2][k] = L[b2][k] - c @ L[b][k]
        free_r.remove(b)
        free_c.remove(a)
        pivots.append((b, a))
    return grid, cur, pivots, L, R, free_r, free_c


class _ProjOps:
    def __init__(self, alg):
        self.alg = alg

    def ident(self, o):
        return ProjMorphism.identity(self.alg, o)

    def zero(self, d, c):
        return ProjMorphism.zero(self.alg, d, c)

    @staticmethod
    def is_unit(x):
        return x.dom == x.cod and x.is_invertible()

    @staticmethod
    def inv(x):
        return pinverse(x)


class _ChainOps:
    @staticmethod
    def ident(o):
        return ChainMap.identity(o)

    @staticmethod
    def zero(d, c):
        return ChainMap.zero(d, c)

    @staticmethod
    def is_unit(x):
        return x.is_invertible()

    @staticmethod
    def inv(x):
        return x.inverse()


# ============================================================ degree split

@dataclass
class DegreeSplit:
    degree: int
    common: tuple            # vertices of the common part
    Z: tuple                 # domain residual
    W: tuple                 # codomain residual
    residual: ProjMorphism   # radical, Z -> W
    alpha: ProjMorphism      # automorphism cod -> common + W
    beta: ProjMorphism       # automorphism common + Z -> dom
    f: ProjMorphism

    @property
    def entry_type(self):
        if not self.Z and not self.W:
            return BOTH
        if not self.Z:
            return SECTION
        if not self.W:
            return RETRACTION
        return NEITHER

    def block(self):
        alg = self.f.alg
        return ProjMorphism.block(alg, [self.common, self.W], [self.common, self.Z],
                                  [[ProjMorphism.identity(alg, self.common), None],
                                   [None, self.residual]])

    def reassembles(self):
        back = compose(pinverse(self.alpha), compose(self.block(), pinverse(self.beta)))
        return back == self.f and compose(self.alpha, compose(self.f, self.beta)) == self.block()

    def residual_is_radical(self):
        r = self.residual
        return all(not r.top_matrix(v).any() for v in set(r.dom))

    def to_dict(self):
        labs = self.f.alg.labels
        return {"degree": self.degree,
                "common": [labs[v] for v in self.common],
                "Z": [labs[v] for v in self.Z],
                "W": [labs[v] for v in self.W],
                "residual": self.residual.to_entries(),
                "type": self.entry_type}


def split_morphism(f, degree=0):
    """Split ``f ~ 1 + r`` with r radical (a :class:`DegreeSplit`)."""
    alg = f.alg
    rows = [(v,) for v in f.cod]
    cols = [(v,) for v in f.dom]
    grid = [[f.sub([b], [a]) for a in range(len(cols))] for b in range(len(rows))]
    M, cur, pivots, L, R, free_r, free_c = _eliminate(grid, rows, cols, _ProjOps(alg))
    rperm = [b for b, _ in pivots] + free_r
    cperm = [a for _, a in pivots] + free_c
    alpha = ProjMorphism.block(alg, [rows[b] for b in rperm], rows,
                               [[L[b][k] for k in range(len(rows))] for b in rperm])
    beta = ProjMorphism.block(alg, cols, [cur[a] for a in cperm],
                              [[R[k][a] for a in cperm] for k in range(len(cols))])
    common = tuple(rows[b][0] for b, _ in pivots)
    Z = tuple(f.dom[a] for a in free_c)
    W = tuple(f.cod[b] for b in free_r)
    res = ProjMorphism.block(alg, [rows[b] for b in free_r], [cur[a] for a in free_c],
                             [[M[b][a] for a in free_c] for b in free_r]) \
        if free_r and free_c else ProjMorphism.zero(alg, Z, W)
    return DegreeSplit(degree, common, Z, W, res, alpha, beta, f)


@dataclass
class CommonSplit:
    f: ChainMap
    degrees: dict            # degree -> DegreeSplit

    def types(self):
        return {i: s.entry_type for i, s in self.degrees.items()}

    def reassembles(self):
        return all(s.reassembles() for s in self.degrees.values())

    def residual_is_radical(self):
        return all(s.residual_is_radical() for s in self.degrees.values())

    def to_dict(self):
        return {str(i): s.to_dict() for i, s in self.degrees.items()}


def split_common(f):
    """Degreewise split of a chain map, lowest degree first."""
    return CommonSplit(f, {i: split_morphism(f.comp(i), i) for i in range(f.lo, f.hi + 1)})


def entry_type(m):
    """Section, retraction, both or neither, decided by one-sided solves."""
    sec = left_inverse(m) is not None
    ret = right_inverse(m) is not None
    if sec and ret:
        return BOTH
    return SECTION if sec else RETRACTION if ret else NEITHER


# ===================================================== irreducible in proj A

def _irr_class(alg, vec, a, b):
    rad = alg.rad_rows(a, b)
    rad2 = alg.rad2_rows(a, b)
    keep = la.extend_to_complement(rad2, rad, alg.p)
    comp = rad[keep]
    if comp.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    A = np.concatenate([rad2, comp]).T.copy() if rad2.shape[0] else comp.T.copy()
    x, _ = la.solve(A, vec, alg.p)
    return x[rad2.shape[0]:]


def irr_matrix(r):
    """Classes of the entries of a radical morphism in rad/rad^2, as a dict
    ``(b, a) -> coordinate vector``."""
    alg = r.alg
    return {(b, a): _irr_class(alg, r.entry(b, a), va, vb)
            for b, vb in enumerate(r.cod) for a, va in enumerate(r.dom)}


def is_irreducible_proj(r):
    """Irreducibility of a morphism in proj A.

    ``r`` must be radical with nonzero source and target.  For every vertex u
    the columns of type P_u, read in rad/rad^2, must be independent, and the
    same for the rows of each type."""
    p = r.alg.p
    if not r.dom or not r.cod:
        return False
    if any(r.top_matrix(v).any() for v in set(r.dom)):
        return False
    cls = irr_matrix(r)
    for u in set(r.dom):
        cs = [a for a, v in enumerate(r.dom) if v == u]
        M = [np.concatenate([cls[(b, a)] for b in range(len(r.cod))]) for a in cs]
        M = np.array(M, dtype=np.int64).reshape(len(cs), -1)
        if M.shape[1] == 0 or la.rank(M, p) < len(cs):
            return False
    for w in set(r.cod):
        rs = [b for b, v in enumerate(r.cod) if v == w]
        M = [np.concatenate([cls[(b, a)] for a in range(len(r.dom))]) for b in rs]
        M = np.array(M, dtype=np.int64).reshape(len(rs), -1)
        if M.shape[1] == 0 or la.rank(M, p) < len(rs):
            return False
    return True


def radical_level(m):
    """0: not radical, 1: in rad but not rad^2, 2: in rad^2."""
    return radical_filtration(m.alg, m.dom, m.cod).level(m, m.alg.p)


# ============================================================ classification

@dataclass
class ClassificationResult:
    kind: str
    types: dict
    pivot: int = None
    split: CommonSplit = None
    solved_types: dict = field(default_factory=dict)
    literal_method: str = ""
    pivot_level: int = None
    pivot_irreducible: bool = None

    def to_dict(self):
        out = {"kind": self.kind, "pivot": self.pivot,
               "types": {str(i): t for i, t in self.types.items()},
               "literal_method": self.literal_method,
               "split": self.split.to_dict() if self.split else None}
        if self.pivot is not None:
            out["pivot_radical_level"] = self.pivot_level
            out["pivot_irreducible_in_proj"] = self.pivot_irreducible
        return out


def _kind_from_types(types, lo):
    degs = sorted(types)
    vals = [types[i] for i in degs]
    if all(t == BOTH for t in vals):
        raise InconsistentPattern("every component is an isomorphism, so f is invertible")
    if all(t in (SECTION, BOTH) for t in vals):
        return "sec", None
    if all(t in (RETRACTION, BOTH) for t in vals):
        return "ret", None
    piv = [i for i in degs if types[i] == NEITHER]
    if len(piv) != 1:
        raise InconsistentPattern(f"components are neither sections nor retractions in degrees {piv}"
                                  if piv else "sections sit below retractions")
    i = piv[0]
    if any(types[j] not in (RETRACTION, BOTH) for j in degs if j < i) or \
            any(types[j] not in (SECTION, BOTH) for j in degs if j > i):
        raise InconsistentPattern(f"pattern around degree {i} is not retractions below, sections above")
    return ("irr-sec" if i == lo else "ret-irr-sec"), i


def _literal_method(split, lo):
    s0 = split.degrees.get(lo)
    if s0 is None or not s0.Z:
        return "sec"
    if not s0.W:
        if all(not split.degrees[i].W for i in split.degrees if i > lo):
            return "ret"
        return "ret-irr-sec"
    return "irr-sec"


def check_hypotheses(f, certify=True):
    alg = f.alg
    loops = alg.has_irreducible_self_map()
    if loops:
        labs = ", ".join(f"P{alg.labels[v]}" for v in loops)
        raise HypothesisViolated(f"irreducible self maps exist at {labs}")
    if certify:
        for name, C in (("domain", f.dom), ("codomain", f.cod)):
            ok, _ = is_indecomposable(C)
            if not ok:
                raise HypothesisViolated(f"{name} is not indecomposable")


def classify_method(f, certify=True):
    """Type of a chain map asserted to be irreducible."""
    check_hypotheses(f, certify)
    split = split_common(f)
    types = split.types()
    solved = {i: entry_type(f.comp(i)) for i in types}
    if solved != types:
        raise AssertionError("split pattern disagrees with the one-sided solves")  # pragma: no cover
    kind, pivot = _kind_from_types(types, f.lo)
    res = ClassificationResult(kind, types, pivot, split, solved, _literal_method(split, f.lo))
    if pivot is not None:
        r = split.degrees[pivot].residual
        res.pivot_level = radical_level(r)
        res.pivot_irreducible = is_irreducible_proj(r)
    return res


# ================================================ chain-level common part

@dataclass
class ChainSplit:
    f: ChainMap
    common: list             # indecomposable complexes
    dom_rest: list           # parts of W (domain side)
    cod_rest: list           # parts of W' (codomain side)
    residual: ChainMap       # W -> W'
    entries_radical: bool

    @property
    def W(self):
        return direct_sum(*self.dom_rest) if self.dom_rest else None

    @property
    def W_prime(self):
        return direct_sum(*self.cod_rest) if self.cod_rest else None


def split_chain(f):
    """Split ``f ~ 1_C + g`` over decompositions of domain and codomain."""
    dA, dB = decompose(f.dom), decompose(f.cod)
    rows, cols = list(dB.parts), list(dA.parts)
    grid = [[dB.projections[b] @ (f @ dA.injections[a]) for a in range(len(cols))]
            for b in range(len(rows))]
    grid = [[ChainMap(cols[a], rows[b], {i: g.comp(i) for i in range(min(cols[a].lo, rows[b].lo),
                                                                       max(cols[a].hi, rows[b].hi) + 1)})
             for a, g in enumerate(row)] for b, row in enumerate(grid)]
    M, cur, pivots, _, _, free_r, free_c = _eliminate(grid, rows, cols, _ChainOps())
    common = [rows[b] for b, _ in pivots]
    dom_rest = [cur[a] for a in free_c]
    cod_rest = [rows[b] for b in free_r]
    residual = None
    if dom_rest and cod_rest:
        residual = direct_sum_map(cod_rest, dom_rest, [[M[b][a] for a in free_c] for b in free_r])
    radical = all(not M[b][a].is_invertible() for b in free_r for a in free_c)
    return ChainSplit(f, common, dom_rest, cod_rest, residual, radical)


@dataclass
class FShapeReport:
    status: str
    common_is_X: bool = None
    residual_radical: bool = None
    residual: ChainMap = None
    shared_summands: int = 0
    problems: list = field(default_factory=list)
    split: ChainSplit = None

    def to_dict(self):
        res = self.residual
        return {"status": self.status,
                "common_part_is_X": self.common_is_X,
                "residual_radical": self.residual_radical,
                "common_parts": [c.to_dict() for c in self.split.common] if self.split else [],
                "residual": None if res is None else {
                    "W": res.dom.to_dict(), "W_prime": res.cod.to_dict(), "map": res.to_dict()},
                "shared_summands": self.shared_summands,
                "problems": list(self.problems)}


def check_F_shape(f, X=None):
    """Shape of ``F(f)`` for a chain map between two left enlargements."""
    Ff = F_map(f)
    if Ff.is_zero():
        return FShapeReport("degenerate", None, True, None, 0, ["F(f) is zero"], split_chain(Ff))
    if is_section(Ff) is not None:
        return FShapeReport("section", problems=["F(f) is a section: not the expected shape"])
    sp = split_chain(Ff)
    problems = []
    if not sp.dom_rest:
        problems.append("W is zero")
    if not sp.cod_rest:
        problems.append("W' is zero")
    shared = sum(1 for P in sp.dom_rest for Q in sp.cod_rest if indecomposable_iso(P, Q) is not None)
    if shared:
        problems.append("W and W' share a summand")
    common_is_X = None
    if X is not None:
        Xr = X.restrict(1, max(X.hi, Ff.hi))
        C = direct_sum(*sp.common).restrict(1, max(X.hi, Ff.hi)) if sp.common else None
        common_is_X = C is not None and are_isomorphic(C, Xr).isomorphic
        if not common_is_X:
            problems.append("common part is not X")
    status = "ok" if not problems else "mismatch"
    return FShapeReport(status, common_is_X, sp.entries_radical, sp.residual, shared, problems, sp)


# ============================================================ refutation

@dataclass
class WitnessVerdict:
    verdict: str             # "witnessed non-irreducible" or "rejected"
    h1_section: bool
    h2_retraction: bool
    reason: str = ""

    def to_dict(self):
        return {"verdict": self.verdict, "h1_is_section": self.h1_section,
                "h2_is_retraction": self.h2_retraction, "reason": self.reason}


def verify_nonirreducible_witness(f, h1, h2):
    if not h1.cod.same_as(h2.dom):
        raise InvalidInput("codomain of h1 is not the domain of h2")
    for name, h in (("h1", h1), ("h2", h2)):
        if not h.is_chain_map():
            raise InvalidInput(f"{name} is not a chain map")
    if not (h2 @ h1).equals(f):
        raise InvalidInput("composition mismatch: h2 o h1 is not f")
    sec = is_section(h1) is not None
    ret = is_retraction(h2) is not None
    if sec or ret:
        why = "h1 is a section" if sec else "h2 is a retraction"
        return WitnessVerdict("rejected", sec, ret, why)
    return WitnessVerdict("witnessed non-irreducible", sec, ret, "h1 not a section, h2 not a retraction")


def _h1_candidates(S, rng, extra):
    maps = S.maps()
    yield from maps
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            yield maps[i] + maps[j]
    for _ in range(extra if S.dim else 0):
        yield S.element(rng.integers(0, S.X.alg.p, size=S.dim))


def factor_through(f, Y, seed=0, extra=64):
    """Search for ``f = h2 o h1`` through ``Y`` that witnesses f is not
    irreducible.

    Candidates for h1 run over a basis of Hom(dom f, Y), pairwise sums and
    then seeded random combinations; for each one h2 is solved linearly.
    Returns ``(h1, h2, verdict)`` for the first non-rejected pair, the last
    solvable pair if all were rejected, or None."""
    p = f.alg.p
    S1 = chain_map_space(f.dom, Y)
    S2 = chain_map_space(Y, f.cod)
    if S2.dim == 0:
        return None
    lo, hi = f.lo, f.hi
    target = f.on(lo, hi).vector() % p
    basis2 = S2.maps()
    last = None
    for h1 in _h1_candidates(S1, np.random.default_rng(seed), extra):
        A = np.stack([(g @ h1).on(lo, hi).vector() % p for g in basis2], axis=1)
        try:
            t, _ = la.solve(A, target, p)
        except la.InconsistentSystem:
            continue
        h2 = S2.element(t)
        v = verify_nonirreducible_witness(f, h1, h2)
        last = (h1, h2, v)
        if v.verdict != "rejected":
            return last
    return last


@dataclass
class TypeAgreement:
    agree: bool
    first: ClassificationResult
    second: ClassificationResult

    def to_dict(self):
        return {"agree": self.agree,
                "first": {"kind": self.first.kind, "pivot": self.first.pivot},
                "second": {"kind": self.second.kind, "pivot": self.second.pivot}}


def type_agreement(f, g, certify=True):
    if not (f.dom.same_as(g.dom) and f.cod.same_as(g.cod)):
        raise InvalidInput("maps are not parallel")
    a = classify_method(f, certify)
    b = classify_method(g, certify)
    return TypeAgreement(a.kind == b.kind and a.pivot == b.pivot, a, b)


@dataclass
class RestrictionType:
    kind: str                # section, retraction, irreducible-candidate
    lo: int
    hi: int
    restricted: ChainMap = None

    def to_dict(self):
        return {"type": self.kind, "interval": [self.lo, self.hi]}


def restriction_type(f, lo, hi):
    if lo > hi or lo < f.lo or hi > f.hi:
        raise InvalidInput(f"interval [{lo},{hi}] is not inside [{f.lo},{f.hi}]")
    r = f.restrict(lo, hi)
    if is_section(r) is not None:
        return RestrictionType("section", lo, hi, r)
    if is_retraction(r) is not None:
        return RestrictionType("retraction", lo, hi, r)
    return RestrictionType("irreducible-candidate", lo, hi, r)
