import itertools

import numpy as np
import pytest

from _gen import fixture, random_complex
from cforge.algebra import Algebra, ProjMorphism
from cforge.complexes import (ChainMap, Complex, chain_map_space, direct_sum, homotopy_category_hom,
                              is_null_homotopic, is_retraction, is_section, mapping_cone, shift)
from cforge.errors import NotAChainMap, NotAComplex


def brute_chain_maps(X, Y):
    """Oracle over F_2: count chain maps by enumerating all components."""
    lo, hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
    sizes = [ProjMorphism.zero(X.alg, X.obj(i), Y.obj(i)).coords.shape[0] for i in range(lo, hi + 1)]
    n = 0
    for v in itertools.product(range(2), repeat=sum(sizes)):
        comps, off = {}, 0
        for k, i in enumerate(range(lo, hi + 1)):
            comps[i] = ProjMorphism(X.alg, X.obj(i), Y.obj(i), v[off:off + sizes[k]])
            off += sizes[k]
        n += ChainMap(X, Y, comps).is_chain_map()
    return n


def test_hom_space_dimension_matches_enumeration():
    A = fixture("toy-a3", prime=2).alg
    rng = np.random.default_rng(0)
    checked = 0
    while checked < 12:
        X, Y = random_complex(A, 0, 2, rng), random_complex(A, 0, 2, rng)
        total = sum(ProjMorphism.zero(A, X.obj(i), Y.obj(i)).coords.shape[0] for i in range(0, 3))
        if total > 12:
            continue
        assert 2 ** chain_map_space(X, Y).dim == brute_chain_maps(X, Y)
        checked += 1


def test_bad_inputs_rejected():
    A = fixture("toy-a3").alg
    a = ProjMorphism.from_terms(A, A.obj("2"), A.obj("1"), [(0, 0, [(1, ["a"])])])
    b = ProjMorphism.from_terms(A, A.obj("3"), A.obj("2"), [(0, 0, [(1, ["b"])])])
    Complex(A, 0, [A.obj("3"), A.obj("2"), A.obj("1")], [b, a])
    # in the path algebra without the relation, b followed by a is nonzero
    B = Algebra([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    a2 = ProjMorphism.from_terms(B, B.obj("2"), B.obj("1"), [(0, 0, [(1, ["a"])])])
    b2 = ProjMorphism.from_terms(B, B.obj("3"), B.obj("2"), [(0, 0, [(1, ["b"])])])
    with pytest.raises(NotAComplex):
        Complex(B, 0, [B.obj("3"), B.obj("2"), B.obj("1")], [b2, a2])
    X = Complex(A, 0, [A.obj("2"), A.obj("1")], [a])
    S = Complex(A, 0, [A.obj("2"), ()])
    with pytest.raises(NotAChainMap):
        ChainMap(S, X, {0: ProjMorphism.identity(A, A.obj("2"))}, check=True)


def test_contractible_complex_is_zero_in_homotopy_category():
    A = fixture("toy-a2").alg
    P1 = A.obj("1")
    C = Complex(A, 0, [P1, P1], [ProjMorphism.identity(A, P1)])
    assert chain_map_space(C, C).dim == 1
    assert homotopy_category_hom(C, C).dim == 0
    assert is_null_homotopic(ChainMap.identity(C))


def test_homotopy_hom_of_indecomposable_two_term():
    P = fixture("toy-a2")
    X = P.complexes["P2P1"]
    assert homotopy_category_hom(X, X).dim == 1
    assert not is_null_homotopic(ChainMap.identity(X))


def test_sections_and_retractions():
    P = fixture("example-6vertex")
    X, S5 = P.complexes["X"], P.complexes["S5"]
    Z = direct_sum(X, S5)
    A = P.alg
    inc = ChainMap(X, Z, {1: ProjMorphism.from_terms(A, X.obj(1), Z.obj(1), [(0, 0, 1)]),
                          2: ProjMorphism.identity(A, X.obj(2))}, check=True)
    g = is_section(inc)
    assert g is not None and (g @ inc).equals(ChainMap.identity(X))
    proj = g
    h = is_retraction(proj)
    assert h is not None and (proj @ h).equals(ChainMap.identity(X))
    assert is_retraction(inc) is None and is_section(proj) is None


def test_mapping_cone_is_a_complex_and_shift():
    P = fixture("example-6vertex")
    f = P.maps["f"]
    C = mapping_cone(f)
    assert C.failing_degree() is None
    for i in range(C.lo, C.hi + 1):
        assert C.obj(i) == f.dom.obj(i + 1) + f.cod.obj(i)
    X = P.complexes["X"]
    assert shift(X, 1).obj(0) == X.obj(1)


def test_round_trip_dict():
    A = fixture("example-9vertex").alg
    rng = np.random.default_rng(4)
    for _ in range(10):
        X = random_complex(A, 0, 3, rng)
        assert Complex.from_dict(A, X.to_dict()).same_as(X)


def test_chain_map_algebra():
    P = fixture("example-6vertex")
    f = P.maps["f"]
    assert (f - f).is_zero()
    assert (f + f).equals(f.scale(2))
    one = ChainMap.identity(f.cod)
    assert (one @ f).equals(f)
