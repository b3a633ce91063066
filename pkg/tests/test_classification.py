import pytest

from _gen import fixture
from cforge.algebra import ProjMorphism
from cforge.classification import (BOTH, NEITHER, RETRACTION, SECTION, _kind_from_types,
                                   check_F_shape, classify_method, entry_type, factor_through,
                                   is_irreducible_proj, radical_level, restriction_type,
                                   split_common, type_agreement, verify_nonirreducible_witness)
from cforge.complexes import ChainMap
from cforge.errors import HypothesisViolated, InconsistentPattern, InvalidInput


@pytest.fixture(scope="module")
def six():
    return fixture("example-6vertex")


@pytest.fixture(scope="module")
def nine():
    return fixture("example-9vertex")


def m(A, dom, cod, entries):
    return ProjMorphism.from_terms(A, A.obj(*dom), A.obj(*cod), entries)


def test_entry_types(six):
    A = six.alg
    assert entry_type(m(A, ["2"], ["2", "5"], [(0, 0, 1)])) == SECTION
    assert entry_type(m(A, ["2", "5"], ["2"], [(0, 0, 1)])) == RETRACTION
    assert entry_type(m(A, ["2"], ["2"], [(0, 0, 3)])) == BOTH
    assert entry_type(m(A, ["2"], ["1"], [(0, 0, [(1, ["a1"])])])) == NEITHER


def test_irreducible_in_proj(six):
    A = six.alg
    a1 = [(1, ["a1"])]
    assert is_irreducible_proj(m(A, ["2"], ["1"], [(0, 0, a1)]))
    assert not is_irreducible_proj(m(A, ["2"], ["1", "1"], [(0, 0, a1), (1, 0, a1)]))
    assert not is_irreducible_proj(m(A, ["3"], ["1"], [(0, 0, [(1, ["a1", "a2"])])]))
    assert radical_level(m(A, ["3"], ["1"], [(0, 0, [(1, ["a1", "a2"])])])) == 2
    # a1 and a1 b1 out of P2 + P5: the second column lies in rad^2
    assert not is_irreducible_proj(m(A, ["2", "5"], ["1"], [(0, 0, a1), (0, 1, [(1, ["a1", "b1"])])]))


def test_kind_table():
    S, R, B, N = SECTION, RETRACTION, BOTH, NEITHER
    assert _kind_from_types({0: S, 1: B}, 0) == ("sec", None)
    assert _kind_from_types({0: R, 1: B, 2: R}, 0) == ("ret", None)
    assert _kind_from_types({0: R, 1: N, 2: S}, 0) == ("ret-irr-sec", 1)
    assert _kind_from_types({0: N, 1: S}, 0) == ("irr-sec", 0)
    for bad in ({0: B, 1: B}, {0: S, 1: R}, {0: N, 1: N}, {0: S, 1: N, 2: S}):
        with pytest.raises(InconsistentPattern):
            _kind_from_types(bad, 0)


def test_nine_vertex_classification(nine):
    r = classify_method(nine.maps["f"])
    assert (r.kind, r.pivot) == ("ret-irr-sec", 2)
    assert r.types == {0: BOTH, 1: BOTH, 2: NEITHER, 3: SECTION}
    assert r.pivot_level == 1 and r.pivot_irreducible
    assert r.split.reassembles() and r.split.residual_is_radical()
    # the degree-0 test alone reads this map as a section pattern
    assert r.literal_method == "sec"


def test_hypotheses_checked(six):
    f = six.maps["f"]
    from cforge.algebra import Algebra
    from cforge.complexes import Complex
    L = Algebra([1], [("x", 1, 1)], [[(1, ["x", "x"])]])
    X = Complex(L, 0, [L.obj("1")])
    with pytest.raises(HypothesisViolated):
        classify_method(ChainMap.identity(X))
    # f factors through Y, and its degreewise pattern fits no irreducible type
    with pytest.raises(InconsistentPattern):
        classify_method(f)


def test_split_common_six(six):
    s = split_common(six.maps["f"])
    assert s.reassembles() and s.residual_is_radical()
    d1 = s.degrees[1]
    assert [six.alg.labels[v] for v in d1.common] == ["2"]
    assert s.types() == {0: SECTION, 1: NEITHER, 2: BOTH}


def test_check_f_shape_and_witness(six):
    f = six.maps["f"]
    r = check_F_shape(f, six.complexes["X"])
    assert r.status == "ok" and r.common_is_X and r.residual_radical
    v = verify_nonirreducible_witness(f, six.maps["h1"], six.maps["h2"])
    assert v.verdict == "witnessed non-irreducible"
    found = factor_through(f, six.complexes["Y"])
    assert found is not None and found[2].verdict == "witnessed non-irreducible"
    assert (found[1] @ found[0]).equals(f)
    with pytest.raises(InvalidInput):
        verify_nonirreducible_witness(f, six.maps["h1"], six.maps["h2"].scale(2))
    # factoring through the identity is always rejected
    one = ChainMap.identity(f.dom)
    assert verify_nonirreducible_witness(f, one, f).verdict == "rejected"


def test_restriction_and_agreement(six, nine):
    f = six.maps["f"]
    assert restriction_type(f, 1, 2).kind == "irreducible-candidate"
    assert restriction_type(f, 2, 2).kind == "section"
    with pytest.raises(InvalidInput):
        restriction_type(f, 0, 5)
    g = nine.maps["f"]
    assert type_agreement(g, g.scale(5)).agree
