import itertools
import random

import pytest

from corrcoh import corr as K
from corrcoh import persist as P
from corrcoh.errors import NotLevelZero
from corrcoh.model import Space
from corrcoh.verify import random_persistence_complex
from helpers import interval

M = interval()
Y = Space("Y", ["y"], {"y": 1})


def obj(*spaces, shifts=None):
    shifts = shifts or [P.ZERO] * len(spaces)
    return P.WeightedObject(list(zip(spaces, shifts)))


def test_levels_in_exp_coordinates():
    assert P.Level(2) + P.Level(3) == P.Level(6)
    assert str(P.Level(6)) == "ln(6)" and str(P.ZERO) == "0"
    with pytest.raises(ValueError):
        P.Level(0)
    o = obj(Y, shifts=[P.Level(2)])
    # entry from (Y, ln 2) to (Y, 0) at level 0 may use order 2
    assert o.bound(0, obj(Y), 0, P.ZERO) == 2


def test_matrix_category_laws_two_summands():
    a = Space("A", ["a"], {"a": 1})
    spaces = [Y, a]
    objs = [obj(*c) for n in (1, 2) for c in itertools.product(spaces, repeat=n)]
    rng = random.Random(0)

    def rand_morphism(s, t):
        entries = {}
        for i, (z, _) in enumerate(s.summands):
            for j, (w, _) in enumerate(t.summands):
                if rng.random() < 0.7:
                    g = K.Correspondence(z, w, "S", [[{z.points[0]: w.points[0]}]])
                    entries[(i, j)] = [(rng.randint(-2, 2), g)]
        return P.MatrixMorphism(s, t, entries)

    for s, t, u, v in itertools.islice(itertools.product(objs, repeat=4), 0, None, 7):
        f, g, h = rand_morphism(s, t), rand_morphism(t, u), rand_morphism(u, v)
        assert h.compose(g.compose(f)) == h.compose(g).compose(f)
        assert P.MatrixMorphism.identity(t).compose(f) == f == f.compose(P.MatrixMorphism.identity(s))
        f2 = rand_morphism(s, t)
        assert g.compose(f + f2) == g.compose(f) + g.compose(f2)


def test_canonical_complexes():
    for variant in ("one_point", "two_point"):
        c = P.canonical_complex(Y, M, variant, 3)
        assert c.d_squared_failures() == []
        assert c.obj(0).summands[0][0].points == (("y", ()),)
        assert all(r == P.ZERO for o in c.objects for _, r in o.summands)
    c = P.canonical_complex(Y, M, "one_point", 1)
    (i, j), terms = next(iter(c.d(0).entries.items()))
    assert len(terms) == 1 and terms[0][1].sheets[0][0] == (("y", ("p0",)),)


def test_translation_commutes_with_shift():
    c = P.canonical_complex(Y, M, "two_point", 2)
    r = P.Level(3)
    a, b = c.translate().shift(r), c.shift(r).translate()
    assert a.lo == b.lo and a.objects == b.objects
    assert all(x == y for x, y in zip(a.diffs, b.diffs))


def test_id_law_and_cone_lemma():
    rng = random.Random(3)
    for _ in range(3):
        c = random_persistence_complex(rng)
        for k in (2, 3):
            f = P.canonical_id(c, P.Level(k), P.ZERO)
            cone = P.cone(f)
            assert cone.d_squared_failures() == []
            w = P.cone_witness(f)
            assert P.check_null_homotopy(cone, w, P.Level(k))
            assert not P.check_null_homotopy(cone, w, P.ZERO)
            v = P.r_acyclic(cone, P.Level(k), witness=w)
            assert v.verdict == "yes" and v.witness is w
        g = P.canonical_id(c, P.Level(3), P.Level(5)).compose(P.canonical_id(c, P.Level(2), P.Level(3)))
        assert g == P.canonical_id(c, P.Level(2), P.Level(5))


def test_cone_needs_level_zero():
    c = P.canonical_complex(Y, M, "two_point", 1)
    with pytest.raises(NotLevelZero):
        P.cone(P.canonical_id(c, P.ZERO, P.Level(2)))


def test_r_acyclic_search_examples():
    c = P.canonical_complex(Y, M, "two_point", 1)
    f = P.canonical_id(c, P.Level(2), P.ZERO)
    assert P.r_acyclic(P.cone(f), P.Level(2)).verdict == "yes"
    zero = P.PersistenceComplex([P.WeightedObject()], [], 0)
    assert P.r_acyclic(zero, P.ZERO).verdict == "yes"
    single = P.PersistenceComplex([obj(Y)], [], 0)
    assert P.r_acyclic(single, P.ZERO).verdict == "no-within-cap"


def test_identity_is_zero_isomorphism():
    c = P.canonical_complex(Y, M, "two_point", 2)
    f = P.canonical_id(c, P.ZERO, P.ZERO)
    assert P.r_isomorphism(f, P.ZERO, witness=P.cone_witness(f)).verdict == "yes"


def test_different_h0_rank_is_never_an_isomorphism():
    z = Space("Z", ["a", "b"], {"a": 1, "b": 1})
    d = P.distance(Y, z, M, "two_point", 2, 2)
    assert d.value is None and not d.undecided


def test_distance_examples():
    assert P.distance(Y, Y, M).value == P.ZERO
    zh = Space("Z", ["a", "b"], {"a": 1, "b": 0})
    d = P.distance(Y, zh, M, "one_point", 2, 2)
    assert d.value is not None and d.certificate["forward"]["map"] is not None
    assert d.label == "BCZ-standin" and d.standin
    e = P.distance(zh, Y, M, "one_point", 2, 2)
    assert e.value == d.value


def test_empty_component_placement():
    # b has weight 0, so F sends it to the empty family; the class lands in a chosen summand
    zh = Space("Zh", ["a", "b"], {"a": 1, "b": 0})
    z = Space("Z", ["a", "b"], {"a": 1, "b": 1})
    d = P.distance(zh, z, M, "one_point", 2, 2)
    assert d.value == P.ZERO
    cert = d.certificate["forward"]
    assert len(cert["map"].sheets[1]) == 0 and 1 in cert["placement"]
    cy, cz = P.canonical_complex(zh, M, "one_point", 1), P.canonical_complex(z, M, "one_point", 1)
    with pytest.raises(P.InvariantViolated):
        P.induced_chain_map(cert["map"], cy, cz, zh, z, M)
    f = P.induced_chain_map(cert["map"], cy, cz, zh, z, M, placement={1: 0})
    assert f.chain_failures() == []
