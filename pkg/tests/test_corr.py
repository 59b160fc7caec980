import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from corrcoh import corr as K
from corrcoh.errors import InvariantViolated, MismatchedSpaces
from corrcoh.homology import build_basis
from corrcoh.model import AdmissibleMap, Space, point_space, product
from helpers import D, E, SE, all_corrs, atoms


def test_add_examples():
    x = Space("X", ["x"], {"x": 1})
    y = Space("Y", ["y"], {"y": 1})
    f = K.Correspondence(y, x, "S", [[{"y": "x"}]])
    assert K.add(f, K.empty(y, x, "S", isotropic=True)) == f
    with pytest.raises(InvariantViolated):
        K.add(f, f)
    a = K.Correspondence(E, D, "J", [[{"a": "a", "b": "a"}] * 2])
    b = K.Correspondence(E, D, "J", [[{"a": "b", "b": "b"}] * 3])
    assert K.add(a, b).orders() == (5,)
    with pytest.raises(MismatchedSpaces):
        K.add(a, K.Correspondence(D, D, "J", [[], []]))


def test_compose_examples():
    f = K.Correspondence(E, E, "J", [[{"a": "a", "b": "b"}, {"a": "a", "b": "a"}]])
    g = K.Correspondence(E, E, "J", [[{"a": "b", "b": "b"}] * 3])
    assert K.compose(g, f).max_order() == 6
    assert K.compose(K.identity(E, "J"), f) == f == K.compose(f, K.identity(E, "J"))
    h, bound = K.compose_filtered(g, f)
    assert bound == K.Level(6) and h.lies_at(bound)
    one = K.Correspondence(E, E, "J", [[{"a": "a", "b": "b"}]])
    h, bound = K.compose_filtered(one, one)
    assert bound == K.Level(1) and str(bound) == "0"


def test_compose_per_component_bound():
    # orders (1, 2) on a disconnected source, then a connected order 3
    f = K.Correspondence(D, E, "J", [[{"a": "a"}], [{"b": "a"}, {"b": "b"}]])
    g = K.Correspondence(E, E, "J", [[{"a": "a", "b": "b"}] * 3])
    h, bound = K.compose_filtered(g, f)
    assert h.orders() == (3, 6) and bound == K.Level(6)


def test_wedge_orders_and_slice():
    x = Space("X", ["x", "z"], {"x": 1}, [("x", "z")])
    y = Space("Y", ["y"], {"y": 1})
    z = Space("Z", ["u", "v"], {"u": 1}, [("u", "v")])
    f = K.Correspondence(y, x, "S", [[{"y": "x"}]])
    g = K.Correspondence(z, x, "S", [[{"u": "x", "v": "z"}]])
    w = K.wedge(f, g)
    assert w.orders() == (2,)
    i = K.graph(AdmissibleMap(y, product(y, z), [("y", "v")], "S"), "S")
    v = K.class_equal(K.compose(w, i), f)
    assert v.verdict == "equal"
    P, Q = v.witness
    assert K.add(K.compose(w, i), P) == K.add(f, Q)


def test_wedge_with_isotropic_is_class_of_projection():
    x = Space("X", ["x", "z"], {"x": 1})
    y = Space("Y", ["y"], {"y": 1})
    z = Space("Z", ["u"], {})
    f = K.Correspondence(y, x, "S", [[{"y": "x"}]])
    g = K.Correspondence(z, x, "S", [[{"u": "z"}]], isotropic=True)
    pr = AdmissibleMap(product(y, z), y, ["y"], "Plain")
    assert K.class_equal(K.wedge(f, g), K.pullback(pr, f)).equal


def test_normalize_examples():
    x = Space("X", ["x", "u", "v"], {"x": 1, "u": 2, "v": -2})
    y = Space("Y", ["y"], {"y": 1})
    f = K.Correspondence(y, x, "S", [[{"y": "x"}, {"y": "u"}, {"y": "v"}]])
    assert K.normalize(f).representative == K.Correspondence(y, x, "S", [[{"y": "x"}]])
    n = K.normalize(f).representative
    assert K.normalize(n).representative == n
    x0 = Space("X0", ["a", "b"], {})
    pt = point_space()
    reps = {K.normalize(c).representative for c in all_corrs(pt, x0, "S", 3)}
    assert len(reps) == 1


def test_class_equal_examples():
    x = Space("X", ["a", "b", "c"], {"a": 1, "b": 0, "c": 2})
    y = Space("Y", ["y"], {"y": 1})
    f = K.Correspondence(y, x, "S", [[{"y": "a"}]])
    assert K.class_equal(f, f).verdict == "equal"
    g = K.Correspondence(y, x, "S", [[{"y": "a"}, {"y": "b"}]])
    assert K.class_equal(f, g).verdict == "equal"
    y2 = Space("Y2", ["y"], {"y": 2})
    h1 = K.Correspondence(y2, x, "S", [[{"y": "c"}]])
    h2 = K.Correspondence(y2, x, "S", [[{"y": "a"}, {"y": "a"}]])
    assert K.class_equal(h1, h2).verdict == "distinct"


def test_class_equal_undecided_or_equal_on_indefinite():
    x = Space("X", ["p", "m", "q"], {"p": 1, "m": -1, "q": 2})
    y = Space("Y", ["y"], {"y": 1})
    f = K.Correspondence(y, x, "S", [[{"y": "p"}]])
    g = K.Correspondence(y, x, "S", [[{"y": "q"}, {"y": "m"}]])
    v = K.class_equal(f, g)
    assert v.verdict in ("equal", "undecided")
    if v.equal:
        P, Q = v.witness
        assert K.add(f, P) == K.add(g, Q)


def test_scor_nonempty_examples():
    x0 = Space("X", ["a"], {})
    assert not K.scor_nonempty(Space("Y", ["y"], {"y": 1}), x0)
    assert K.scor_nonempty(Space("Y", ["y"], {}), x0)
    assert K.scor_nonempty(Space("Y", ["y"], {"y": 3}), Space("X", ["a", "b"], {"a": 1, "b": 2}))


def test_pullback_examples():
    f = K.Correspondence(E, D, "J", [[{"a": "a", "b": "a"}, {"a": "b", "b": "b"}]])
    assert K.pullback(AdmissibleMap.identity(E, "J"), f) == f
    h = AdmissibleMap(D, E, ["a", "b"], "Plain")
    assert K.pullback(h, f) == K.compose(f, K.graph(h, "J"))
    x = Space("X", ["p", "m"], {"p": 1, "m": -1})
    iso = K.Correspondence(E, x, "S", [[{"a": "p", "b": "p"}, {"a": "m", "b": "m"}]], isotropic=True)
    assert K.pullback(AdmissibleMap(D, E, ["a", "b"]), iso).isotropic


def test_jc_point_rank_and_scor_point_rank():
    pt = point_space()
    for n in (1, 2, 3, 5):
        x = Space("X", [f"x{i}" for i in range(n)], {})
        assert build_basis("J", pt, x, 4).rank == n
        assert build_basis("S", pt, x, 4).rank == 1


def test_category_laws_exhaustive_connected():
    for flavor, models in (("J", (E,)), ("S", (SE,))):
        for z, y, x in itertools.product(models, repeat=3):
            F, G, H = all_corrs(z, y, flavor), all_corrs(y, x, flavor), all_corrs(x, x, flavor)
            GF = {(g, f): K.compose(g, f) for g in G for f in F}
            for h in H:
                HG = {g: K.compose(h, g) for g in G}
                for (g, f), gf in GF.items():
                    assert K.compose(h, gf) == K.compose(HG[g], f)


def test_compose_distributes_exhaustive():
    for z, y, x in itertools.product((E, D), repeat=3):
        F, G = all_corrs(z, y, "J", 2), all_corrs(y, x, "J", 2)
        for f1, f2 in itertools.product(F, repeat=2):
            for g in G[:6]:
                assert K.compose(g, K.add(f1, f2)) == K.add(K.compose(g, f1), K.compose(g, f2))
        for g1, g2 in itertools.product(G, repeat=2):
            for f in F[:6]:
                assert K.compose(K.add(g1, g2), f) == K.add(K.compose(g1, f), K.compose(g2, f))


def test_associativity_on_atoms_all_two_point_models():
    for z, y, x, w in itertools.product((E, D), repeat=4):
        for f in atoms(z, y, "J"):
            for g in atoms(y, x, "J"):
                for h in atoms(x, w, "J"):
                    assert K.compose(h, K.compose(g, f)) == K.compose(K.compose(h, g), f)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_s_compose_descends_to_classes(rnd):
    x = Space("X", ["a", "b"], {"a": 1, "b": 0}, [("a", "b")])
    y = Space("Y", ["y"], {"y": 1})
    F = all_corrs(y, x, "S", 2)
    G = all_corrs(x, x, "S", 2)
    f, g = rnd.choice(F), rnd.choice(G)
    iso = K.Correspondence(y, x, "S", [[{"y": "b"}]], isotropic=True)
    lhs = K.compose(g, K.add(f, iso))
    assert K.class_equal(lhs, K.compose(g, f)).equal


def test_filtration_random_pairs():
    rng = random.Random(5)
    models = [E, D]
    for _ in range(200):
        z, y, x = (rng.choice(models) for _ in range(3))
        f = rng.choice(all_corrs(z, y, "J", 3))
        g = rng.choice(all_corrs(y, x, "J", 3))
        h = K.compose(g, f)
        assert h.max_order() <= f.max_order() * g.max_order()
        assert h.lies_at(f.level() + g.level())
