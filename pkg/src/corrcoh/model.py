"""Finite discrete models: spaces with weights and edges, marked spaces, maps.

A space is a finite set of point labels carrying a rational weight per point
(the discrete symplectic form) and a directed edge relation (the discrete
almost complex structure).  The edge relation is always read reflexively:
``has_edge(a, a)`` is true for every point, so constant maps and projections
are edge-preserving.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import EnumerationCapExceeded, ModelError

FLAVORS = ("S", "J", "Plain")
DEFAULT_ENUMERATION_CAP = 200_000


def as_rational(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ModelError(f"refusing inexact weight {value!r}")
    return Fraction(value)


def format_label(p):
    if isinstance(p, tuple):
        return "(" + ",".join(format_label(q) for q in p) + ")"
    return str(p)


class Space:
    """Finite point set with weights and a directed edge relation."""

    __slots__ = ("id", "points", "_weight", "edges", "_index", "_out",
                 "_components", "_comp_of", "_key")

    def __init__(self, id, points, weight=None, edges=()):
        points = tuple(points)
        if len(set(points)) != len(points):
            raise ModelError(f"space {id}: duplicate point labels")
        index = {p: i for i, p in enumerate(points)}
        weight = dict(weight or {})
        for p in weight:
            if p not in index:
                raise ModelError(f"space {id}: weight for unknown point {p!r}")
        edge_set = set()
        for a, b in edges:
            if a not in index or b not in index:
                raise ModelError(f"space {id}: edge {a!r}->{b!r} has an undeclared endpoint")
            if a != b:
                edge_set.add((a, b))
        self.id = id
        self.points = points
        self._weight = {p: as_rational(weight.get(p, 0)) for p in points}
        self.edges = frozenset(edge_set)
        self._index = index
        out = {p: set() for p in points}
        for a, b in self.edges:
            out[a].add(b)
        self._out = {p: frozenset(s) for p, s in out.items()}
        self._components = None
        self._comp_of = None
        self._key = (points, tuple(self._weight[p] for p in points),
                     tuple(sorted(self.edges, key=lambda e: (index[e[0]], index[e[1]]))))

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self._index

    def __eq__(self, other):
        return self is other or (isinstance(other, Space) and self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Space({self.id!r}, {len(self.points)} points)"

    def index(self, p):
        return self._index[p]

    def weight(self, p):
        return self._weight[p]

    def weights(self):
        return dict(self._weight)

    def out_neighbors(self, p):
        return self._out[p]

    def has_edge(self, a, b):
        return a == b or b in self._out[a]

    def components(self):
        """Connected components of the undirected closure, as sorted tuples.

        Components are ordered by their least point label.
        """
        if self._components is None:
            parent = {p: p for p in self.points}

            def find(p):
                while parent[p] != p:
                    parent[p] = parent[parent[p]]
                    p = parent[p]
                return p

            for a, b in self.edges:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
            groups = {}
            for p in self.points:
                groups.setdefault(find(p), []).append(p)
            comps = sorted((tuple(sorted(g)) for g in groups.values()), key=lambda c: c[0])
            self._components = tuple(comps)
            self._comp_of = {p: i for i, c in enumerate(comps) for p in c}
        return self._components

    def component_of(self, p):
        self.components()
        return self._comp_of[p]

    def is_connected(self):
        return len(self.components()) <= 1

    def restrict(self, points, id=None):
        keep = set(points)
        pts = [p for p in self.points if p in keep]
        return Space(id or f"{self.id}|", pts, {p: self._weight[p] for p in pts},
                     [(a, b) for a, b in self.edges if a in keep and b in keep])

    def weight_signs(self):
        """Set of signs (-1, 0, 1) occurring among the weights."""
        return {(w > 0) - (w < 0) for w in self._weight.values()}


def point_space(id="pt"):
    return Space(id, [()], {(): 0})


def _strong_product(factors, id):
    pts = list(itertools.product(*(f.points for f in factors)))
    weight = {p: sum((f.weight(c) for f, c in zip(factors, p)), Fraction(0)) for p in pts}
    edges = []
    closed = [{p: (p,) + tuple(f.out_neighbors(p)) for p in f.points} for f in factors]
    for p in pts:
        for q in itertools.product(*(cl[c] for cl, c in zip(closed, p))):
            if q != p:
                edges.append((p, q))
    return Space(id, pts, weight, edges)


def product(a, b):
    """Strong product: points are pairs, weights add, edges coordinate-wise edge-or-equal."""
    return _strong_product([a, b], f"{a.id}x{b.id}")


def power(m, n):
    """n-fold strong power of a marked space's underlying space; n = 0 gives pt."""
    space = m.space if isinstance(m, MarkedSpace) else m
    if n < 0:
        raise ModelError("power exponent must be nonnegative")
    if n == 0:
        return point_space()
    return _strong_product([space] * n, f"{space.id}^{n}")


def components(space):
    return space.components()


@dataclass(frozen=True)
class MarkedSpace:
    """Connected space with two distinct weight-zero marked points."""

    space: Space
    p0: object
    p1: object

    def __post_init__(self):
        s = self.space
        if self.p0 not in s or self.p1 not in s:
            raise ModelError(f"marked space {s.id}: marked points must belong to the space")
        if self.p0 == self.p1:
            raise ModelError(f"marked space {s.id}: p0 and p1 must differ")
        if s.weight(self.p0) != 0 or s.weight(self.p1) != 0:
            raise ModelError(f"marked space {s.id}: marked points must have weight 0")
        if not s.is_connected():
            raise ModelError(f"marked space {s.id}: space must be connected")

    @property
    def id(self):
        return self.space.id

    def marked(self, eps):
        return self.p0 if eps == 0 else self.p1


def is_edge_preserving(source, target, images, domain=None):
    domain = source.points if domain is None else domain
    img = dict(zip(domain, images))
    for a, b in source.edges:
        if a in img and b in img and not target.has_edge(img[a], img[b]):
            return False
    return True


def is_coherent(source, target, images, domain=None):
    """Each source component is sent into a single target component."""
    domain = source.points if domain is None else domain
    seen = {}
    for p, q in zip(domain, images):
        c = source.component_of(p)
        t = target.component_of(q)
        if seen.setdefault(c, t) != t:
            return False
    return True


def is_symplectic(source, target, images, domain=None):
    domain = source.points if domain is None else domain
    if len(set(images)) != len(images):
        return False
    if any(source.weight(p) != target.weight(q) for p, q in zip(domain, images)):
        return False
    return is_coherent(source, target, images, domain)


def satisfies(flavor, source, target, images, domain=None):
    if flavor == "J":
        return is_edge_preserving(source, target, images, domain)
    if flavor == "S":
        return is_symplectic(source, target, images, domain)
    if flavor == "Plain":
        return True
    raise ModelError(f"unknown flavor {flavor!r}")


def iter_assignments(source, target, flavor, domain=None, fixed=None,
                     coherent=False, cap=DEFAULT_ENUMERATION_CAP):
    """Yield image tuples (aligned with ``domain``) passing the flavor predicate.

    Backtracking over domain points in order, candidate images in target
    order, so the output order is lexicographic and deterministic.
    """
    domain = tuple(source.points if domain is None else domain)
    fixed = dict(fixed or {})
    free = sum(1 for p in domain if p not in fixed)
    if len(target) ** free > cap:
        raise EnumerationCapExceeded(
            f"{len(target)}^{free} candidate maps {source.id} -> {target.id} exceed cap {cap}")
    pos = {p: i for i, p in enumerate(domain)}
    # edges to check once both endpoints are assigned, keyed by later endpoint
    checks = [[] for _ in domain]
    if flavor == "J":
        for a, b in source.edges:
            if a in pos and b in pos:
                checks[max(pos[a], pos[b])].append((pos[a], pos[b]))
    comp = [source.component_of(p) for p in domain]
    need_coherent = coherent or flavor == "S"
    images = [None] * len(domain)
    used = set()
    comp_target = {}

    def ok(i, q):
        if flavor == "S":
            if q in used or source.weight(domain[i]) != target.weight(q):
                return False
        if need_coherent:
            t = comp_target.get(comp[i])
            if t is not None and t[0] != target.component_of(q):
                return False
        for a, b in checks[i]:
            qa = q if a == i else images[a]
            qb = q if b == i else images[b]
            if not target.has_edge(qa, qb):
                return False
        return True

    def rec(i):
        if i == len(domain):
            yield tuple(images)
            return
        p = domain[i]
        options = (fixed[p],) if p in fixed else target.points
        for q in options:
            if q not in target or not ok(i, q):
                continue
            images[i] = q
            if flavor == "S":
                used.add(q)
            entry = comp_target.get(comp[i])
            if need_coherent:
                if entry is None:
                    comp_target[comp[i]] = [target.component_of(q), 1]
                else:
                    entry[1] += 1
            yield from rec(i + 1)
            if need_coherent:
                entry = comp_target[comp[i]]
                entry[1] -= 1
                if entry[1] == 0:
                    del comp_target[comp[i]]
            if flavor == "S":
                used.discard(q)
        images[i] = None

    yield from rec(0)


class AdmissibleMap:
    """A total function between point sets, checked against its flavor."""

    __slots__ = ("source", "target", "images", "flavor", "_lookup")

    def __init__(self, source, target, assignment, flavor="Plain", check=True):
        if isinstance(assignment, dict):
            try:
                images = tuple(assignment[p] for p in source.points)
            except KeyError as exc:
                raise ModelError(f"map {source.id} -> {target.id} undefined at {exc.args[0]!r}")
        else:
            images = tuple(assignment)
            if len(images) != len(source):
                raise ModelError("assignment length does not match the source")
        for q in images:
            if q not in target:
                raise ModelError(f"image {q!r} is not a point of {target.id}")
        if flavor not in FLAVORS:
            raise ModelError(f"unknown flavor {flavor!r}")
        if check and not satisfies(flavor, source, target, images):
            raise ModelError(f"assignment {source.id} -> {target.id} is not {flavor}-admissible")
        self.source = source
        self.target = target
        self.images = images
        self.flavor = flavor
        self._lookup = dict(zip(source.points, images))

    def __call__(self, p):
        return self._lookup[p]

    def __eq__(self, other):
        return (isinstance(other, AdmissibleMap) and self.images == other.images
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        pairs = ", ".join(f"{format_label(p)}->{format_label(q)}"
                          for p, q in zip(self.source.points, self.images))
        return f"AdmissibleMap[{self.flavor}]({pairs})"

    def as_dict(self):
        return dict(self._lookup)

    def compose(self, inner):
        """self o inner."""
        if inner.target != self.source:
            raise ModelError("maps are not composable")
        flavor = self.flavor if self.flavor == inner.flavor else "Plain"
        return AdmissibleMap(inner.source, self.target,
                             [self(inner(p)) for p in inner.source.points], flavor, check=False)

    @classmethod
    def identity(cls, space, flavor="Plain"):
        return cls(space, space, space.points, flavor, check=False)


def enumerate_admissible_maps(src, tgt, flavor, cap=DEFAULT_ENUMERATION_CAP):
    return [AdmissibleMap(src, tgt, imgs, flavor, check=False)
            for imgs in iter_assignments(src, tgt, flavor, cap=cap)]


def find_monoid_structure(m, cap=DEFAULT_ENUMERATION_CAP):
    """First J-map g: MxM -> M with g(p0, q) = p0 and g(p1, q) = q, or None."""
    mm = product(m.space, m.space)
    fixed = {}
    for q in m.space.points:
        fixed[(m.p0, q)] = m.p0
        fixed[(m.p1, q)] = q
    for imgs in iter_assignments(mm, m.space, "J", fixed=fixed, cap=cap):
        return AdmissibleMap(mm, m.space, imgs, "J", check=False)
    return None


def find_swap(m, flavor, cap=DEFAULT_ENUMERATION_CAP):
    """First flavor-admissible g: M -> M exchanging p0 and p1, or None."""
    fixed = {m.p0: m.p1, m.p1: m.p0}
    for imgs in iter_assignments(m.space, m.space, flavor, fixed=fixed, cap=cap):
        return AdmissibleMap(m.space, m.space, imgs, flavor, check=False)
    return None


def find_square_swap(m, cap=DEFAULT_ENUMERATION_CAP):
    """First S-map g: MxM -> MxM with g(p1, q) = (q, p0) for all q, or None."""
    mm = product(m.space, m.space)
    fixed = {(m.p1, q): (q, m.p0) for q in m.space.points}
    for imgs in iter_assignments(mm, mm, "S", fixed=fixed, cap=cap):
        return AdmissibleMap(mm, mm, imgs, "S", check=False)
    return None


def projection(a, b, which, flavor="J"):
    """Projection of product(a, b) onto factor ``which`` (0 for a, 1 for b)."""
    prod = product(a, b)
    tgt = a if which == 0 else b
    return AdmissibleMap(prod, tgt, [p[which] for p in prod.points], flavor,
                         check=flavor != "Plain")


def slice_inclusion(a, b, point, flavor="J"):
    """a -> product(a, b), y -> (y, point)."""
    prod = product(a, b)
    return AdmissibleMap(a, prod, [(y, point) for y in a.points], flavor,
                         check=flavor != "Plain")
