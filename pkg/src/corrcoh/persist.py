"""Persistence category of S correspondences: weighted objects, matrix morphisms,
shifts, cones, r-acyclicity and a stand-in distance.

Shifts and filtration levels are ``Level`` values (stored as e^r).  An entry
from summand (Z, r_i) to summand (Z', s_j) of a morphism at level k may use
classes of order at most e^k * e^{r_i} / e^{s_j}.  Complexes are cochain
complexes: ``d(n)`` maps ``obj(n)`` to ``obj(n + 1)``.
"""

import itertools
from dataclasses import dataclass, field

from . import corr as K
from .errors import EnumerationCapExceeded, InvariantViolated, MismatchedSpaces, NotLevelZero
from .homology import cube_space
from .model import DEFAULT_ENUMERATION_CAP, AdmissibleMap, format_label
from .zlinalg import sparse_lattice_member

Level = K.Level
ZERO = Level(1)
STANDIN_LABEL = "BCZ-standin"


def _level(r):
    return r if isinstance(r, Level) else Level(r)


def class_key(f):
    return K.normalize(f).representative.sheets


def combine(terms):
    """Class vector {normal-form key: coefficient} of (coef, correspondence) terms."""
    out = {}
    for c, f in terms:
        k = class_key(f)
        out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


class WeightedObject:
    """Direct sum of (connected space, shift) summands."""

    __slots__ = ("summands",)

    def __init__(self, summands=()):
        out = []
        for z, r in summands:
            if not z.is_connected():
                raise InvariantViolated(f"summand {z.id} is not connected")
            out.append((z, _level(r)))
        self.summands = tuple(out)

    def __len__(self):
        return len(self.summands)

    def __eq__(self, other):
        return isinstance(other, WeightedObject) and self.summands == other.summands

    def __hash__(self):
        return hash(self.summands)

    def __repr__(self):
        return "WeightedObject(" + ", ".join(f"({z.id},{r})" for z, r in self.summands) + ")"

    def shift(self, r):
        r = _level(r)
        return WeightedObject([(z, s + r) for z, s in self.summands])

    def __add__(self, other):
        return WeightedObject(self.summands + other.summands)

    def bound(self, i, target, j, level):
        """Largest order allowed in entry (i, j) at the given level."""
        return (level + self.summands[i][1] - target.summands[j][1]).order_bound()


class MatrixMorphism:
    """Matrix of formal sums of S correspondences; entries[(i, j)] goes from
    source summand i to target summand j."""

    __slots__ = ("source", "target", "entries", "level")

    def __init__(self, source, target, entries=None, level=ZERO, check=True):
        self.source = source
        self.target = target
        self.level = _level(level)
        cooked = {}
        for (i, j), terms in (entries or {}).items():
            terms = [(c, f) for c, f in terms if c]
            if terms:
                cooked[(i, j)] = tuple(terms)
        self.entries = cooked
        if check:
            self.validate()

    def validate(self, level=None):
        level = self.level if level is None else _level(level)
        for (i, j), terms in self.entries.items():
            if not (0 <= i < len(self.source) and 0 <= j < len(self.target)):
                raise InvariantViolated(f"entry ({i}, {j}) outside the matrix")
            zi, zj = self.source.summands[i][0], self.target.summands[j][0]
            bound = self.source.bound(i, self.target, j, level)
            for _, f in terms:
                if f.source != zi or f.target != zj or f.flavor != "S":
                    raise MismatchedSpaces(f"entry ({i}, {j}) has the wrong spaces")
                if K.normalize(f).representative.max_order() > bound:
                    raise InvariantViolated(
                        f"entry ({i}, {j}) has order above e^{level} * shift ratio = {bound}")

    def admits_level(self, level):
        try:
            self.validate(level)
        except (InvariantViolated, MismatchedSpaces):
            return False
        return True

    def at_level(self, level):
        """The same matrix viewed at another level (raises if it does not fit)."""
        return MatrixMorphism(self.source, self.target, self.entries, level)

    def __repr__(self):
        return f"MatrixMorphism({self.source!r} -> {self.target!r}, level {self.level}, {len(self.entries)} entries)"

    def vectors(self):
        return {ij: v for ij, v in ((ij, combine(t)) for ij, t in self.entries.items()) if v}

    def __eq__(self, other):
        return (isinstance(other, MatrixMorphism) and self.source == other.source
                and self.target == other.target and self.vectors() == other.vectors())

    def __hash__(self):
        return hash((self.source, self.target))

    def is_zero(self):
        return not self.vectors()

    def _like(self, entries, level=None):
        return MatrixMorphism(self.source, self.target, entries,
                              self.level if level is None else level, check=False)

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise MismatchedSpaces("adding morphisms with different ends")
        out = {k: list(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            out.setdefault(k, []).extend(v)
        return self._like(out, max(self.level, other.level))

    def __neg__(self):
        return self._like({k: [(-c, f) for c, f in v] for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return self._like({ij: [(k * c, f) for c, f in v] for ij, v in self.entries.items()})

    def compose(self, inner):
        """self o inner: (G o F)_{i,j} = sum_l G_{l,j} o F_{i,l}."""
        if inner.target != self.source:
            raise MismatchedSpaces("morphisms are not composable")
        out = {}
        by_src = {}
        for (l, j), terms in self.entries.items():
            by_src.setdefault(l, []).append((j, terms))
        for (i, l), fterms in inner.entries.items():
            for j, gterms in by_src.get(l, ()):
                acc = out.setdefault((i, j), [])
                for cg, g in gterms:
                    for cf, f in fterms:
                        acc.append((cg * cf, K.compose(g, f)))
        return MatrixMorphism(inner.source, self.target, out, self.level + inner.level, check=False)

    @classmethod
    def identity(cls, obj, level=ZERO):
        return cls(obj, obj, {(i, i): [(1, K.identity(z, "S"))] for i, (z, _) in enumerate(obj.summands)},
                   level)

    @classmethod
    def zero(cls, source, target, level=ZERO):
        return cls(source, target, {}, level)

    def shifted(self, r):
        """Sigma^r applied to both ends; entries and level are unchanged."""
        return MatrixMorphism(self.source.shift(r), self.target.shift(r), self.entries, self.level,
                              check=False)

    def describe(self):
        lines = []
        for (i, j), terms in sorted(self.entries.items()):
            for c, f in terms:
                lines.append(f"  [{i},{j}] {c:+d} x " + f.describe().replace("\n", "; "))
        return "\n".join(lines) or "  0"


def block_morphism(blocks, sources, targets, level=ZERO):
    """Assemble a morphism between direct sums from blocks[(a, b)] (source block a,
    target block b)."""
    src = WeightedObject(sum((o.summands for o in sources), ()))
    tgt = WeightedObject(sum((o.summands for o in targets), ()))
    soff = list(itertools.accumulate([0] + [len(o) for o in sources]))
    toff = list(itertools.accumulate([0] + [len(o) for o in targets]))
    out = {}
    for (a, b), m in blocks.items():
        for (i, j), terms in m.entries.items():
            out.setdefault((soff[a] + i, toff[b] + j), []).extend(terms)
    return MatrixMorphism(src, tgt, out, level, check=False)


class PersistenceComplex:
    """Finite cochain complex of weighted objects, degrees lo..lo+len-1."""

    def __init__(self, objects, diffs, lo=0, check=True):
        self.lo = lo
        self.objects = list(objects)
        self.diffs = list(diffs)
        if len(self.diffs) != max(len(self.objects) - 1, 0):
            raise ValueError("need one differential between consecutive objects")
        for n, d in enumerate(self.diffs):
            if d.source != self.objects[n] or d.target != self.objects[n + 1]:
                raise MismatchedSpaces(f"differential {lo + n} has the wrong ends")
        if check:
            for n, d in enumerate(self.diffs):
                if not d.admits_level(ZERO):
                    raise InvariantViolated(f"differential {lo + n} is not at level 0")
            bad = self.d_squared_failures()
            if bad:
                raise InvariantViolated(f"d o d != 0 in degrees {bad}")

    @property
    def hi(self):
        return self.lo + len(self.objects) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def obj(self, n):
        if self.lo <= n <= self.hi:
            return self.objects[n - self.lo]
        return WeightedObject()

    def d(self, n):
        """d: obj(n) -> obj(n + 1)."""
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return MatrixMorphism.zero(self.obj(n), self.obj(n + 1))

    def d_squared_failures(self):
        return [n for n in range(self.lo, self.hi - 1)
                if not self.d(n + 1).compose(self.d(n)).is_zero()]

    def shift(self, r):
        r = _level(r)
        objs = [o.shift(r) for o in self.objects]
        diffs = [MatrixMorphism(objs[n], objs[n + 1], d.entries, d.level, check=False)
                 for n, d in enumerate(self.diffs)]
        return PersistenceComplex(objs, diffs, self.lo, check=False)

    def translate(self):
        """T(C)^n = C^{n+1} with differential -d."""
        return PersistenceComplex(self.objects, [-d for d in self.diffs], self.lo - 1, check=False)

    def __repr__(self):
        return f"PersistenceComplex(degrees {self.lo}..{self.hi}, sizes {[len(o) for o in self.objects]})"


class FilteredChainMap:
    """Components F(n): source.obj(n) -> target.obj(n) at a common level."""

    def __init__(self, source, target, components, level=ZERO, check=True):
        self.source = source
        self.target = target
        self.level = _level(level)
        self.components = dict(components)
        if check:
            for n, f in self.components.items():
                if f.source != source.obj(n) or f.target != target.obj(n):
                    raise MismatchedSpaces(f"component {n} has the wrong ends")
                f.validate(self.level)
            bad = self.chain_failures()
            if bad:
                raise InvariantViolated(f"chain condition fails in degrees {bad}")

    def component(self, n):
        f = self.components.get(n)
        if f is None:
            return MatrixMorphism.zero(self.source.obj(n), self.target.obj(n), self.level)
        return f

    def degrees(self):
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def chain_failures(self):
        bad = []
        for n in self.degrees():
            lhs = self.component(n + 1).compose(self.source.d(n))
            rhs = self.target.d(n).compose(self.component(n))
            if lhs != rhs:
                bad.append(n)
        return bad

    def compose(self, inner):
        comps = {n: self.component(n).compose(inner.component(n)) for n in inner.degrees()}
        return FilteredChainMap(inner.source, self.target, comps, self.level + inner.level, check=False)

    def __eq__(self, other):
        return all(self.component(n) == other.component(n) for n in self.degrees())

    def __hash__(self):
        return hash(self.level)


def shift(c, r):
    return c.shift(r)


def canonical_id(c, r, s):
    """id^{r,s}: Sigma^r C -> Sigma^s C, identity entries at level s - r."""
    r, s = _level(r), _level(s)
    src, tgt = c.shift(r), c.shift(s)
    comps = {}
    for n in c.degrees():
        obj = c.obj(n)
        comps[n] = MatrixMorphism(src.obj(n), tgt.obj(n),
                                  {(i, i): [(1, K.identity(z, "S"))] for i, (z, _) in enumerate(obj.summands)},
                                  s - r, check=False)
    return FilteredChainMap(src, tgt, comps, s - r)


def cone(f):
    """cone(F)^n = C^{n+1} + K^n with d(c, k) = (-d_C c, F c + d_K k)."""
    C, Kc = f.source, f.target
    for n, comp in f.components.items():
        if not comp.admits_level(ZERO):
            raise NotLevelZero(f"component {n} does not fit at level 0 (level {f.level})")
    lo = min(C.lo - 1, Kc.lo)
    hi = max(C.hi - 1, Kc.hi)
    objs, diffs = [], []
    for n in range(lo, hi + 1):
        objs.append(C.obj(n + 1) + Kc.obj(n))
    for n in range(lo, hi):
        blocks = {
            (0, 0): -C.d(n + 1),
            (0, 1): f.component(n + 1),
            (1, 1): Kc.d(n),
        }
        diffs.append(block_morphism(blocks, [C.obj(n + 1), Kc.obj(n)], [C.obj(n + 2), Kc.obj(n + 1)]))
    return PersistenceComplex(objs, diffs, lo)


def _cone_parts(f, n):
    return f.source.obj(n + 1), f.target.obj(n)


def cone_witness(f):
    """The null-homotopy H^n(c, k) = (k, 0) of cone(id^{r,0}), one matrix per degree."""
    c = cone(f)
    out = {}
    for n in c.degrees():
        Cn1, Kn = _cone_parts(f, n)
        Cn, Kn1 = _cone_parts(f, n - 1)
        ident = {(i, i): [(1, K.identity(z, "S"))] for i, (z, _) in enumerate(Kn.summands)}
        blk = MatrixMorphism(Kn, Cn, ident, check=False)
        out[n] = block_morphism({(1, 0): blk}, [Cn1, Kn], [Cn, Kn1])
    return out


def check_null_homotopy(c, H, r):
    """Whether d H + H d = id on every degree with H entries at level r."""
    r = _level(r)
    for n in c.degrees():
        h_n = H.get(n, MatrixMorphism.zero(c.obj(n), c.obj(n - 1)))
        h_n1 = H.get(n + 1, MatrixMorphism.zero(c.obj(n + 1), c.obj(n)))
        if not h_n.admits_level(r):
            return False
        lhs = c.d(n - 1).compose(h_n) + h_n1.compose(c.d(n))
        ident = MatrixMorphism.identity(c.obj(n))
        if MatrixMorphism(lhs.source, lhs.target, lhs.entries, check=False) != ident:
            return False
    return True


@dataclass
class AcyclicVerdict:
    verdict: str
    witness: dict = None
    caps: dict = field(default_factory=dict)

    def __str__(self):
        return self.verdict


def _generators(z, w, order, cap):
    """Class representatives of SC_b(z, w) with order <= order (z connected)."""
    if order < 0:
        return []
    key = (z, w, order)
    hit = _GEN_CACHE.get(key)
    if hit is None:
        ms = K.enumerate_component_classes(z, w, 0, order, cap=cap)
        hit = [K.Correspondence(z, w, "S", [m], check=False) for m in ms]
        if len(_GEN_CACHE) > 4096:
            _GEN_CACHE.clear()
        _GEN_CACHE[key] = hit
    return hit


_GEN_CACHE = {}


def r_acyclic(c, r, degree_cap=None, cap=DEFAULT_ENUMERATION_CAP, witness=None, order_cap=4):
    """Search for H with d H + H d = id and entries at level r.

    A supplied witness is checked first.  Otherwise unknowns are integer
    coefficients on class generators for every entry of every H^n and the
    identity is solved by lattice membership.  When some target is not
    sign-definite, distinct normal forms may still be equal classes, so a
    failed search is reported as undecided rather than no.
    """
    r = _level(r)
    caps = {"level": str(r), "degree_cap": degree_cap, "order": order_cap}
    if witness is not None and check_null_homotopy(c, witness, r):
        return AcyclicVerdict("yes", witness, caps)
    top = c.hi if degree_cap is None else min(c.hi, degree_cap)
    degrees = [n for n in c.degrees() if n <= top]
    unknowns = []  # (n, i, j, generator)
    for n in degrees + ([top + 1] if top < c.hi else []):
        src, tgt = c.obj(n), c.obj(n - 1)
        for i, (z, _) in enumerate(src.summands):
            for j, (w, _) in enumerate(tgt.summands):
                for g in _generators(z, w, min(src.bound(i, tgt, j, r), order_cap), cap):
                    unknowns.append((n, i, j, g))
    definite = all(K.sign_definite(w) for n in degrees for w, _ in c.obj(n).summands)
    rows = {}
    cols = []

    def row(key):
        if key[0] > top:
            return None
        if key not in rows:
            rows[key] = len(rows)
        return rows[key]

    for n, i, j, g in unknowns:
        col = {}
        # contribution to (d H)^{n} restricted: d(n-1) o H^n, an endomorphism of obj(n)
        d_prev = c.d(n - 1)
        for (a, b), terms in d_prev.entries.items():
            if a != j:
                continue
            for cf, f in terms:
                k = row((n, i, b, class_key(K.compose(f, g))))
                if k is not None:
                    col[k] = col.get(k, 0) + cf
        # contribution to H^n o d(n-1), an endomorphism of obj(n-1)
        d_in = c.d(n - 1)
        for (a, b), terms in d_in.entries.items():
            if b != i:
                continue
            for cf, f in terms:
                k = row((n - 1, a, j, class_key(K.compose(g, f))))
                if k is not None:
                    col[k] = col.get(k, 0) + cf
        cols.append({k: v for k, v in col.items() if v})
    rhs_keys = []
    for n in degrees:
        for i, (z, _) in enumerate(c.obj(n).summands):
            rhs_keys.append(row((n, i, i, class_key(K.identity(z, "S")))))
    b = [0] * len(rows)
    for k in rhs_keys:
        b[k] += 1
    sol = sparse_lattice_member(cols, len(rows), b)
    if sol is None:
        return AcyclicVerdict("no-within-cap" if definite else "undecided", None, caps)
    H = {}
    for (n, i, j, g), x in zip(unknowns, sol):
        if x:
            H.setdefault(n, {}).setdefault((i, j), []).append((x, g))
    Hm = {n: MatrixMorphism(c.obj(n), c.obj(n - 1), e, r, check=False) for n, e in H.items()}
    return AcyclicVerdict("yes", Hm, caps)


def r_isomorphism(f, r, degree_cap=None, cap=DEFAULT_ENUMERATION_CAP, witness=None, order_cap=4):
    return r_acyclic(cone(f), r, degree_cap, cap, witness, order_cap)


# ---------------------------------------------------------------- canonical complexes

def _cube_object(y, m, n):
    space = cube_space(y, m, n)
    return space, WeightedObject([(space.restrict(comp, id=f"{space.id}#{format_label(comp[0])}"), ZERO)
                                  for comp in space.components()])


def _map_matrix(space, obj_src, space_t, obj_tgt, h, coef_terms):
    """Matrix of a formal sum of maps space -> space_t, split by components."""
    entries = {}
    for coef, h in coef_terms:
        for i, (z, _) in enumerate(obj_src.summands):
            imgs = [h(p) for p in z.points]
            j = space_t.component_of(imgs[0])
            w = obj_tgt.summands[j][0]
            g = K.Correspondence(z, w, "S", [[dict(zip(z.points, imgs))]], check=False)
            entries.setdefault((i, j), []).append((coef, g))
    return MatrixMorphism(obj_src, obj_tgt, entries, check=False)


def canonical_complex(y, m, variant="two_point", degree_cap=2):
    """0 -> Y -> Y x M -> ... -> Y x M^D with the insertion differentials."""
    if variant not in ("one_point", "two_point"):
        raise ValueError("variant must be one_point or two_point")
    spaces, objs = [], []
    for n in range(degree_cap + 1):
        s, o = _cube_object(y, m, n)
        spaces.append(s)
        objs.append(o)
    diffs = []
    for n in range(degree_cap):
        terms = []
        for i in range(n + 1):
            eps_range = (0,) if variant == "one_point" else (0, 1)
            for eps in eps_range:
                p = m.marked(eps)
                h = AdmissibleMap(spaces[n], spaces[n + 1],
                                  [(a, t[:i] + (p,) + t[i:]) for a, t in spaces[n].points], check=False)
                terms.append(((-1) ** (i + eps), h))
        diffs.append(_map_matrix(spaces[n], objs[n], spaces[n + 1], objs[n + 1], None, terms))
    return PersistenceComplex(objs, diffs, 0)


def induced_chain_map(f, cy, cx, y, x, m, shift_source=None, placement=None):
    """Chain map with components F x id_{M^n}, split into summand entries.

    With ``shift_source`` the map is read from Sigma^{shift} Y_. so that a class
    of order k becomes a level-zero morphism for shift = ln k. An empty
    component k of F is the class [empty]; ``placement[k]`` names the target
    component of x it lands in and may be omitted when x is connected.
    """
    placement = placement or {}
    from .homology import cross_identity
    src = cy if shift_source is None else cy.shift(shift_source)
    comps = {}
    for n in cy.degrees():
        g = cross_identity(f, m, n)
        sy, sx = cube_space(y, m, n), cube_space(x, m, n)
        entries = {}
        so, to = src.obj(n), cx.obj(n)
        for kc, comp in enumerate(sy.components()):
            z = so.summands[kc][0]
            groups = {}
            for s in g.sheets[kc]:
                j = sx.component_of(s[0])
                groups.setdefault(j, []).append(dict(zip(comp, s)))
            if len(groups) > 1:
                raise InvariantViolated("F x id splits a summand across target components")
            if not groups:
                ky = y.component_of(comp[0][0])
                if ky in placement:
                    groups[sx.component_of((x.components()[placement[ky]][0], comp[0][1]))] = []
                elif len(to.summands) == 1:
                    groups[0] = []
                else:
                    raise InvariantViolated("empty component of F x id has no target summand")
            for j, maps in groups.items():
                entries[(kc, j)] = [(1, K.Correspondence(z, to.summands[j][0], "S", [maps], check=False))]
        comps[n] = MatrixMorphism(so, to, entries, check=False)
    return FilteredChainMap(src, cx, comps, ZERO)


# ---------------------------------------------------------------- distance

@dataclass
class DistanceReport:
    value: object  # Level or None for infinity
    certificate: dict
    caps: dict
    undecided: bool = False
    standin: bool = True
    label: str = STANDIN_LABEL

    def value_str(self):
        if self.value is not None:
            return str(self.value)
        return "inf?" if self.undecided else "inf"


DISTANCE_GENERATOR_CAP = 4096


def _directed(y, z, m, variant, order_cap, degree_cap, cap, gen_cap):
    """Least ln k with some F x id an ln k-isomorphism, plus skipped candidates.

    Truncating at degree D only spoils the cone degrees next to the cut, so
    the null-homotopy equations are imposed on cone degrees <= D - 2, where
    every object they touch is the untruncated one.
    """
    cy = canonical_complex(y, m, variant, degree_cap)
    cz = canonical_complex(z, m, variant, degree_cap)
    skipped = []
    cands = []
    for ms in itertools.product(*[K.enumerate_component_classes(y, z, k, order_cap, cap=cap)
                                  for k in range(len(y.components()))]):
        f = K.Correspondence(y, z, "S", list(ms), check=False)
        empty = [k for k, sh in enumerate(f.sheets) if not sh]
        for targets in itertools.product(range(len(z.components())), repeat=len(empty)):
            cands.append((f, dict(zip(empty, targets))))
    for k in range(1, order_cap + 1):
        for f, place in cands:
            if max(f.max_order(), 1) > k:
                continue
            try:
                fm = induced_chain_map(f, cy, cz, y, z, m, shift_source=Level(k), placement=place)
            except InvariantViolated:
                continue
            try:
                wit = cone_witness(fm)
            except MismatchedSpaces:
                wit = None
            try:
                v = r_isomorphism(fm, Level(k), degree_cap - 2, cap=gen_cap, witness=wit, order_cap=order_cap)
            except EnumerationCapExceeded:
                skipped.append((k, f))
                continue
            if v.verdict == "yes":
                return Level(k), {"map": f, "level": Level(k), "homotopy": v.witness, "placement": place}, skipped
            if v.verdict == "undecided":
                skipped.append((k, f))
    return None, None, skipped


def distance(y, z, m, variant="two_point", order_cap=2, degree_cap=2, cap=DEFAULT_ENUMERATION_CAP,
             gen_cap=DISTANCE_GENERATOR_CAP):
    """Stand-in distance: least ln k (k <= order_cap) with an ln k-isomorphism
    Sigma^{ln k} Y_. -> Z_. of the form F x id, symmetrized by max."""
    caps = {"order": order_cap, "degree": degree_cap, "variant": variant}
    a, ca, sa = _directed(y, z, m, variant, order_cap, degree_cap, cap, gen_cap)
    b, cb, sb = _directed(z, y, m, variant, order_cap, degree_cap, cap, gen_cap)
    value = None if a is None or b is None else max(a, b)
    # an infinite value is only a bound when some candidate could not be decided
    undecided = value is None and bool((sa if a is None else []) + (sb if b is None else []))
    return DistanceReport(value, {"forward": ca, "backward": cb}, caps, undecided=undecided)
