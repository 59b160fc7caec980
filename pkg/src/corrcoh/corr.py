"""Correspondences: finite multisets of sheet maps, one multiset per source component.

A sheet on a component ``c`` is stored as a tuple of target labels aligned
with ``c``'s sorted points.  Sheets inside a component are kept sorted, so
two correspondences are equal exactly when their multisets are equal.

Flavor J sheets are edge-preserving maps.  Flavor S sheets are arbitrary
maps that land in a single target component; the correspondence as a
whole must satisfy the weight condition: at every source point the target
weights of the sheet images add up to the source weight (or to zero for an
isotropic correspondence).
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (EnumerationCapExceeded, InvariantViolated, MismatchedSpaces,
                     ModelError, SearchBoundExceeded)
from .model import (DEFAULT_ENUMERATION_CAP, AdmissibleMap, format_label,
                    is_edge_preserving, product)

DEFAULT_SUBSET_LIMIT = 18
DEFAULT_CLASS_BOUND = 3


class Level:
    """Filtration level r, stored exactly as E = e^r (a positive rational).

    Adding levels multiplies the stored values, so r = ln 2 + ln 3 is
    Level(6).  A correspondence lies at level r when every component order
    is at most E.
    """

    __slots__ = ("exp",)

    def __init__(self, exp=1):
        exp = Fraction(exp)
        if exp <= 0:
            raise ValueError("a level is stored as e^r and must be positive")
        self.exp = exp

    @classmethod
    def ln(cls, k):
        return cls(k)

    def __add__(self, other):
        return Level(self.exp * other.exp)

    def __sub__(self, other):
        return Level(self.exp / other.exp)

    def __neg__(self):
        return Level(1 / self.exp)

    def __eq__(self, other):
        return isinstance(other, Level) and self.exp == other.exp

    def __lt__(self, other):
        return self.exp < other.exp

    def __le__(self, other):
        return self.exp <= other.exp

    def __gt__(self, other):
        return self.exp > other.exp

    def __ge__(self, other):
        return self.exp >= other.exp

    def __hash__(self):
        return hash(("Level", self.exp))

    def __repr__(self):
        return f"Level({self})"

    def __str__(self):
        return "0" if self.exp == 1 else f"ln({self.exp})"

    def admits(self, order):
        return order <= self.exp

    def order_bound(self):
        """Largest integer order allowed at this level."""
        return self.exp.numerator // self.exp.denominator


FiltrationLevel = Level


def _sheet_key(target, sheet):
    return tuple(target.index(q) for q in sheet)


def _coerce_sheet(comp, target, m):
    if isinstance(m, AdmissibleMap):
        m = m.as_dict()
    if isinstance(m, dict):
        try:
            sheet = tuple(m[p] for p in comp)
        except KeyError as exc:
            raise ModelError(f"sheet undefined at point {exc.args[0]!r}")
    else:
        sheet = tuple(m)
        if len(sheet) != len(comp):
            raise ModelError("sheet length does not match its component")
    for q in sheet:
        if q not in target:
            raise ModelError(f"sheet image {q!r} is not a point of {target.id}")
    return sheet


class Correspondence:
    """Multiset of sheet maps per source component."""

    __slots__ = ("source", "target", "flavor", "sheets", "isotropic", "_hash")

    def __init__(self, source, target, flavor, sheets, isotropic=False, check=True):
        if flavor not in ("S", "J"):
            raise ModelError(f"correspondence flavor must be S or J, got {flavor!r}")
        comps = source.components()
        if isinstance(sheets, dict):
            sheets = [sheets.get(i, ()) for i in range(len(comps))]
        sheets = list(sheets)
        if len(sheets) != len(comps):
            raise ModelError("need one sheet multiset per source component")
        self.source = source
        self.target = target
        self.flavor = flavor
        self.isotropic = bool(isotropic) and flavor == "S"
        cooked = []
        for comp, ms in zip(comps, sheets):
            ss = [_coerce_sheet(comp, target, m) for m in ms]
            ss.sort(key=lambda s: _sheet_key(target, s))
            cooked.append(tuple(ss))
        self.sheets = tuple(cooked)
        self._hash = None
        if check:
            self._validate()

    def _validate(self):
        src, tgt = self.source, self.target
        for comp, ss in zip(src.components(), self.sheets):
            for s in ss:
                if self.flavor == "J":
                    if not is_edge_preserving(src, tgt, s, comp):
                        raise InvariantViolated("J sheet is not edge-preserving")
                elif len({tgt.component_of(q) for q in s}) > 1:
                    raise InvariantViolated("S sheet meets several target components")
        if self.flavor == "S":
            want = "isotropic" if self.isotropic else "genuine"
            if classify_profile(self) not in (want, "both"):
                raise InvariantViolated(
                    f"weight condition fails for a {want} S correspondence {src.id} -> {tgt.id}")

    def _key(self):
        return (self.flavor, self.isotropic, self.sheets)

    def __eq__(self, other):
        return (isinstance(other, Correspondence) and self._key() == other._key()
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"Correspondence[{self.flavor}]({self.source.id}->{self.target.id}, orders={self.orders()})"

    def describe(self):
        parts = []
        for comp, ss in zip(self.source.components(), self.sheets):
            maps = " ; ".join("{ " + ", ".join(f"{format_label(p)}->{format_label(q)}"
                                               for p, q in zip(comp, s)) + " }" for s in ss)
            parts.append(f"component {format_label(comp[0])}: {maps or '(empty)'}")
        return "\n".join(parts)

    def orders(self):
        return tuple(len(ss) for ss in self.sheets)

    def max_order(self):
        return max(self.orders(), default=0)

    def level(self):
        return Level(max(1, self.max_order()))

    def lies_at(self, level):
        return all(level.admits(n) for n in self.orders())

    def profile(self, k):
        """Summed target weights over sheets at each point of component k."""
        comp = self.source.components()[k]
        tot = [Fraction(0)] * len(comp)
        w = self.target.weight
        for s in self.sheets[k]:
            for i, q in enumerate(s):
                tot[i] += w(q)
        return tuple(tot)

    def sheet_maps(self, k):
        comp = self.source.components()[k]
        return [dict(zip(comp, s)) for s in self.sheets[k]]

    def evaluate(self, p):
        """Multiset of images of a source point, sorted."""
        k = self.source.component_of(p)
        i = self.source.components()[k].index(p)
        return sorted((s[i] for s in self.sheets[k]), key=self.target.index)


class IsotropicCorrespondence(Correspondence):
    """S correspondence whose sheet weights add up to zero at every point."""

    __slots__ = ()

    def __init__(self, source, target, sheets, check=True):
        super().__init__(source, target, "S", sheets, isotropic=True, check=check)


def classify_profile(f):
    """'genuine', 'isotropic', 'both' (source weight zero there) or 'neither'."""
    genuine = iso = True
    for k, comp in enumerate(f.source.components()):
        prof = f.profile(k)
        for p, v in zip(comp, prof):
            if v != f.source.weight(p):
                genuine = False
            if v != 0:
                iso = False
    if genuine and iso:
        return "both"
    return "genuine" if genuine else ("isotropic" if iso else "neither")


def _make(source, target, flavor, sheets, isotropic_hint):
    """Build a result and pick its S kind from its weight profile."""
    if flavor == "J":
        return Correspondence(source, target, "J", sheets, check=False)
    probe = Correspondence(source, target, "S", sheets, check=False)
    kind = classify_profile(probe)
    if kind == "neither":
        raise InvariantViolated(
            f"result {source.id} -> {target.id} is neither genuine nor isotropic")
    iso = isotropic_hint if kind == "both" else kind == "isotropic"
    probe.isotropic = iso
    return probe


def empty(source, target, flavor, isotropic=None):
    """The order-zero correspondence (the monoid unit)."""
    if isotropic is None:
        isotropic = flavor == "S"
    return Correspondence(source, target, flavor, [()] * len(source.components()),
                          isotropic=isotropic)


def from_maps(source, target, flavor, maps, isotropic=False):
    """Uniform-order correspondence whose sheets are restrictions of global maps."""
    maps = [m.as_dict() if isinstance(m, AdmissibleMap) else dict(m) for m in maps]
    sheets = [[{p: m[p] for p in comp} for m in maps] for comp in source.components()]
    return Correspondence(source, target, flavor, sheets, isotropic=isotropic)


def graph(h, flavor):
    """Single-sheet correspondence of an admissible map."""
    return from_maps(h.source, h.target, flavor, [h])


def identity(space, flavor):
    return graph(AdmissibleMap.identity(space), flavor)


def _same_spaces(f, g):
    if f.source != g.source or f.target != g.target or f.flavor != g.flavor:
        raise MismatchedSpaces("correspondences differ in source, target or flavor")


def add(f, g):
    _same_spaces(f, g)
    sheets = [a + b for a, b in zip(f.sheets, g.sheets)]
    return _make(f.source, f.target, f.flavor, sheets, f.isotropic and g.isotropic)


def compose(g, f):
    """g o f for f: Z -> Y and g: Y -> X, taking all sheet composites."""
    if f.target != g.source:
        raise MismatchedSpaces("compose needs f.target == g.source")
    if f.flavor != g.flavor:
        raise MismatchedSpaces("compose needs equal flavors")
    Y = g.source
    ycomps = Y.components()
    pos = [{p: i for i, p in enumerate(c)} for c in ycomps]
    sheets = []
    for ss in f.sheets:
        out = []
        for s in ss:
            ks = {Y.component_of(q) for q in s}
            if len(ks) != 1:
                raise InvariantViolated("a sheet image meets several components")
            k = ks.pop()
            idx = [pos[k][q] for q in s]
            for t in g.sheets[k]:
                out.append(tuple(t[i] for i in idx))
        sheets.append(out)
    return _make(f.source, g.target, f.flavor, sheets, f.isotropic or g.isotropic)


def compose_filtered(g, f):
    """Compose, returning (g o f, level bound level(g) + level(f))."""
    h = compose(g, f)
    bound = g.level() + f.level()
    if not h.lies_at(bound):
        raise InvariantViolated("composition escaped the product filtration level")
    return h, bound


def wedge(f, g):
    """F v G on product(Y, Z): sheets f_i o pr_Y together with g_j o pr_Z."""
    if f.target != g.target or f.flavor != g.flavor:
        raise MismatchedSpaces("wedge needs a common target and flavor")
    Y, Z = f.source, g.source
    P = product(Y, Z)
    sheets = []
    for comp in P.components():
        y0, z0 = comp[0]
        ky, kz = Y.component_of(y0), Z.component_of(z0)
        ycomp, zcomp = Y.components()[ky], Z.components()[kz]
        yi = [ycomp.index(y) for y, _ in comp]
        zi = [zcomp.index(z) for _, z in comp]
        out = [tuple(s[i] for i in yi) for s in f.sheets[ky]]
        out += [tuple(s[i] for i in zi) for s in g.sheets[kz]]
        sheets.append(out)
    return _make(P, f.target, f.flavor, sheets, f.isotropic and g.isotropic)


def pullback(h, f):
    """h^* f = f o h for an admissible map h: Z -> Y."""
    if h.target != f.source:
        raise MismatchedSpaces("pullback needs h.target == f.source")
    Z, Y = h.source, f.source
    if f.flavor == "J" and not is_edge_preserving(Z, Y, h.images):
        raise InvariantViolated("J pullback needs an edge-preserving map")
    ycomps = Y.components()
    sheets = []
    for comp in Z.components():
        ks = {Y.component_of(h(p)) for p in comp}
        if len(ks) != 1:
            raise InvariantViolated("pullback map splits a component")
        k = ks.pop()
        idx = [ycomps[k].index(h(p)) for p in comp]
        sheets.append([tuple(s[i] for i in idx) for s in f.sheets[k]])
    return _make(Z, f.target, f.flavor, sheets, f.isotropic)


# ---------------------------------------------------------------- classes

def sign_definite(x):
    """All target weights >= 0 or all <= 0.

    On such targets every isotropic correspondence is a sum of zero-profile
    sheets, so normal forms decide class equality exactly.
    """
    signs = x.weight_signs() - {0}
    return len(signs) <= 1


isotropic_singleton_generated = sign_definite


def _isotropic_subset(ss, profile_of, limit):
    n = len(ss)
    if n > limit:
        raise SearchBoundExceeded(f"{n} sheets on one component exceed the subset limit {limit}")
    profs = [profile_of(s) for s in ss]
    width = len(profs[0]) if profs else 0
    for k in range(n, 0, -1):
        for combo in itertools.combinations(range(n), k):
            if all(sum(profs[i][j] for i in combo) == 0 for j in range(width)):
                return combo
    return ()


class SCorClass:
    """Isotropic-quotient class of an S correspondence, held in normal form."""

    __slots__ = ("representative",)

    def __init__(self, representative):
        self.representative = representative

    @property
    def source(self):
        return self.representative.source

    @property
    def target(self):
        return self.representative.target

    def __eq__(self, other):
        return isinstance(other, SCorClass) and self.representative == other.representative

    def __hash__(self):
        return hash(self.representative)

    def __repr__(self):
        return f"SCorClass({self.representative!r})"


def normalize(f, limit=DEFAULT_SUBSET_LIMIT):
    """Drop, per component, the largest isotropic sub-multiset.

    Among the largest ones the lexicographically first (by sorted sheet
    position) is removed.  What remains has no isotropic sub-multiset, so
    the operation is idempotent.
    """
    if isinstance(f, SCorClass):
        return f
    if f.flavor != "S":
        raise ModelError("normalize applies to S correspondences")
    w = f.target.weight

    def prof(s):
        return tuple(w(q) for q in s)

    if sign_definite(f.target):
        # the only isotropic sheets are the zero-profile ones
        sheets = [[s for s in ss if any(prof(s))] for ss in f.sheets]
        rep = Correspondence(f.source, f.target, "S", sheets, isotropic=f.isotropic, check=False)
        return SCorClass(rep)
    sheets = []
    for ss in f.sheets:
        drop = set(_isotropic_subset(ss, prof, limit))
        sheets.append([s for i, s in enumerate(ss) if i not in drop])
    rep = Correspondence(f.source, f.target, "S", sheets, isotropic=f.isotropic, check=False)
    return SCorClass(rep)


@dataclass(frozen=True)
class ClassVerdict:
    verdict: str
    witness: object = None

    @property
    def equal(self):
        return self.verdict == "equal"

    def __str__(self):
        return self.verdict


class _Atoms:
    """Weight profiles of single S sheets on one component, with sample maps."""

    def __init__(self, comp, target, cap):
        if len(target) ** len(comp) > cap:
            raise EnumerationCapExceeded(
                f"{len(target)}^{len(comp)} sheet maps on one component exceed cap {cap}")
        w = target.weight
        self.by_profile = {}
        for tcomp in target.components():
            for s in itertools.product(tcomp, repeat=len(comp)):
                self.by_profile.setdefault(tuple(w(q) for q in s), s)
        self.profiles = sorted(self.by_profile, key=lambda v: tuple(v))
        self.width = len(comp)
        self._levels = [{tuple([Fraction(0)] * len(comp)): ()}]

    def reach(self, k):
        """Dict sum -> profile list, for sums of exactly k atoms."""
        while len(self._levels) <= k:
            prev = self._levels[-1]
            nxt = {}
            for v, path in prev.items():
                for a in self.profiles:
                    u = tuple(x + y for x, y in zip(v, a))
                    if u not in nxt:
                        nxt[u] = path + (a,)
            self._levels.append(nxt)
        return self._levels[k]

    def solve(self, target_sum, max_size):
        """Sheets (as image tuples) with the given profile sum, at most max_size of them."""
        target_sum = tuple(target_sum)
        for k in range(max_size + 1):
            path = self.reach(k).get(target_sum)
            if path is not None:
                return [self.by_profile[a] for a in path]
        return None


_ATOM_CACHE = {}


def _atoms(comp, target, cap):
    key = (comp, target)
    a = _ATOM_CACHE.get(key)
    if a is None:
        if len(_ATOM_CACHE) > 512:
            _ATOM_CACHE.clear()
        a = _ATOM_CACHE[key] = _Atoms(comp, target, cap)
    return a


def _multiset_diff(a, b):
    rest = list(b)
    out = []
    for s in a:
        if s in rest:
            rest.remove(s)
        else:
            out.append(s)
    return out


def class_equal(a, b, bound=DEFAULT_CLASS_BOUND, limit=DEFAULT_SUBSET_LIMIT,
                cap=DEFAULT_ENUMERATION_CAP):
    """Three-valued test for a + P = b + Q with P, Q isotropic.

    Per component the question reduces to: is there a multiset R of sheets with
    profile(R) = -profile(b - a)?  Then P = (b - a) + R and Q = (a - b) + R.
    The search adds at most ``bound`` sheets.  On sign-definite targets normal
    forms are unique, so a failed search there is a proof of distinctness.
    """
    if isinstance(a, SCorClass):
        a = a.representative
    if isinstance(b, SCorClass):
        b = b.representative
    ra = normalize(a, limit).representative
    rb = normalize(b, limit).representative
    if ra.source != rb.source or ra.target != rb.target:
        raise MismatchedSpaces("class_equal needs matching spaces")
    X = ra.target
    exact = sign_definite(X)
    P_sheets, Q_sheets = [], []
    undecided = False
    for k, comp in enumerate(ra.source.components()):
        if ra.profile(k) != rb.profile(k):
            return ClassVerdict("distinct")
        d_ba = _multiset_diff(rb.sheets[k], ra.sheets[k])
        d_ab = _multiset_diff(ra.sheets[k], rb.sheets[k])
        if not d_ba and not d_ab:
            P_sheets.append([])
            Q_sheets.append([])
            continue
        if exact:
            return ClassVerdict("distinct")
        w = X.weight
        need = [Fraction(0)] * len(comp)
        for s in d_ba:
            for i, q in enumerate(s):
                need[i] -= w(q)
        R = _atoms(comp, X, cap).solve(need, bound)
        if R is None:
            undecided = True
            P_sheets.append([])
            Q_sheets.append([])
            continue
        P_sheets.append(d_ba + R)
        Q_sheets.append(d_ab + R)
    if undecided:
        return ClassVerdict("undecided")
    # the witness is for the inputs: add back what normalization removed
    for k in range(len(P_sheets)):
        P_sheets[k] = list(P_sheets[k]) + _multiset_diff(b.sheets[k], rb.sheets[k])
        Q_sheets[k] = list(Q_sheets[k]) + _multiset_diff(a.sheets[k], ra.sheets[k])
    P = IsotropicCorrespondence(ra.source, X, P_sheets)
    Q = IsotropicCorrespondence(ra.source, X, Q_sheets)
    return ClassVerdict("equal", (P, Q))


def _multisets_with_profile(comp, x, want, order_cap, cap=DEFAULT_ENUMERATION_CAP):
    """Sheet multisets (sorted image tuples) of size <= order_cap on one
    component whose weights add up to ``want`` pointwise.

    On sign-definite targets zero-profile sheets are skipped, so every
    result is already in normal form; elsewhere all sheets are tried.
    """
    if len(x) ** len(comp) > cap:
        raise EnumerationCapExceeded(
            f"{len(x)}^{len(comp)} sheet maps on one component exceed cap {cap}")
    w = x.weight
    want = tuple(want)
    definite = sign_definite(x)
    sgn = 1 if all(v >= 0 for v in (w(q) for q in x.points)) else -1
    sheets = []
    for tcomp in x.components():
        for s in itertools.product(tcomp, repeat=len(comp)):
            prof = tuple(w(q) for q in s)
            if definite:
                if not any(prof):
                    continue
                if any(sgn * p > sgn * t for p, t in zip(prof, want)):
                    continue
            sheets.append((_sheet_key(x, s), s, prof))
    sheets.sort()
    if definite:
        def feasible(rest, remaining):
            if not any(rest):
                return True
            return remaining > 0 and all(sgn * r >= 0 for r in rest)
    else:
        atoms = _atoms(comp, x, cap)

        def feasible(rest, remaining):
            return any(rest in atoms.reach(j) for j in range(remaining + 1))

    def rec(start, chosen, rest):
        if not any(rest):
            yield tuple(sheets[i][1] for i in chosen)
        if len(chosen) == order_cap:
            return
        for i in range(start, len(sheets)):
            prof = sheets[i][2]
            nrest = tuple(a - b for a, b in zip(rest, prof))
            if feasible(nrest, order_cap - len(chosen) - 1):
                yield from rec(i, chosen + [i], nrest)

    if feasible(want, order_cap):
        yield from rec(0, [], want)


def scor_nonempty(y, x, order_cap=4, cap=DEFAULT_ENUMERATION_CAP):
    """Whether every component of y admits sheets of total order <= order_cap
    whose weights add up to the source weights."""
    for comp in y.components():
        want = tuple(y.weight(p) for p in comp)
        if next(_multisets_with_profile(comp, x, want, order_cap, cap), None) is None:
            return False
    return True


def enumerate_component_classes(y, x, k, order_cap, bound=DEFAULT_CLASS_BOUND,
                                cap=DEFAULT_ENUMERATION_CAP, limit=DEFAULT_SUBSET_LIMIT):
    """Normal-form sheet multisets on component k, one per class, order <= order_cap."""
    from .errors import UndecidedClassEquality

    comp = y.components()[k]
    want = tuple(y.weight(p) for p in comp)
    w = x.weight
    found = list(_multisets_with_profile(comp, x, want, order_cap, cap))
    if sign_definite(x):
        return found
    classes = [ms for ms in found
               if not _isotropic_subset(ms, lambda s: tuple(w(q) for q in s), limit)]
    sub = y.restrict(comp, id=f"{y.id}|{k}")
    distinct = []
    for ms in classes:
        cand = Correspondence(sub, x, "S", [ms], check=False)
        dup = False
        for other in distinct:
            v = class_equal(Correspondence(sub, x, "S", [other], check=False), cand, bound, limit, cap)
            if v.verdict == "equal":
                dup = True
                break
            if v.verdict == "undecided":
                raise UndecidedClassEquality(
                    f"cannot decide equality of two classes on component {format_label(comp[0])}")
        if not dup:
            distinct.append(ms)
    return distinct
