"""Group bases, cubical complexes C_n = C(Y x M^n, X), cohomology and homotopy checks.

Degree-n chains live on ``cube_space(Y, M, n)`` whose points are pairs
``(y, t)`` with ``t`` an n-tuple of points of M.  Matrices act on column
vectors: the differential out of degree n has ``rank C_{n-1}`` rows and
``rank C_n`` columns.
"""

import itertools
from dataclasses import dataclass, field

from . import corr as K
from .errors import (EnumerationCapExceeded, HypothesisNotSatisfied,
                     InvariantViolated, MismatchedSpaces, UndecidedClassEquality)
from .model import (DEFAULT_ENUMERATION_CAP, AdmissibleMap, find_monoid_structure,
                    find_square_swap, iter_assignments, power, product)
from .zlinalg import IntMatrix, homology_at, kernel_basis, lattice_member

_CUBES = {}


def cube_space(y, m, n):
    key = (y, m, n)
    s = _CUBES.get(key)
    if s is None:
        if len(_CUBES) > 256:
            _CUBES.clear()
        s = _CUBES[key] = product(y, power(m, n))
    return s


def face_inclusion(y, m, n, i, eps):
    """Y x M^{n-1} -> Y x M^n inserting the marked point p_eps at slot i."""
    src, tgt = cube_space(y, m, n - 1), cube_space(y, m, n)
    p = m.marked(eps)
    return AdmissibleMap(src, tgt, [(a, t[:i] + (p,) + t[i:]) for a, t in src.points], check=False)


def to_degree0(f, m):
    """Move a correspondence on Y to the degree-0 space Y x M^0."""
    c0 = cube_space(f.source, m, 0)
    return K.pullback(AdmissibleMap(c0, f.source, [a for a, _ in c0.points], check=False), f)


def from_degree0(f, y):
    c0 = f.source
    return K.pullback(AdmissibleMap(y, c0, [(a, ()) for a in y.points], check=False), f)


# ---------------------------------------------------------------- bases

class GroupBasis:
    """Ordered basis of JC(Y, X) or of SC_b(Y, X) within the order cap.

    J keys are pairs (component index, sheet); S keys are tuples holding one
    normal-form sheet multiset per component.
    """

    def __init__(self, flavor, source, target, order_cap, elements, class_bound=3,
                 cap=DEFAULT_ENUMERATION_CAP, per_component=None):
        self.flavor = flavor
        self.source = source
        self.target = target
        self.order_cap = order_cap
        self.elements = tuple(elements)
        self.class_bound = class_bound
        self.cap = cap
        self.per_component = per_component
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._cache = {}
        if len(self._index) != len(self.elements):
            raise InvariantViolated("duplicate basis keys")

    def __len__(self):
        return len(self.elements)

    @property
    def rank(self):
        return len(self.elements)

    def __repr__(self):
        return f"GroupBasis[{self.flavor}]({self.source.id}->{self.target.id}, rank={self.rank})"

    def element(self, i):
        key = self.elements[i]
        ncomp = len(self.source.components())
        if self.flavor == "J":
            k, sheet = key
            sheets = [()] * ncomp
            sheets[k] = (sheet,)
            return K.Correspondence(self.source, self.target, "J", sheets, check=False)
        return K.Correspondence(self.source, self.target, "S", list(key), check=False)

    def _check(self, f):
        if f.source != self.source or f.target != self.target or f.flavor != self.flavor:
            raise MismatchedSpaces(f"{f!r} does not belong to {self!r}")

    def coords(self, f):
        """Coordinate vector of a correspondence, formal sum, or (coef, corr) list."""
        vec = [0] * self.rank
        for c, g in _terms(f):
            for i, v in self._coords_one(g).items():
                vec[i] += c * v
        return tuple(vec)

    def _coords_one(self, f):
        if f in self._cache:
            return self._cache[f]
        self._check(f)
        out = {}
        if self.flavor == "J":
            for k, ss in enumerate(f.sheets):
                for s in ss:
                    i = self._index.get((k, s))
                    if i is None:
                        raise EnumerationCapExceeded("sheet missing from the J basis")
                    out[i] = out.get(i, 0) + 1
        else:
            if f.isotropic and K.classify_profile(f) != "both":
                raise InvariantViolated("isotropic correspondences have no SC coordinates")
            key = self._class_key(f)
            out[self._index[key]] = 1
        if len(self._cache) < 200_000:
            self._cache[f] = out
        return out

    def _class_key(self, f):
        rep = K.normalize(f).representative
        key = rep.sheets
        if key in self._index:
            return key
        if K.sign_definite(self.target):
            raise EnumerationCapExceeded(
                f"class of order {rep.max_order()} lies outside the basis (order cap {self.order_cap})")
        # per-component fallback through the class-equality search
        out = []
        for k, comp in enumerate(self.source.components()):
            sub = self.source.restrict(comp, id=f"{self.source.id}|{k}")
            mine = K.Correspondence(sub, self.target, "S", [rep.sheets[k]], check=False)
            hit = None
            for cand in self.per_component[k]:
                if cand == rep.sheets[k]:
                    hit = cand
                    break
                v = K.class_equal(K.Correspondence(sub, self.target, "S", [cand], check=False),
                                  mine, self.class_bound, cap=self.cap)
                if v.verdict == "equal":
                    hit = cand
                    break
                if v.verdict == "undecided":
                    raise UndecidedClassEquality("coordinate lookup hit an undecided class pair")
            if hit is None:
                raise EnumerationCapExceeded("class lies outside the basis order cap")
            out.append(hit)
        return tuple(out)

    def formal(self, f):
        return FormalSum.from_vector(self, self.coords(f))


def build_basis(flavor, y, x, order_cap=4, class_bound=3, cap=DEFAULT_ENUMERATION_CAP):
    """Basis of JC(y, x), or of SC_b(y, x) with component orders <= order_cap."""
    comps = y.components()
    if flavor == "J":
        elements = []
        for k, comp in enumerate(comps):
            for imgs in iter_assignments(y, x, "J", domain=comp, cap=cap):
                elements.append((k, imgs))
        return GroupBasis("J", y, x, order_cap, elements, class_bound, cap)
    if flavor != "S":
        raise ValueError(f"unknown flavor {flavor!r}")
    per = [K.enumerate_component_classes(y, x, k, order_cap, class_bound, cap)
           for k in range(len(comps))]
    elements = list(itertools.product(*per)) if comps else [()]
    return GroupBasis("S", y, x, order_cap, elements, class_bound, cap, per_component=per)


class FormalSum:
    """Integer combination of basis elements; zero coefficients are dropped."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis, coeffs=None):
        self.basis = basis
        self.coeffs = {i: c for i, c in (coeffs or {}).items() if c}

    @classmethod
    def from_vector(cls, basis, vec):
        return cls(basis, {i: int(c) for i, c in enumerate(vec) if c})

    @classmethod
    def of(cls, basis, f, coefficient=1):
        return cls.from_vector(basis, [coefficient * v for v in basis.coords(f)])

    def vector(self):
        v = [0] * self.basis.rank
        for i, c in self.coeffs.items():
            v[i] = c
        return tuple(v)

    def terms(self):
        return [(c, self.basis.element(i)) for i, c in sorted(self.coeffs.items())]

    def _same(self, other):
        if other.basis is not self.basis and (other.basis.elements != self.basis.elements
                                              or other.basis.source != self.basis.source):
            raise MismatchedSpaces("formal sums over different bases")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return FormalSum(self.basis, out)

    def __neg__(self):
        return FormalSum(self.basis, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return FormalSum(self.basis, {i: k * c for i, c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.vector() == other.vector()

    def __hash__(self):
        return hash(self.vector())

    def __repr__(self):
        return f"FormalSum({self.coeffs})"


def _terms(f):
    if isinstance(f, FormalSum):
        return f.terms()
    if isinstance(f, K.Correspondence):
        return [(1, f)]
    return list(f)


def linear_map(src_basis, tgt_basis, func):
    """Matrix of the linear extension of ``func`` (basis element -> terms)."""
    entries = {}
    for j in range(src_basis.rank):
        for c, g in _terms(func(src_basis.element(j))):
            for i, v in tgt_basis._coords_one(g).items():
                entries[(i, j)] = entries.get((i, j), 0) + c * v
    return IntMatrix.from_sparse(tgt_basis.rank, src_basis.rank, entries)


# ---------------------------------------------------------------- complexes

class CubicalComplex:
    """C_n = C(Y x M^n, X) for n = 0..degree_cap with the cubical differential."""

    def __init__(self, flavor, y, x, m, degree_cap=2, order_cap=4, class_bound=3,
                 cap=DEFAULT_ENUMERATION_CAP, sign_bug=False):
        if degree_cap < 1:
            raise ValueError("degree cap must be at least 1")
        self.flavor = flavor
        self.Y, self.X, self.M = y, x, m
        self.degree_cap = degree_cap
        self.order_cap = order_cap
        self.class_bound = class_bound
        self.cap = cap
        self.sign_bug = sign_bug
        self.spaces = [cube_space(y, m, n) for n in range(degree_cap + 1)]
        self.bases = [build_basis(flavor, s, x, order_cap, class_bound, cap) for s in self.spaces]
        self._faces = {}
        self._diffs = {}

    def __repr__(self):
        return (f"CubicalComplex[{self.flavor}]({self.Y.id}, {self.X.id}, M={self.M.id}, "
                f"ranks={[b.rank for b in self.bases]})")

    def ranks(self):
        return [b.rank for b in self.bases]

    def face_map(self, n, i, eps):
        if not (1 <= n <= self.degree_cap and 0 <= i < n and eps in (0, 1)):
            raise ValueError(f"no face ({n}, {i}, {eps})")
        key = (n, i, eps)
        if key not in self._faces:
            inc = face_inclusion(self.Y, self.M, n, i, eps)
            self._faces[key] = linear_map(self.bases[n], self.bases[n - 1],
                                          lambda s: K.pullback(inc, s))
        return self._faces[key]

    def face_sign(self, i, eps):
        if self.sign_bug and i == 0 and eps == 1:
            return 1
        return (-1) ** (eps + i)

    def differential(self, n):
        """d_n: C_n -> C_{n-1}; d_0 is the zero map to the zero group."""
        if n in self._diffs:
            return self._diffs[n]
        if n == 0:
            d = IntMatrix.zeros(0, self.bases[0].rank)
        else:
            d = IntMatrix.zeros(self.bases[n - 1].rank, self.bases[n].rank)
            for eps in (0, 1):
                for i in range(n):
                    d = d + self.face_map(n, i, eps).scale(self.face_sign(i, eps))
        self._diffs[n] = d
        return d

    def d_squared_zero(self):
        """(n, holds) for each composable pair d_{n-1} d_n with n <= degree_cap."""
        return [(n, (self.differential(n - 1) @ self.differential(n)).is_zero())
                for n in range(2, self.degree_cap + 1)]

    def cohomology(self, n):
        if not 0 <= n <= self.degree_cap - 1:
            raise ValueError(f"cohomology is available for degrees 0..{self.degree_cap - 1}")
        return homology_at(self.differential(n), self.differential(n + 1))


def cross_identity(f, m, n):
    """F x id_{M^n}: Z x M^n -> Y x M^n for F in C(Z, Y)."""
    Z, Y = f.source, f.target
    src, tgt = cube_space(Z, m, n), cube_space(Y, m, n)
    zcomps = Z.components()
    sheets = []
    for comp in src.components():
        k = Z.component_of(comp[0][0])
        zc = zcomps[k]
        out = []
        for s in f.sheets[k]:
            img = dict(zip(zc, s))
            out.append(tuple((img[z], t) for z, t in comp))
        sheets.append(out)
    try:
        return K._make(src, tgt, f.flavor, sheets, f.isotropic)
    except InvariantViolated:
        raise InvariantViolated(
            "F x id is not an S correspondence: needs order(F) = 1 or zero weights on M^n")


def _complex_like(c, y=None, x=None):
    return CubicalComplex(c.flavor, y or c.Y, x or c.X, c.M, c.degree_cap, c.order_cap,
                          c.class_bound, c.cap)


def induced_pullback(f, c_y, c_z):
    """Matrices of F^*: C_n(Y, X) -> C_n(Z, X), sigma -> sigma o (F x id)."""
    mats = []
    for n in range(c_y.degree_cap + 1):
        lifted = [(coef, cross_identity(g, c_y.M, n)) for coef, g in _terms(f)]

        def func(s, lifted=lifted):
            return [(coef, K.compose(s, g)) for coef, g in lifted]
        mats.append(linear_map(c_y.bases[n], c_z.bases[n], func))
    return mats


def induced_pushforward(g, c_src, c_tgt):
    """Matrices of G_*: C_n(Z, Y) -> C_n(Z, X), sigma -> G o sigma."""
    terms = _terms(g)
    mats = []
    for n in range(c_src.degree_cap + 1):
        def func(s):
            return [(coef, K.compose(h, s)) for coef, h in terms]
        mats.append(linear_map(c_src.bases[n], c_tgt.bases[n], func))
    return mats


def commutes_with_d(mats, c_src, c_tgt):
    return all(c_tgt.differential(n) @ mats[n] == mats[n - 1] @ c_src.differential(n)
               for n in range(1, min(len(mats), c_src.degree_cap + 1)))


def equal_on_cohomology(a, b, c_src, c_tgt, n):
    """Whether chain maps a, b (degree-n matrices) agree on H_n."""
    diff = a - b
    d_in = c_tgt.differential(n + 1)
    for z in kernel_basis(c_src.differential(n)):
        if lattice_member(d_in, diff @ z) is None:
            return False
    return True


# ---------------------------------------------------------------- homotopy

@dataclass
class HomotopyVerdict:
    verdict: str
    witness: object = None
    caps: dict = field(default_factory=dict)

    def __str__(self):
        return self.verdict


def homotopic(f, g, m, order_cap=4, class_bound=3, cap=DEFAULT_ENUMERATION_CAP):
    """Decide whether some H in C(Y x M, X) restricts to f at p0 and g at p1."""
    tf, tg = _terms(f), _terms(g)
    y, x = tf[0][1].source if tf else tg[0][1].source, tf[0][1].target if tf else tg[0][1].target
    flavor = (tf or tg)[0][1].flavor
    caps = {"order": order_cap, "class_bound": class_bound}
    try:
        b0 = build_basis(flavor, cube_space(y, m, 0), x, order_cap, class_bound, cap)
        b1 = build_basis(flavor, cube_space(y, m, 1), x, order_cap, class_bound, cap)
        vf = b0.coords([(c, to_degree0(h, m)) for c, h in tf])
        vg = b0.coords([(c, to_degree0(h, m)) for c, h in tg])
        faces = []
        for eps in (0, 1):
            inc = face_inclusion(y, m, 1, 0, eps)
            faces.append(linear_map(b1, b0, lambda s, inc=inc: K.pullback(inc, s)))
    except UndecidedClassEquality:
        return HomotopyVerdict("undecided", caps=caps)
    sol = lattice_member(faces[0].vstack(faces[1]), vf + vg)
    if sol is None:
        return HomotopyVerdict("no-within-cap", caps=caps)
    return HomotopyVerdict("yes", FormalSum.from_vector(b1, sol), caps)


def witness_projection(f, m):
    """F o pi, the J self-homotopy of F."""
    y = f.source
    ym = product(y, m.space)
    pi = AdmissibleMap(ym, y, [a for a, _ in ym.points], check=False)
    return K.pullback(pi, f)


def witness_wedge(f, i):
    """F v I, the S self-homotopy of F for I in SCor(M, X)."""
    return K.wedge(f, i)


def witness_symmetric(h, y, m, gamma):
    """H o (id x gamma) for a swap gamma of M exchanging p0 and p1."""
    out = []
    for c, s in _terms(h):
        ym = s.source
        # labels are (y, q) on product(Y, M) and (y, (q,)) on the cube space
        imgs = [(a, (gamma(q[0]),) if isinstance(q, tuple) else gamma(q)) for a, q in ym.points]
        out.append((c, K.pullback(AdmissibleMap(ym, ym, imgs, check=False), s)))
    return out


def witness_transitive(h1, h2, f3_self, y, m, gamma):
    """H1 - H2 o (id x gamma) + (self-homotopy of F3)."""
    out = list(_terms(h1))
    out += [(-c, s) for c, s in witness_symmetric(h2, y, m, gamma)]
    out += list(_terms(f3_self))
    return out


# ---------------------------------------------------------------- invariance

def homotopy_lift(h, m, n, y):
    """K-operator sheet map: H x id_{M^n} read on Y x M^{n+1} (H-slot first)."""
    z = h.target
    src = cube_space(y, m, n + 1)
    tgt = cube_space(z, m, n)
    ym = h.source
    ymc = ym.components()
    sheets = []
    for comp in src.components():
        a0, t0 = comp[0]
        k = ym.component_of((a0, t0[0]))
        pos = {p: i for i, p in enumerate(ymc[k])}
        out = []
        for s in h.sheets[k]:
            out.append(tuple((s[pos[(a, t[0])]], t[1:]) for a, t in comp))
        sheets.append(out)
    try:
        return K._make(src, tgt, h.flavor, sheets, h.isotropic)
    except InvariantViolated:
        raise InvariantViolated("H x id is not an S correspondence: needs order(H) = 1 or zero weights on M")


def pushforward_lift(s, z, m, n):
    """sigma x id_M read on Z x M^{n+1} with the extra M slot first."""
    zmn = s.source
    y = s.target
    src = cube_space(z, m, n + 1)
    tgt = product(y, m.space)
    zc = zmn.components()
    sheets = []
    for comp in src.components():
        a0, t0 = comp[0]
        k = zmn.component_of((a0, t0[1:]))
        pos = {p: i for i, p in enumerate(zc[k])}
        out = []
        for sh in s.sheets[k]:
            out.append(tuple((sh[pos[(a, t[1:])]], t[0]) for a, t in comp))
        sheets.append(out)
    try:
        return K._make(src, tgt, s.flavor, sheets, s.isotropic)
    except InvariantViolated:
        raise InvariantViolated("sigma x id is not an S correspondence: needs order 1 or zero weights on M")


@dataclass
class InvarianceReport:
    signs: dict
    identity_holds: bool
    cohomology_agrees: dict
    kind: str

    @property
    def ok(self):
        return self.identity_holds and all(self.cohomology_agrees.values())


def _sign_table(dk, diff, kd):
    """Which sign closes dK = diff +/- Kd."""
    plus = dk == diff + kd
    minus = dk == diff - kd
    if plus and minus:
        return "both"
    if minus:
        return "-"
    if plus:
        return "+"
    return None


def homotopy_invariance_check(h, c_z, c_y, f0=None, f1=None):
    """Pullback form: H in C(Y x M, Z) with H o i_eps = F_eps.

    c_z is the complex over (Z, X), c_y over (Y, X).  Builds K_n: C_n(Z) ->
    C_{n+1}(Y) and checks d K = F0^* - F1^* +/- K d in every degree.
    """
    m, y = c_y.M, c_y.Y
    if f0 is None:
        f0 = restrict_at_space(h, y, m, 0)
    if f1 is None:
        f1 = restrict_at_space(h, y, m, 1)
    A = induced_pullback(f0, c_z, c_y)
    B = induced_pullback(f1, c_z, c_y)
    Ks = []
    for n in range(c_y.degree_cap):
        lifted = [(coef, homotopy_lift(g, m, n, y)) for coef, g in _terms(h)]
        Ks.append(linear_map(c_z.bases[n], c_y.bases[n + 1],
                             lambda s, lifted=lifted: [(coef, K.compose(s, g)) for coef, g in lifted]))
    return _finish(A, B, Ks, c_z, c_y, "pullback")


def homotopy_invariance_push(h, c_src, c_tgt, g0=None, g1=None):
    """Pushforward form: H in C(Y x M, X) with H o j-restrictions G_eps.

    c_src is over (Z, Y), c_tgt over (Z, X); K sigma = H o (sigma x id_M).
    """
    m = c_src.M
    y = c_src.X
    if g0 is None:
        g0 = restrict_at_space(h, y, m, 0)
    if g1 is None:
        g1 = restrict_at_space(h, y, m, 1)
    A = induced_pushforward(g0, c_src, c_tgt)
    B = induced_pushforward(g1, c_src, c_tgt)
    Ks = []
    for n in range(c_src.degree_cap):
        def func(s, n=n):
            lift = pushforward_lift(s, c_src.Y, m, n)
            return [(coef, K.compose(g, lift)) for coef, g in _terms(h)]
        Ks.append(linear_map(c_src.bases[n], c_tgt.bases[n + 1], func))
    return _finish(A, B, Ks, c_src, c_tgt, "pushforward")


def _finish(A, B, Ks, c_src, c_tgt, kind):
    signs = {}
    ok = True
    for n in range(c_src.degree_cap):
        dk = c_tgt.differential(n + 1) @ Ks[n]
        diff = A[n] - B[n]
        if n == 0:
            kd = IntMatrix.zeros(diff.rows, diff.cols)
        else:
            kd = Ks[n - 1] @ c_src.differential(n)
        s = _sign_table(dk, diff, kd)
        signs[n] = s
        ok = ok and s is not None
    agrees = {n: equal_on_cohomology(A[n], B[n], c_src, c_tgt, n)
              for n in range(c_src.degree_cap)}
    return InvarianceReport(signs, ok, agrees, kind)


def restrict_at_space(h, y, m, eps):
    """H o i_eps for H on Y x M given Y explicitly."""
    out = []
    for c, s in _terms(h):
        # accept both Y x M = product(Y, M) and the degree-1 cube space labels
        p = m.marked(eps)
        if (y.points[0], p) not in s.source:
            p = (p,)
        inc = AdmissibleMap(y, s.source, [(a, p) for a in y.points], check=False)
        out.append((c, K.pullback(inc, s)))
    return out


# ---------------------------------------------------------------- cancellation

@dataclass
class CancellationReport:
    flavor: str
    checks: dict
    hypotheses: dict

    @property
    def ok(self):
        return all(self.checks.values())


def _graph(f, flavor):
    return K.graph(f, flavor)


def cancellation_check(y, x, m, flavor="J", degree_cap=2, order_cap=4, class_bound=3,
                       cap=DEFAULT_ENUMERATION_CAP):
    """Numerically rerun the cancellation theorems on cohomology generators.

    J: (pr_X)_* and (j0)_* are mutually inverse between H(Y, X x M) and
    H(Y, X); pr_Y^* and i0^* between H(Y, X) and H(Y x M, X).
    S: (j0)_* with inverse (id_X v J)_*, i0^* with inverse (id_Y v I)^*.
    """
    mm = m.space
    xm = product(x, mm)
    ym = product(y, mm)
    hyps = {}
    if flavor == "J":
        gamma = find_monoid_structure(m, cap)
        hyps["monoid structure"] = gamma is not None
        if gamma is None:
            raise HypothesisNotSatisfied("no J map gamma: MxM -> M with gamma(p0,.)=p0, gamma(p1,.)=id")
        back_x = _graph(AdmissibleMap(xm, x, [a for a, _ in xm.points], "J"), "J")
        back_y = _graph(AdmissibleMap(ym, y, [a for a, _ in ym.points], "J"), "J")
    elif flavor == "S":
        jx = next(iter(_scor_witnesses(mm, x, order_cap, cap)), None)
        iy = next(iter(_scor_witnesses(mm, y, order_cap, cap)), None)
        hyps["SCor(M, X) nonempty"] = jx is not None
        hyps["SCor(M, Y) nonempty"] = iy is not None
        if jx is not None and iy is not None:
            hyps["gamma_1 swap"] = find_square_swap(m, cap) is not None
        missing = [k for k, v in hyps.items() if not v]
        if missing:
            raise HypothesisNotSatisfied("missing: " + ", ".join(missing))
        try:
            back_x = K.wedge(K.identity(x, "S"), jx)
            back_y = K.wedge(K.identity(y, "S"), iy)
        except InvariantViolated as exc:
            raise HypothesisNotSatisfied(str(exc))
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    j0 = _graph(AdmissibleMap(x, xm, [(a, m.p0) for a in x.points], flavor), flavor)
    i0 = _graph(AdmissibleMap(y, ym, [(a, m.p0) for a in y.points], flavor), flavor)
    mk = lambda a, b: CubicalComplex(flavor, a, b, m, degree_cap, order_cap, class_bound, cap)
    c_yx, c_yxm, c_ymx = mk(y, x), mk(y, xm), mk(ym, x)
    bx, by = ("pr_X", "pr_Y") if flavor == "J" else ("id_X v J", "id_Y v I")
    checks = {}
    try:
        P = induced_pushforward(back_x, c_yxm, c_yx)
        J0 = induced_pushforward(j0, c_yx, c_yxm)
        Pu = induced_pullback(back_y, c_yx, c_ymx)
        I0 = induced_pullback(i0, c_ymx, c_yx)
    except InvariantViolated as exc:
        raise HypothesisNotSatisfied(str(exc))
    for n in range(degree_cap):
        ix = IntMatrix.identity(c_yx.bases[n].rank)
        ixm = IntMatrix.identity(c_yxm.bases[n].rank)
        iym = IntMatrix.identity(c_ymx.bases[n].rank)
        checks[f"({bx})_* (j0)_* = id on H{n}"] = equal_on_cohomology(P[n] @ J0[n], ix, c_yx, c_yx, n)
        checks[f"(j0)_* ({bx})_* = id on H{n}"] = equal_on_cohomology(J0[n] @ P[n], ixm, c_yxm, c_yxm, n)
        checks[f"i0^* ({by})^* = id on H{n}"] = equal_on_cohomology(I0[n] @ Pu[n], ix, c_yx, c_yx, n)
        checks[f"({by})^* i0^* = id on H{n}"] = equal_on_cohomology(Pu[n] @ I0[n], iym, c_ymx, c_ymx, n)
    if flavor == "J":
        checks["pr_X o j0 = id_X exactly"] = K.compose(back_x, j0) == K.identity(x, "J")
        checks["pr_Y o i0 = id_Y exactly"] = K.compose(back_y, i0) == K.identity(y, "J")
    else:
        checks["(id_X v J) o j0 = id_X as class"] = K.class_equal(
            K.compose(back_x, j0), K.identity(x, "S"), class_bound).equal
        checks["(id_Y v I) o i0 = id_Y as class"] = K.class_equal(
            K.compose(back_y, i0), K.identity(y, "S"), class_bound).equal
    return CancellationReport(flavor, checks, hyps)


def _scor_witnesses(src, tgt, order_cap, cap):
    """Genuine S correspondences src -> tgt, one per component choice (first found)."""
    per = []
    for comp in src.components():
        want = tuple(src.weight(p) for p in comp)
        ms = next(K._multisets_with_profile(comp, tgt, want, order_cap, cap), None)
        if ms is None:
            return []
        per.append(ms)
    return [K.Correspondence(src, tgt, "S", per)]
