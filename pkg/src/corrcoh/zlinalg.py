"""Exact integer linear algebra: Smith and Hermite forms, homology, lattice membership.

Matrices are immutable tuples of Python ints.  Everything is exact and the
pivot rules are fixed, so transforms are reproducible.
"""

from dataclasses import dataclass, field

from .errors import NotAComplex


class IntMatrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, rows=None, cols=None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("ragged or mis-sized matrix data")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, rows, cols):
        return cls([(0,) * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([tuple(int(i == j) for j in range(n)) for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns, rows):
        columns = [tuple(c) for c in columns]
        return cls([tuple(c[i] for c in columns) for i in range(rows)], rows, len(columns))

    @classmethod
    def from_sparse(cls, rows, cols, entries):
        grid = [[0] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            grid[i][j] += v
        return cls(grid, rows, cols)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]}, {self.rows}x{self.cols})"

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def tolist(self):
        return [list(r) for r in self.data]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return IntMatrix([self.column(j) for j in range(self.cols)], self.cols, self.rows)

    def is_zero(self):
        return all(x == 0 for r in self.data for x in r)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return IntMatrix([tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)],
                         self.rows, self.cols)

    def __sub__(self, other):
        self._check_same(other)
        return IntMatrix([tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)],
                         self.rows, self.cols)

    def __neg__(self):
        return IntMatrix([tuple(-a for a in r) for r in self.data], self.rows, self.cols)

    def scale(self, k):
        return IntMatrix([tuple(k * a for a in r) for r in self.data], self.rows, self.cols)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            for r in self.data:
                acc = [0] * other.cols
                for k, a in enumerate(r):
                    if a:
                        for j, b in enumerate(other.data[k]):
                            if b:
                                acc[j] += a * b
                out.append(tuple(acc))
            return IntMatrix(out, self.rows, other.cols)
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec) if a and b) for r in self.data)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix([r + s for r, s in zip(self.data, other.data)], self.rows, self.cols + other.cols)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return IntMatrix(self.data + other.data, self.rows + other.rows, self.cols)

    def submatrix(self, rows, cols):
        return IntMatrix([tuple(self.data[i][j] for j in cols) for i in rows], len(rows), len(cols))


def block(grid):
    """Assemble a block matrix from a grid of IntMatrix values."""
    rows = []
    for brow in grid:
        height = brow[0].rows
        for i in range(height):
            rows.append(sum((b.data[i] for b in brow), ()))
    ncols = sum(b.cols for b in grid[0]) if grid else 0
    return IntMatrix(rows, len(rows), ncols)


@dataclass(frozen=True)
class SnfResult:
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix = field(repr=False)

    def diagonal(self):
        return [self.S[i, i] for i in range(min(self.S.rows, self.S.cols))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal() if d)


def _smallest(a, cells):
    best = None
    for i, j in cells:
        v = a[i][j]
        if v and (best is None or abs(v) < best[0]):
            best = (abs(v), i, j)
    return best


def snf(a):
    """Smith normal form with transforms: U * a * V = S."""
    m, n = a.rows, a.cols
    A = [list(r) for r in a.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def rowswap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def colswap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def rowadd(i, j, q):
        # row_i += q * row_j
        A[i] = [x + q * y for x, y in zip(A[i], A[j])]
        U[i] = [x + q * y for x, y in zip(U[i], U[j])]

    def coladd(i, j, q):
        # col_i += q * col_j
        for r in A:
            r[i] += q * r[j]
        for r in V:
            r[i] += q * r[j]
        Vi[j] = [x - q * y for x, y in zip(Vi[j], Vi[i])]

    t = 0
    while t < min(m, n):
        best = _smallest(A, ((i, j) for i in range(t, m) for j in range(t, n)))
        if best is None:
            break
        _, i, j = best
        if i != t:
            rowswap(i, t)
        if j != t:
            colswap(j, t)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    rowadd(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    coladd(j, t, -(A[t][j] // p))
            cells = [(i, t) for i in range(t, m)] + [(t, j) for j in range(t + 1, n)]
            best = _smallest(A, cells)
            if best[1:] != (t, t) or any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                _, i, j = best
                if i != t:
                    rowswap(i, t)
                if j != t:
                    colswap(j, t)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is not None:
                rowadd(t, bad[0], 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SnfResult(IntMatrix(U, m, m), IntMatrix(A, m, n), IntMatrix(V, n, n), IntMatrix(Vi, n, n))


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def column_hnf(a):
    """Column-style Hermite form: a * V = H with H in column echelon form.

    Returns (H, V, pivots) where pivots[k] is the pivot row of column k;
    columns past len(pivots) are zero.  Pivots are positive and entries left
    of a pivot are reduced into [0, pivot).
    """
    m, n = a.rows, a.cols
    H = [list(r) for r in a.data]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def combine(k, j, s, t, u, v):
        # (col_k, col_j) <- (s col_k + t col_j, u col_k + v col_j)
        for M in (H, V):
            for r in M:
                x, y = r[k], r[j]
                r[k], r[j] = s * x + t * y, u * x + v * y

    def coladd(i, j, q):
        for M in (H, V):
            for r in M:
                r[i] += q * r[j]

    pivots = []
    k = 0
    for i in range(m):
        if k >= n:
            break
        for j in range(k + 1, n):
            b = H[i][j]
            if b:
                a0 = H[i][k]
                g, s, t = _xgcd(a0, b)
                combine(k, j, s, t, -b // g, a0 // g)
        p = H[i][k]
        if p == 0:
            continue
        if p < 0:
            for M in (H, V):
                for r in M:
                    r[k] = -r[k]
            p = -p
        for j in range(k):
            q = H[i][j] // p
            if q:
                coladd(j, k, -q)
        pivots.append(i)
        k += 1
    return IntMatrix(H, m, n), IntMatrix(V, n, n), pivots


def _sparse_columns(a):
    cols = [dict() for _ in range(a.cols)]
    for i, row in enumerate(a.data):
        for j, v in enumerate(row):
            if v:
                cols[j][i] = v
    return cols


def _axpy(dst, src, q):
    # dst += q * src on sparse dicts
    for i, v in src.items():
        w = dst.get(i, 0) + q * v
        if w:
            dst[i] = w
        else:
            dst.pop(i, None)


def sparse_lattice_member(cols, nrows, b):
    """lattice_member on sparse columns (dicts row -> value)."""
    H = [dict(c) for c in cols]
    V = [{j: 1} for j in range(len(cols))]
    n = len(H)
    pivots = []
    k = 0
    for i in range(nrows):
        if k >= n:
            break
        active = [j for j in range(k, n) if H[j].get(i)]
        if not active:
            continue
        while len(active) > 1:
            p = min(active, key=lambda j: (abs(H[j][i]), j))
            for j in active:
                if j != p:
                    q = H[j][i] // H[p][i]
                    _axpy(H[j], H[p], -q)
                    _axpy(V[j], V[p], -q)
            active = [j for j in active if H[j].get(i)]
        p = active[0]
        H[p], H[k] = H[k], H[p]
        V[p], V[k] = V[k], V[p]
        if H[k][i] < 0:
            H[k] = {r: -v for r, v in H[k].items()}
            V[k] = {r: -v for r, v in V[k].items()}
        pivots.append(i)
        k += 1
    resid = {i: v for i, v in enumerate(b) if v}
    y = []
    pivot_of = {r: c for c, r in enumerate(pivots)}
    for i in range(nrows):
        v = resid.get(i, 0)
        if not v:
            continue
        c = pivot_of.get(i)
        if c is None:
            return None
        q, r = divmod(v, H[c][i])
        if r:
            return None
        _axpy(resid, H[c], -q)
        y.append((c, q))
    x = [0] * len(cols)
    for c, q in y:
        for j, v in V[c].items():
            x[j] += q * v
    return tuple(x)


def lattice_member(a, b):
    """Integer x with a x = b, or None when b is outside the column lattice."""
    b = tuple(int(v) for v in b)
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match the matrix")
    return sparse_lattice_member(_sparse_columns(a), a.rows, b)


def lattice_member_dense(a, b):
    """Same as lattice_member, through the dense column Hermite form."""
    b = tuple(int(v) for v in b)
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match the matrix")
    H, V, pivots = column_hnf(a)
    y = [0] * a.cols
    k = 0
    for i in range(a.rows):
        resid = b[i] - sum(H[i, j] * y[j] for j in range(k))
        if k < len(pivots) and pivots[k] == i:
            q, r = divmod(resid, H[i, k])
            if r:
                return None
            y[k] = q
            k += 1
        elif resid:
            return None
    return V @ y


@dataclass(frozen=True)
class AbelianGroupPresentation:
    free_rank: int
    torsion: tuple = ()

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def as_dict(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def rank(a):
    return snf(a).rank


def kernel_basis(a):
    """Columns spanning ker(a) over Z (a saturated basis)."""
    res = snf(a)
    r = res.rank
    return [res.V.column(j) for j in range(r, a.cols)]


def homology_at(d_out, d_in):
    """ker(d_out) / im(d_in) as a canonical presentation."""
    if d_out.cols != d_in.rows:
        raise ValueError(f"differentials are not composable: {d_out.shape} then {d_in.shape}")
    if not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out * d_in is not zero")
    res = snf(d_out)
    r = res.rank
    n = d_out.cols
    W = res.V_inv @ d_in
    Q = W.submatrix(range(r, n), range(W.cols))
    q = snf(Q)
    diag = q.diagonal()
    torsion = tuple(d for d in diag if d > 1)
    return AbelianGroupPresentation((n - r) - q.rank, torsion)
