"""Exact sparse linear algebra over the integers and the rationals.

Matrices are sparse maps (row, col) -> scalar with arbitrary precision
(Python ints over Z, fractions.Fraction over Q).  The module supplies
Smith normal form with unimodular transforms, invariant factors,
rational rank/kernel/image computations, cohomology of graded
complexes, and maps induced on cohomology by chain maps.
"""

from __future__ import annotations

from fractions import Fraction


class RingError(ValueError):
    pass


def _coerce(ring, value):
    if ring == "Z":
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise RingError("non-integer entry in a matrix over Z: %r" % (value,))
            return int(value)
        return int(value)
    if ring == "Q":
        if isinstance(value, Fraction):
            return value
        return Fraction(value)
    raise RingError("ring must be 'Z' or 'Q', got %r" % (ring,))


class ExactMatrix:
    """Immutable sparse matrix over Z or Q.  No zero entries are stored."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, rows, cols, entries=None):
        if ring not in ("Z", "Q"):
            raise RingError("ring must be 'Z' or 'Q'")
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError("entry (%d,%d) out of bounds for %dx%d" % (r, c, rows, cols))
            v = _coerce(ring, v)
            if v != 0:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, ring, dense):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {}
        for r, row in enumerate(dense):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                if v != 0:
                    entries[(r, c)] = v
        return cls(ring, rows, cols, entries)

    def to_rows(self):
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            dense[r][c] = v
        return dense

    def __getitem__(self, rc):
        return self.entries.get(rc, 0)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return "ExactMatrix(%s, %dx%d, %d nonzero)" % (self.ring, self.rows, self.cols, len(self.entries))

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return ExactMatrix(self.ring, self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __add__(self, other):
        self._check_same_shape(other)
        entries = dict(self.entries)
        for rc, v in other.entries.items():
            w = entries.get(rc, 0) + v
            if w:
                entries[rc] = w
            else:
                entries.pop(rc, None)
        return ExactMatrix(self.ring, self.rows, self.cols, entries)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        if k == 0:
            return ExactMatrix.zeros(self.ring, self.rows, self.cols)
        return ExactMatrix(self.ring, self.rows, self.cols, {rc: k * v for rc, v in self.entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch: %dx%d @ %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        if self.ring != other.ring:
            raise RingError("mixed-ring product")
        # group left entries by column to hit only matching right rows
        by_col = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        out = {}
        for (k, c), w in other.entries.items():
            for r, v in by_col.get(k, ()):
                rc = (r, c)
                acc = out.get(rc, 0) + v * w
                if acc:
                    out[rc] = acc
                else:
                    out.pop(rc, None)
        return ExactMatrix(self.ring, self.rows, other.cols, out)

    def column(self, c):
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self):
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def to_ring(self, ring):
        return ExactMatrix(ring, self.rows, self.cols, dict(self.entries))

    def apply_to(self, vec):
        """Multiply by a sparse column vector {row: value}."""
        out = {}
        cols = {}
        for (r, c), v in self.entries.items():
            cols.setdefault(c, []).append((r, v))
        for c, x in vec.items():
            for r, v in cols.get(c, ()):
                acc = out.get(r, 0) + v * x
                if acc:
                    out[r] = acc
                else:
                    out.pop(r, None)
        return out

    def _check_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols or self.ring != other.ring:
            raise ValueError("shape or ring mismatch")


# ---------------------------------------------------------------------------
# mutable sparse workspace used by the elimination routines


class _Sparse:
    """Row-major mutable sparse integer matrix with a column index.

    Also tracks which rows contain unit (+-1) entries, bucketed by current
    row length, so that a minimal-absolute-value pivot can be found without
    scanning the whole matrix.
    """

    def __init__(self, matrix=None):
        self.row = {}
        self.colindex = {}
        self.unit_cols = {}  # r -> set of cols where |value| == 1
        self.unit_rows_by_len = {}  # row length -> set of rows with a unit entry
        if matrix is not None:
            for (r, c), v in matrix.entries.items():
                self.row.setdefault(r, {})[c] = v
                self.colindex.setdefault(c, set()).add(r)
            for r, row in self.row.items():
                units = {c for c, v in row.items() if v == 1 or v == -1}
                if units:
                    self.unit_cols[r] = units
                    self.unit_rows_by_len.setdefault(len(row), set()).add(r)

    def _unbucket(self, r):
        row = self.row.get(r)
        if row is not None and r in self.unit_cols:
            bucket = self.unit_rows_by_len.get(len(row))
            if bucket is not None:
                bucket.discard(r)
                if not bucket:
                    del self.unit_rows_by_len[len(row)]

    def _rebucket(self, r):
        row = self.row.get(r)
        if row and self.unit_cols.get(r):
            self.unit_rows_by_len.setdefault(len(row), set()).add(r)
        elif r in self.unit_cols and not self.unit_cols[r]:
            del self.unit_cols[r]

    def set(self, r, c, v):
        self._unbucket(r)
        if v:
            self.row.setdefault(r, {})[c] = v
            self.colindex.setdefault(c, set()).add(r)
            if v == 1 or v == -1:
                self.unit_cols.setdefault(r, set()).add(c)
            else:
                units = self.unit_cols.get(r)
                if units is not None:
                    units.discard(c)
        else:
            if r in self.row and c in self.row[r]:
                del self.row[r][c]
                if not self.row[r]:
                    del self.row[r]
                self.colindex[c].discard(r)
                if not self.colindex[c]:
                    del self.colindex[c]
                units = self.unit_cols.get(r)
                if units is not None:
                    units.discard(c)
        self._rebucket(r)

    def get(self, r, c):
        return self.row.get(r, {}).get(c, 0)

    def negate_row(self, r):
        row = self.row.get(r)
        if row:
            for c in row:
                row[c] = -row[c]

    def addmul_row(self, target, source, k):
        """row[target] += k * row[source]"""
        if k == 0:
            return
        self._unbucket(target)
        src = self.row.get(source, {})
        tgt = self.row.setdefault(target, {})
        units = self.unit_cols.setdefault(target, set())
        for c, v in src.items():
            w = tgt.get(c, 0) + k * v
            if w:
                tgt[c] = w
                self.colindex.setdefault(c, set()).add(target)
                if w == 1 or w == -1:
                    units.add(c)
                else:
                    units.discard(c)
            else:
                if c in tgt:
                    del tgt[c]
                    self.colindex[c].discard(target)
                    if not self.colindex[c]:
                        del self.colindex[c]
                units.discard(c)
        if not tgt:
            self.row.pop(target, None)
        self._rebucket(target)

    def addmul_col(self, target, source, k):
        """col[target] += k * col[source]"""
        if k == 0:
            return
        for r in list(self.colindex.get(source, ())):
            v = self.row[r][source]
            w = self.row[r].get(target, 0) + k * v
            self.set(r, target, w)

    def is_empty(self):
        return not self.row

    def pick_pivot(self):
        """A minimal-absolute-value nonzero entry.

        When unit entries exist, any of them is minimal; we take one from the
        shortest row holding a unit (cheap fill control), breaking ties by row
        and column id for determinism.  Without units we fall back to a full
        scan ranked by (absolute value, Markowitz cost, row, col).
        """
        if self.unit_rows_by_len:
            length = min(self.unit_rows_by_len)
            r = min(self.unit_rows_by_len[length])
            c = min(self.unit_cols[r], key=lambda cc: (len(self.colindex[cc]), cc))
            return r, c
        best = None
        best_key = None
        for r, row in self.row.items():
            rlen = len(row)
            for c, v in row.items():
                key = (abs(v), (rlen - 1) * (len(self.colindex[c]) - 1), r, c)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (r, c)
        return best


def invariant_factors(matrix):
    """Invariant factors d1 | d2 | ... of an integer matrix (no transforms).

    The number of factors is the rank; factors are positive and form a
    divisibility chain.
    """
    if matrix.ring != "Z":
        raise RingError("invariant factors require a matrix over Z")
    ws = _Sparse(matrix)
    factors = []
    while not ws.is_empty():
        r, c = ws.pick_pivot()
        while True:
            if ws.get(r, c) < 0:
                ws.negate_row(r)
            p = ws.get(r, c)
            dirty = False
            for rr in list(ws.colindex.get(c, ())):
                if rr == r:
                    continue
                q = ws.row[rr][c] // p
                ws.addmul_row(rr, r, -q)
                if ws.get(rr, c):
                    r = rr  # remainder is smaller than |p|: cascade there
                    dirty = True
                    break
            if dirty:
                continue
            for cc in list(ws.row.get(r, {})):
                if cc == c:
                    continue
                q = ws.row[r][cc] // p
                ws.addmul_col(cc, c, -q)
                if ws.get(r, cc):
                    c = cc
                    dirty = True
                    break
            if dirty:
                continue
            p = ws.get(r, c)
            if p > 1:
                offender = None
                for rr, row in ws.row.items():
                    if rr == r:
                        continue
                    for v in row.values():
                        if v % p:
                            offender = rr
                            break
                    if offender is not None:
                        break
                if offender is not None:
                    # fold the offending row into the pivot row; gcd cascade resumes
                    ws.addmul_row(r, offender, 1)
                    continue
            break
        factors.append(abs(ws.get(r, c)))
        for cc in list(ws.row.get(r, {})):
            ws.set(r, cc, 0)
        for rr in list(ws.colindex.get(c, ())):
            ws.set(rr, c, 0)
    factors.sort()
    return factors


def smith_normal_form(matrix):
    """Smith normal form over Z with unimodular transforms.

    Returns (S, U, V) with U @ matrix @ V == S, S diagonal with
    d1 | d2 | ..., and det U, det V = +-1.
    """
    if matrix.ring != "Z":
        raise RingError("Smith normal form requires a matrix over Z")
    m, n = matrix.rows, matrix.cols
    a = matrix.to_rows()
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_add(i, k, q):  # row i += q * row k
        ai, ak = a[i], a[k]
        for j in range(n):
            ai[j] += q * ak[j]
        ui, uk = u[i], u[k]
        for j in range(m):
            ui[j] += q * uk[j]

    def col_add(j, k, q):  # col j += q * col k
        for i in range(m):
            a[i][j] += q * a[i][k]
        for i in range(n):
            v[i][j] += q * v[i][k]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def col_swap(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    for s in range(min(m, n)):
        # minimal-absolute-value pivot in the trailing block
        pivot = None
        best = None
        for i in range(s, m):
            for j in range(s, n):
                x = a[i][j]
                if x:
                    key = (abs(x), i, j)
                    if best is None or key < best:
                        best = key
                        pivot = (i, j)
        if pivot is None:
            break
        row_swap(s, pivot[0])
        col_swap(s, pivot[1])
        while True:
            if a[s][s] < 0:
                row_negate(s)
            p = a[s][s]
            dirty = False
            for i in range(s + 1, m):
                if a[i][s]:
                    row_add(i, s, -(a[i][s] // p))
                    if a[i][s]:
                        row_swap(s, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(s + 1, n):
                if a[s][j]:
                    col_add(j, s, -(a[s][j] // p))
                    if a[s][j]:
                        col_swap(s, j)
                        dirty = True
                        break
            if dirty:
                continue
            p = a[s][s]
            if p > 1:
                offender = None
                for i in range(s + 1, m):
                    if any(a[i][j] % p for j in range(s + 1, n)):
                        offender = i
                        break
                if offender is not None:
                    row_add(s, offender, 1)
                    continue
            break

    S = ExactMatrix("Z", m, n, {(i, i): a[i][i] for i in range(min(m, n)) if a[i][i]})
    U = ExactMatrix.from_rows("Z", u)
    V = ExactMatrix.from_rows("Z", v)
    return S, U, V


def integer_determinant(matrix):
    """Determinant of a square integer matrix (Bareiss fraction-free elimination)."""
    if matrix.rows != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    if n == 0:
        return 1
    a = [row[:] for row in matrix.to_rows()]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# rational elimination


class ColumnSpace:
    """Online echelonized basis for a growing family of sparse Q-columns.

    Basis columns are reduced against the earlier ones at their pivot rows,
    so coefficient extraction is a triangular pass in insertion order.
    """

    def __init__(self):
        self.pivots = []  # row ids, one per basis column
        self.basis = []  # sparse columns {row: Fraction}

    def __len__(self):
        return len(self.basis)

    def reduce(self, vec):
        """Return (residual, coeffs) with vec == residual + sum coeffs[i]*basis[i]."""
        residual = {r: Fraction(v) for r, v in vec.items() if v}
        coeffs = [Fraction(0)] * len(self.basis)
        for i, (p, col) in enumerate(zip(self.pivots, self.basis)):
            x = residual.get(p)
            if x:
                q = x / col[p]
                coeffs[i] = q
                for r, v in col.items():
                    w = residual.get(r, 0) - q * v
                    if w:
                        residual[r] = w
                    else:
                        residual.pop(r, None)
        return residual, coeffs

    def insert(self, vec):
        """Add vec to the span; returns the reduced residual, or None."""
        residual, _ = self.reduce(vec)
        if not residual:
            return None
        self.pivots.append(min(residual))
        self.basis.append(residual)
        return residual

    def contains(self, vec):
        residual, _ = self.reduce(vec)
        return not residual


def q_column_space(matrix):
    """Echelonized basis of the column space of a matrix (over Q)."""
    space = ColumnSpace()
    for col in matrix.columns():
        space.insert(col)
    return space


def q_rank(matrix):
    return len(q_column_space(matrix))


def q_kernel_basis(matrix):
    """Basis of the kernel over Q, one sparse column {index: Fraction} per vector."""
    cols = matrix.cols
    rows = {}
    colindex = {}
    for (r, c), v in matrix.entries.items():
        rows.setdefault(r, {})[c] = Fraction(v)
        colindex.setdefault(c, set()).add(r)
    remaining = set(rows)
    pivots = []  # (row dict, pivot col) in elimination order
    for c in range(cols):
        live = [r for r in colindex.get(c, ()) if r in remaining]
        if not live:
            continue
        r0 = min(live, key=lambda r: (len(rows[r]), r))
        prow = rows[r0]
        pval = prow[c]
        remaining.discard(r0)
        for r in live:
            if r == r0 or r not in remaining:
                continue
            target = rows[r]
            q = target[c] / pval
            for cc, v in prow.items():
                w = target.get(cc, 0) - q * v
                if w:
                    target[cc] = w
                    colindex.setdefault(cc, set()).add(r)
                else:
                    target.pop(cc, None)
                    colindex[cc].discard(r)
            if not target:
                remaining.discard(r)
        pivots.append((prow, c))
    pivot_cols = {c for _, c in pivots}
    kernel = []
    for f in range(cols):
        if f in pivot_cols:
            continue
        x = {f: Fraction(1)}
        for prow, c in reversed(pivots):
            acc = Fraction(0)
            for cc, v in prow.items():
                if cc != c and cc in x:
                    acc += v * x[cc]
            if acc:
                x[c] = -acc / prow[c]
        kernel.append(x)
    return kernel


# ---------------------------------------------------------------------------
# graded complexes and cohomology


class ComplexError(ValueError):
    pass


class GradedComplex:
    """A cochain complex: ranks per degree plus differentials d_k : C^k -> C^{k+1}.

    d_{k+1} o d_k = 0 is asserted at construction.  Basis labels are opaque
    and carried along so larger constructions can address generators by
    label rather than index.
    """

    def __init__(self, ring, component_rank, differentials=None, basis_labels=None, check=True):
        if ring not in ("Z", "Q"):
            raise RingError("ring must be 'Z' or 'Q'")
        self.ring = ring
        self.component_rank = {d: r for d, r in component_rank.items() if r}
        self.differentials = {}
        self.basis_labels = {}
        for d, labels in (basis_labels or {}).items():
            if len(labels) != self.rank(d):
                raise ComplexError("degree %d: %d labels for rank %d" % (d, len(labels), self.rank(d)))
            self.basis_labels[d] = list(labels)
        for d in self.component_rank:
            if d not in self.basis_labels:
                self.basis_labels[d] = [(d, i) for i in range(self.rank(d))]
        for d, mat in (differentials or {}).items():
            if mat.ring != ring:
                raise RingError("differential in degree %d has ring %s" % (d, mat.ring))
            if mat.rows != self.rank(d + 1) or mat.cols != self.rank(d):
                raise ComplexError(
                    "differential in degree %d has shape %dx%d, expected %dx%d"
                    % (d, mat.rows, mat.cols, self.rank(d + 1), self.rank(d))
                )
            if not mat.is_zero():
                self.differentials[d] = mat
        if check:
            for d, mat in self.differentials.items():
                nxt = self.differentials.get(d + 1)
                if nxt is not None and not (nxt @ mat).is_zero():
                    raise ComplexError("d^2 != 0 between degrees %d and %d" % (d, d + 2))

    def rank(self, degree):
        return self.component_rank.get(degree, 0)

    def degrees(self):
        return sorted(self.component_rank)

    def differential(self, degree):
        mat = self.differentials.get(degree)
        if mat is None:
            return ExactMatrix.zeros(self.ring, self.rank(degree + 1), self.rank(degree))
        return mat

    def total_rank(self):
        return sum(self.component_rank.values())

    def euler_characteristic(self):
        return sum((-1) ** d * r for d, r in self.component_rank.items())

    def to_ring(self, ring):
        return GradedComplex(
            ring,
            dict(self.component_rank),
            {d: m.to_ring(ring) for d, m in self.differentials.items()},
            {d: list(l) for d, l in self.basis_labels.items()},
            check=False,
        )


class CohomologySummary:
    """Free rank and torsion invariant factors per degree."""

    def __init__(self, ring, data):
        self.ring = ring
        self.data = {}
        for d, (free, torsion) in data.items():
            torsion = tuple(torsion)
            for a, b in zip(torsion, torsion[1:]):
                if b % a:
                    raise ValueError("torsion %s violates the divisibility chain" % (torsion,))
            if any(t <= 1 for t in torsion):
                raise ValueError("torsion factors must exceed 1")
            if free or torsion:
                self.data[d] = (free, torsion)

    def free_rank(self, degree):
        return self.data.get(degree, (0, ()))[0]

    def torsion(self, degree):
        return self.data.get(degree, (0, ()))[1]

    def degrees(self):
        return sorted(self.data)

    def total_free_rank(self):
        return sum(f for f, _ in self.data.values())

    def is_torsion_free(self):
        return all(not t for _, t in self.data.values())

    def euler_characteristic(self):
        return sum((-1) ** d * f for d, (f, _) in self.data.items())

    def __eq__(self, other):
        return isinstance(other, CohomologySummary) and self.data == other.data

    def __repr__(self):
        parts = []
        for d in self.degrees():
            free, torsion = self.data[d]
            desc = []
            if free:
                desc.append("%s^%d" % (self.ring, free) if free > 1 else self.ring)
            desc.extend("%s/%d" % (self.ring, t) for t in torsion)
            parts.append("H^%d=%s" % (d, "+".join(desc)))
        return "CohomologySummary(%s)" % ("; ".join(parts) or "0")


def cohomology(complex_):
    """Cohomology of a graded complex: free rank per degree, plus torsion over Z."""
    ranks = {}
    summary = {}
    for d in complex_.degrees():
        mat = complex_.differentials.get(d)
        if mat is None:
            ranks[d] = (0, [])
        elif complex_.ring == "Z":
            factors = invariant_factors(mat)
            ranks[d] = (len(factors), [f for f in factors if f > 1])
        else:
            ranks[d] = (q_rank(mat), [])
    for d in complex_.degrees():
        rk_d, _ = ranks.get(d, (0, []))
        rk_prev, torsion_prev = ranks.get(d - 1, (0, []))
        free = complex_.rank(d) - rk_d - rk_prev
        if free < 0:
            raise ComplexError("negative free rank in degree %d" % d)
        summary[d] = (free, torsion_prev)
    return CohomologySummary(complex_.ring, summary)


class ChainMapError(ValueError):
    pass


def check_chain_map(f, source, target):
    """Validate that the per-degree matrices f commute with the differentials."""
    for d in set(source.degrees()) | set(f):
        fd = f.get(d, ExactMatrix.zeros(target.ring, target.rank(d), source.rank(d)))
        if fd.rows != target.rank(d) or fd.cols != source.rank(d):
            raise ChainMapError("component in degree %d has the wrong shape" % d)
        fn = f.get(d + 1, ExactMatrix.zeros(target.ring, target.rank(d + 1), source.rank(d + 1)))
        if (fn @ source.differential(d)) != (target.differential(d) @ fd):
            raise ChainMapError("does not commute with the differentials in degree %d" % d)


def _cohomology_basis(complex_, degree):
    """(image_space, representatives): echelon basis of im d_{k-1} and reduced
    kernel representatives extending it to a basis of ker d_k.

    The representatives are reduced against the image and against each other,
    so that expressing a cocycle in the combined triangular family yields its
    class coordinates directly.
    """
    image = q_column_space(complex_.differential(degree - 1).to_ring("Q"))
    reps = []
    span = ColumnSpace()
    for col in image.basis:
        span.insert(col)
    for vec in q_kernel_basis(complex_.differential(degree).to_ring("Q")):
        residual = span.insert(vec)
        if residual is not None:
            reps.append(residual)
    return image, reps


def induced_map_on_cohomology(f, source, target):
    """Matrix of the induced map H^k(source) -> H^k(target) for a chain map f.

    Both complexes must be over Q.  Returns {degree: ExactMatrix}.
    """
    if source.ring != "Q" or target.ring != "Q":
        raise RingError("induced maps on cohomology are computed over Q")
    check_chain_map(f, source, target)
    result = {}
    degrees = sorted(set(source.degrees()) | set(target.degrees()))
    for d in degrees:
        _, src_reps = _cohomology_basis(source, d)
        tgt_image, tgt_reps = _cohomology_basis(target, d)
        # triangular expression space: image columns first, then representatives
        expr = ColumnSpace()
        for col in tgt_image.basis:
            expr.insert(col)
        n_im = len(expr)
        for col in tgt_reps:
            expr.insert(col)
        fd = f.get(d, ExactMatrix.zeros("Q", target.rank(d), source.rank(d)))
        entries = {}
        for j, rep in enumerate(src_reps):
            img = fd.apply_to(rep)
            residual, coeffs = expr.reduce(img)
            if residual:
                raise ChainMapError("image of a cocycle is not a cocycle in degree %d" % d)
            for i, cls in enumerate(coeffs[n_im:]):
                if cls:
                    entries[(i, j)] = cls
        result[d] = ExactMatrix("Q", len(tgt_reps), len(src_reps), entries)
    return result


def trace_on_cohomology(f, source, target=None):
    """Per-degree trace of the induced map on cohomology (endomorphisms)."""
    if target is None:
        target = source
    mats = induced_map_on_cohomology(f, source, target)
    traces = {}
    for d, m in mats.items():
        if m.rows != m.cols:
            raise ChainMapError("trace of a non-square induced map in degree %d" % d)
        traces[d] = sum(m[(i, i)] for i in range(m.rows))
    return traces


class EndomorphismTracer:
    """Per-degree traces on cohomology for many chain endomorphisms of one
    complex, without building cohomology bases.

    Uses tr(g | H^k) = tr(g | C^k) - tr(g | im d_k) - tr(g | im d_{k-1}),
    the image traces being computed in the ambient degree k+1 resp. k.
    The image column spaces are echelonized once at construction.
    """

    def __init__(self, complex_):
        if complex_.ring != "Q":
            raise RingError("cohomology traces are computed over Q")
        self.complex = complex_
        self.spaces = {
            d: q_column_space(mat) for d, mat in complex_.differentials.items()
        }

    def traces(self, endo):
        """endo: degree -> ExactMatrix.  The chain-map property is assumed."""
        image_traces = {}
        for d, space in self.spaces.items():
            g = endo.get(d + 1)
            tr = Fraction(0)
            for j, col in enumerate(space.basis):
                moved = g.apply_to(col) if g is not None else col
                residual, coeffs = space.reduce(moved)
                if residual:
                    raise ChainMapError(
                        "endomorphism does not preserve the image of d_%d" % d
                    )
                tr += coeffs[j]
            image_traces[d] = tr
        out = {}
        for d in self.complex.degrees():
            g = endo.get(d)
            diag = Fraction(0)
            if g is not None:
                diag = sum(v for (i, j), v in g.entries.items() if i == j)
            out[d] = diag - image_traces.get(d, 0) - image_traces.get(d - 1, 0)
        return out


def endomorphism_cohomology_traces(complex_, endo):
    """One-shot convenience wrapper around EndomorphismTracer."""
    return EndomorphismTracer(complex_).traces(endo)


def q_solve(matrix, rhs):
    """A particular rational solution x of  matrix @ x = rhs, or None.

    rhs is a sparse column {row: value}.  Deterministic: row echelon with
    sparsest-row pivoting, free variables set to zero.
    """
    cols = matrix.cols
    rows = {}
    colindex = {}
    for (r, c), v in matrix.entries.items():
        rows.setdefault(r, {})[c] = Fraction(v)
        colindex.setdefault(c, set()).add(r)
    b = {r: Fraction(v) for r, v in rhs.items() if v}
    remaining = set(rows)
    pivots = []
    for c in range(cols):
        live = [r for r in colindex.get(c, ()) if r in remaining]
        if not live:
            continue
        r0 = min(live, key=lambda r: (len(rows[r]), r))
        prow = rows[r0]
        pval = prow[c]
        remaining.discard(r0)
        for r in live:
            if r == r0 or r not in remaining:
                continue
            target = rows[r]
            q = target[c] / pval
            for cc, v in prow.items():
                w = target.get(cc, 0) - q * v
                if w:
                    target[cc] = w
                    colindex.setdefault(cc, set()).add(r)
                else:
                    target.pop(cc, None)
                    colindex[cc].discard(r)
            if b.get(r0):
                w = b.get(r, 0) - q * b[r0]
                if w:
                    b[r] = w
                else:
                    b.pop(r, None)
            if not target:
                remaining.discard(r)
        pivots.append((r0, c))
    x = {}
    for r, c in reversed(pivots):
        prow = rows[r]
        acc = b.get(r, Fraction(0))
        for cc, v in prow.items():
            if cc != c and cc in x:
                acc -= v * x[cc]
        if acc:
            x[c] = acc / prow[c]
    # verify (also catches inconsistent systems)
    check = matrix.apply_to(x)
    for r, v in rhs.items():
        if check.get(r, 0) != v:
            return None
        check.pop(r, None)
    if any(check.values()):
        return None
    return x
