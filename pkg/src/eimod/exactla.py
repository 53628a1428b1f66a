"""Exact dense linear algebra over the rationals.

All eliminations use a fixed deterministic pivot rule (leftmost column,
first nonzero row, pivot normalized to 1), so echelon forms, kernel bases
and solutions are canonical: the same input always yields the same output,
bit for bit.  No floating point anywhere.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q  # noqa: optional speedup, exact either way
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

Q0 = Q(0)
Q1 = Q(1)


def _rref(data, rows, cols):
    """Reduce data (list of row lists) in place; return pivot column list."""
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = None
        for i in range(r, rows):
            if data[i][c]:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            data[r], data[pr] = data[pr], data[r]
        row = data[r]
        pv = row[c]
        if pv != Q1:
            inv = Q1 / pv
            data[r] = row = [x * inv for x in row]
        for i in range(rows):
            if i == r:
                continue
            f = data[i][c]
            if f:
                ri = data[i]
                if f == Q1:
                    data[i] = [a - b for a, b in zip(ri, row)]
                else:
                    data[i] = [a - f * b for a, b in zip(ri, row)]
        pivots.append(c)
        r += 1
    return pivots


def _forward_rank(data, rows, cols):
    """Forward elimination only; destroys data, returns the rank."""
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = None
        for i in range(r, rows):
            if data[i][c]:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            data[r], data[pr] = data[pr], data[r]
        row = data[r]
        pv = row[c]
        for i in range(r + 1, rows):
            f = data[i][c]
            if f:
                g = f / pv
                ri = data[i]
                data[i] = [a - g * b for a, b in zip(ri, row)]
        r += 1
    return r


class ExactMatrix:
    """Dense matrix of rationals; supports zero-sized shapes.

    data is a list of row lists whose entries are exact rationals.  The
    constructor trusts its arguments; use from_rows / from_strings to build
    from plain numbers or "p/q" strings.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data):
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [[Q0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        data = [[Q0] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = Q1
        return cls(n, n, data)

    @classmethod
    def from_rows(cls, entries) -> "ExactMatrix":
        """Build from a list of rows of ints / rationals / 'p/q' strings."""
        data = [[Q(x) for x in row] for row in entries]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        if any(len(row) != cols for row in data):
            raise ValueError("ragged rows")
        return cls(rows, cols, data)

    @classmethod
    def from_strings(cls, rows: int, cols: int, entries) -> "ExactMatrix":
        """Build from string entries with an explicit shape (may be empty)."""
        data = [[Q(x) for x in row] for row in entries]
        if len(data) != rows or any(len(row) != cols for row in data):
            raise ValueError("entry grid does not match shape %dx%d" % (rows, cols))
        return cls(rows, cols, data)

    def to_strings(self):
        return [[str(x) for x in row] for row in self.data]

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [row[:] for row in self.data])

    def __getitem__(self, rc):
        r, c = rc
        return self.data[r][c]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return "ExactMatrix(%d, %d, %r)" % (self.rows, self.cols, self.data)

    def is_zero(self) -> bool:
        return all(not x for row in self.data for x in row)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        return ExactMatrix(
            self.rows,
            self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in sub")
        return ExactMatrix(
            self.rows,
            self.cols,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [[-a for a in row] for row in self.data])

    def scale(self, s) -> "ExactMatrix":
        s = Q(s)
        return ExactMatrix(self.rows, self.cols, [[s * a for a in row] for row in self.data])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matmul")
        out = [[Q0] * other.cols for _ in range(self.rows)]
        bdata = other.data
        for i, arow in enumerate(self.data):
            orow = out[i]
            for k, a in enumerate(arow):
                if a:
                    brow = bdata[k]
                    if a == Q1:
                        for j, b in enumerate(brow):
                            if b:
                                orow[j] = orow[j] + b
                    else:
                        for j, b in enumerate(brow):
                            if b:
                                orow[j] = orow[j] + a * b
        return ExactMatrix(self.rows, other.cols, out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols, self.rows, [list(col) for col in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)]
        )

    def column(self, j: int):
        return [row[j] for row in self.data]

    def apply(self, vec):
        """Matrix times a plain list vector; returns a list."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [Q0] * self.rows
        for i, row in enumerate(self.data):
            acc = Q0
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out[i] = acc
        return out

    def rank(self) -> int:
        return _forward_rank([row[:] for row in self.data], self.rows, self.cols)

    def rref(self):
        """Return (reduced row echelon form, pivot column list)."""
        data = [row[:] for row in self.data]
        pivots = _rref(data, self.rows, self.cols)
        return ExactMatrix(self.rows, self.cols, data), pivots

    def kernel_basis(self) -> "ExactMatrix":
        """Canonical kernel basis as matrix columns.

        Each basis vector carries a 1 in "its" free coordinate and 0 in the
        other free coordinates, so membership coordinates can be read off.
        """
        data = [row[:] for row in self.data]
        pivots = _rref(data, self.rows, self.cols)
        pivset = set(pivots)
        free = [c for c in range(self.cols) if c not in pivset]
        out = [[Q0] * len(free) for _ in range(self.cols)]
        for k, fc in enumerate(free):
            out[fc][k] = Q1
            for r, pc in enumerate(pivots):
                v = data[r][fc]
                if v:
                    out[pc][k] = -v
        return ExactMatrix(self.cols, len(free), out)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        sol = solve(self, ExactMatrix.identity(self.rows))
        if sol is None or sol.kernel.cols:
            raise ValueError("matrix is singular")
        return sol.particular


class LinearSolution:
    """All solutions of A X = B: one particular X plus a kernel basis of A."""

    __slots__ = ("particular", "kernel")

    def __init__(self, particular: ExactMatrix, kernel: ExactMatrix):
        self.particular = particular
        self.kernel = kernel


def solve(a: ExactMatrix, b: ExactMatrix):
    """Solve a @ X = b exactly.

    Returns a LinearSolution, or None when the system is inconsistent.
    Inconsistency is an answer, not an error.
    """
    if a.rows != b.rows:
        raise ValueError("row mismatch between matrix and right-hand side")
    aug = hstack([a, b])
    data = [row[:] for row in aug.data]
    pivots = _rref(data, aug.rows, aug.cols)
    if any(p >= a.cols for p in pivots):
        return None
    part = [[Q0] * b.cols for _ in range(a.cols)]
    for r, pc in enumerate(pivots):
        part[pc] = data[r][a.cols:]
    pivset = set(pivots)
    free = [c for c in range(a.cols) if c not in pivset]
    ker = [[Q0] * len(free) for _ in range(a.cols)]
    for k, fc in enumerate(free):
        ker[fc][k] = Q1
        for r, pc in enumerate(pivots):
            v = data[r][fc]
            if v:
                ker[pc][k] = -v
    return LinearSolution(
        ExactMatrix(a.cols, b.cols, part), ExactMatrix(a.cols, len(free), ker)
    )


def kernel_of_rows(rows, ncols: int):
    """Kernel of a constraint system fed row by row.

    rows is an iterable; each row is either a length-ncols list or a sparse
    {column: value} dict (ownership passes here).  Rows are reduced online
    against the pivot rows found so far, so only the echelon survives in
    memory, held sparsely; naturality systems for permutation-like actions
    produce rows with a couple of entries each, and sparsity makes those
    systems cheap.  The result equals kernel_basis of the stacked matrix
    exactly, since the reduced echelon form is unique.

    Returns (kernel matrix, rank, free column list).
    """
    pivots = {}
    for row in rows:
        if isinstance(row, dict):
            r = {c: v for c, v in row.items() if v}
        else:
            r = {c: v for c, v in enumerate(row) if v}
        while r:
            lead = min(r)
            p = pivots.get(lead)
            if p is None:
                v = r.pop(lead)
                if v != Q1:
                    inv = Q1 / v
                    r = {c: x * inv for c, x in r.items()}
                r[lead] = Q1
                pivots[lead] = r
                break
            f = r.pop(lead)
            if f == Q1:
                for c, x in p.items():
                    if c == lead:
                        continue
                    nv = r.get(c, Q0) - x
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
            else:
                for c, x in p.items():
                    if c == lead:
                        continue
                    nv = r.get(c, Q0) - f * x
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
    cols = sorted(pivots)
    for idx in range(len(cols) - 1, 0, -1):
        c = cols[idx]
        prow = pivots[c]
        for c2 in cols[:idx]:
            r2 = pivots[c2]
            f = r2.get(c)
            if f:
                del r2[c]
                for cc, x in prow.items():
                    if cc == c:
                        continue
                    nv = r2.get(cc, Q0) - f * x
                    if nv:
                        r2[cc] = nv
                    else:
                        r2.pop(cc, None)
    pivset = set(cols)
    free = [c for c in range(ncols) if c not in pivset]
    out = [[Q0] * len(free) for _ in range(ncols)]
    pos = {fc: k for k, fc in enumerate(free)}
    for k, fc in enumerate(free):
        out[fc][k] = Q1
    for pc in cols:
        orow = out[pc]
        for c, v in pivots[pc].items():
            if c != pc:
                orow[pos[c]] = -v
    return ExactMatrix(ncols, len(free), out), len(cols), free


def hstack(mats) -> ExactMatrix:
    mats = list(mats)
    if not mats:
        raise ValueError("hstack of nothing")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row mismatch in hstack")
    data = [sum((m.data[i] for m in mats), []) for i in range(rows)]
    return ExactMatrix(rows, sum(m.cols for m in mats), data)


def vstack(mats) -> ExactMatrix:
    mats = list(mats)
    if not mats:
        raise ValueError("vstack of nothing")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column mismatch in vstack")
    data = []
    for m in mats:
        data.extend(row[:] for row in m.data)
    return ExactMatrix(sum(m.rows for m in mats), cols, data)


def block_diag(mats) -> ExactMatrix:
    mats = list(mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[Q0] * cols for _ in range(rows)]
    r0 = 0
    c0 = 0
    for m in mats:
        for i, row in enumerate(m.data):
            orow = out[r0 + i]
            for j, v in enumerate(row):
                if v:
                    orow[c0 + j] = v
        r0 += m.rows
        c0 += m.cols
    return ExactMatrix(rows, cols, out)
