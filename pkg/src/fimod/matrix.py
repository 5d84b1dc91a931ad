"""Sparse exact matrices and elimination over Q, F_p and Z.

Storage is a dict mapping (row, col) to a nonzero scalar of the matrix's
ring. Rank is computed by plain Gaussian elimination over F_p and by
fraction-free integer elimination (content-gcd reduced, min-|pivot|
preference) over Q and Z; rational inputs are row-scaled to integers first,
which does not change rank. Field-side solving, kernels and span membership
run on Fraction / mod-p arithmetic directly.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .rings import GF, PrimeField, RationalField, RingSpec


class Matrix:
    """Immutable-by-convention sparse matrix over a RingSpec."""

    __slots__ = ("ring", "nrows", "ncols", "entries")

    def __init__(self, ring: RingSpec, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimensions")
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        ent = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise IndexError(f"entry ({i},{j}) outside {nrows}x{ncols}")
                v = ring.coerce(v)
                if not ring.is_zero(v):
                    ent[(i, j)] = v
        self.entries = ent

    @classmethod
    def zero(cls, ring: RingSpec, nrows: int, ncols: int) -> "Matrix":
        return cls(ring, nrows, ncols)

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "Matrix":
        return cls(ring, n, n, {(i, i): ring.one for i in range(n)})

    @classmethod
    def from_rows(cls, ring: RingSpec, rows) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                ent[(i, j)] = v
        return cls(ring, nrows, ncols, ent)

    @classmethod
    def from_columns(cls, ring: RingSpec, nrows: int, columns) -> "Matrix":
        """Build from an iterable of columns, each a dict {row: value}."""
        ent = {}
        ncols = 0
        for j, col in enumerate(columns):
            ncols = j + 1
            for i, v in col.items():
                ent[(i, j)] = v
        return cls(ring, nrows, ncols, ent)

    def get(self, i: int, j: int):
        return self.entries.get((i, j), self.ring.zero)

    def is_zero(self) -> bool:
        return not self.entries

    def density(self) -> float:
        cells = self.nrows * self.ncols
        return len(self.entries) / cells if cells else 0.0

    def column(self, j: int) -> dict:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def rows(self) -> list[dict]:
        rows = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def to_dense_rows(self) -> list[list]:
        zero = self.ring.zero
        rows = [[zero] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.ncols, self.nrows,
                      {(j, i): v for (i, j), v in self.entries.items()})

    def submatrix_columns(self, cols: list[int]) -> "Matrix":
        pos = {c: k for k, c in enumerate(cols)}
        ent = {}
        for (i, j), v in self.entries.items():
            k = pos.get(j)
            if k is not None:
                ent[(i, k)] = v
        return Matrix(self.ring, self.nrows, len(cols), ent)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.nrows, self.ncols,
                     frozenset(self.entries.items())))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        r = self.ring
        ent = dict(self.entries)
        for k, v in other.entries.items():
            s = r.add(ent.get(k, r.zero), v)
            if r.is_zero(s):
                ent.pop(k, None)
            else:
                ent[k] = s
        return Matrix(r, self.nrows, self.ncols, ent)

    def __neg__(self) -> "Matrix":
        r = self.ring
        return Matrix(r, self.nrows, self.ncols,
                      {k: r.neg(v) for k, v in self.entries.items()})

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        r = self.ring
        c = r.coerce(c)
        if r.is_zero(c):
            return Matrix.zero(r, self.nrows, self.ncols)
        return Matrix(r, self.nrows, self.ncols,
                      {k: r.mul(c, v) for k, v in self.entries.items()})

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise ValueError("ring mismatch in matrix product")
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        r = self.ring
        self_cols = self.columns()
        ent = {}
        for j, col in enumerate(other.columns()):
            out: dict[int, object] = {}
            for k, b in col.items():
                for i, a in self_cols[k].items():
                    s = r.add(out.get(i, r.zero), r.mul(a, b))
                    if r.is_zero(s):
                        del out[i]
                    else:
                        out[i] = s
            for i, v in out.items():
                ent[(i, j)] = v
        return Matrix(r, self.nrows, other.ncols, ent)

    def apply_to_column(self, col: dict[int, object]) -> dict[int, object]:
        """Image of a sparse column vector under this matrix."""
        r = self.ring
        cols = None
        out: dict[int, object] = {}
        for k, b in col.items():
            if cols is None:
                cols = self.columns()
            for i, a in cols[k].items():
                s = r.add(out.get(i, r.zero), r.mul(a, b))
                if r.is_zero(s):
                    del out[i]
                else:
                    out[i] = s
        return out

    def _check_same_shape(self, other: "Matrix"):
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def rank(self) -> int:
        if isinstance(self.ring, PrimeField):
            return _rank_mod_p(self, self.ring.p)
        return _rank_fraction_free(self)

    def __repr__(self):
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols}, nnz={len(self.entries)})"


def hstack(mats: list[Matrix]) -> Matrix:
    """Concatenate matrices left to right (equal row counts)."""
    if not mats:
        raise ValueError("hstack of nothing")
    ring, nrows = mats[0].ring, mats[0].nrows
    ent = {}
    off = 0
    for m in mats:
        if m.ring != ring or m.nrows != nrows:
            raise ValueError("hstack mismatch")
        for (i, j), v in m.entries.items():
            ent[(i, j + off)] = v
        off += m.ncols
    return Matrix(ring, nrows, off, ent)


def vstack(mats: list[Matrix]) -> Matrix:
    if not mats:
        raise ValueError("vstack of nothing")
    ring, ncols = mats[0].ring, mats[0].ncols
    ent = {}
    off = 0
    for m in mats:
        if m.ring != ring or m.ncols != ncols:
            raise ValueError("vstack mismatch")
        for (i, j), v in m.entries.items():
            ent[(i + off, j)] = v
        off += m.nrows
    return Matrix(ring, off, ncols, ent)


def block_diagonal(ring: RingSpec, mats: list[Matrix]) -> Matrix:
    ent = {}
    roff = coff = 0
    for m in mats:
        for (i, j), v in m.entries.items():
            ent[(i + roff, j + coff)] = v
        roff += m.nrows
        coff += m.ncols
    return Matrix(ring, roff, coff, ent)


# ---------------------------------------------------------------------------
# rank over F_p: plain Gaussian elimination, dict rows below 50% fill and
# dense list rows above it.

def _rank_mod_p(m: Matrix, p: int) -> int:
    if not m.entries:
        return 0
    if m.density() > 0.5:
        return _rank_mod_p_dense(m.to_dense_rows(), p)
    rows: dict[int, dict[int, int]] = {}
    col_rows: dict[int, set[int]] = {}
    for (i, j), v in m.entries.items():
        rows.setdefault(i, {})[j] = v % p
        col_rows.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        rid = min(rows, key=lambda r: len(rows[r]))
        row = rows.pop(rid)
        if not row:
            continue
        pc = min(row, key=lambda c: len(col_rows.get(c, ())))
        pv = row[pc]
        inv = pow(pv, -1, p)
        rank += 1
        for c in row:
            col_rows.get(c, set()).discard(rid)
        targets = [t for t in col_rows.get(pc, ()) if t in rows]
        for t in targets:
            trow = rows[t]
            f = (trow[pc] * inv) % p
            for c, v in row.items():
                nv = (trow.get(c, 0) - f * v) % p
                if nv:
                    if c not in trow:
                        col_rows.setdefault(c, set()).add(t)
                    trow[c] = nv
                elif c in trow:
                    del trow[c]
                    col_rows.get(c, set()).discard(t)
            if not trow:
                del rows[t]
    return rank


def _rank_mod_p_dense(rows: list[list[int]], p: int) -> int:
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        prow = rows[r]
        for i in range(r + 1, nrows):
            f = (rows[i][c] * inv) % p
            if f:
                ri = rows[i]
                for j in range(c, ncols):
                    ri[j] = (ri[j] - f * prow[j]) % p
        r += 1
        rank += 1
        if r == nrows:
            break
    return rank


# ---------------------------------------------------------------------------
# rank over Z and Q: fraction-free integer elimination. Each row is kept
# primitive (divided by its content gcd) after every update, and pivots are
# chosen unit-first, shortest column next, which keeps growth negligible on
# the permutation-like matrices slices produce.

def _integer_rows(m: Matrix) -> dict[int, dict[int, int]]:
    rows: dict[int, dict[int, int]] = {}
    if isinstance(m.ring, RationalField):
        raw: dict[int, dict[int, Fraction]] = {}
        for (i, j), v in m.entries.items():
            raw.setdefault(i, {})[j] = v
        for i, row in raw.items():
            den = 1
            for v in row.values():
                den = den * v.denominator // gcd(den, v.denominator)
            rows[i] = {j: int(v * den) for j, v in row.items()}
    else:
        for (i, j), v in m.entries.items():
            rows.setdefault(i, {})[j] = int(v)
    return rows


def _reduce_content(row: dict[int, int]) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    if g > 1:
        for j in row:
            row[j] //= g
    return max(g, 1)


def _rank_fraction_free(m: Matrix, record_divisors: list | None = None) -> int:
    rows = _integer_rows(m)
    col_rows: dict[int, set[int]] = {}
    for i, row in rows.items():
        g = _reduce_content(row)
        if record_divisors is not None and g > 1:
            record_divisors.append(g)
        for j in row:
            col_rows.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        rid = min(rows, key=lambda r: len(rows[r]))
        row = rows.pop(rid)
        if not row:
            continue
        pc = min(row, key=lambda c: (abs(row[c]) != 1,
                                     len(col_rows.get(c, ())), abs(row[c])))
        pv = row[pc]
        if record_divisors is not None:
            record_divisors.append(pv)
        rank += 1
        for c in row:
            col_rows.get(c, set()).discard(rid)
        targets = [t for t in col_rows.get(pc, ()) if t in rows]
        for t in targets:
            trow = rows[t]
            tv = trow[pc]
            g = gcd(pv, tv)
            a, b = pv // g, tv // g
            if a in (1, -1):
                # pv | tv: ordinary integer row operation, no rescale
                f = a * b
                for c, v in row.items():
                    nv = trow.get(c, 0) - f * v
                    if nv:
                        if c not in trow:
                            col_rows.setdefault(c, set()).add(t)
                        trow[c] = nv
                    elif c in trow:
                        del trow[c]
                        col_rows.get(c, set()).discard(t)
            else:
                # cross-multiply: a*trow - b*row, rescaling the whole row
                for c in trow:
                    trow[c] *= a
                for c, v in row.items():
                    nv = trow.get(c, 0) - b * v
                    if nv:
                        if c not in trow:
                            col_rows.setdefault(c, set()).add(t)
                        trow[c] = nv
                    elif c in trow:
                        del trow[c]
                        col_rows.get(c, set()).discard(t)
            g = _reduce_content(trow)
            if record_divisors is not None and g > 1:
                record_divisors.append(g)
            if not trow:
                del rows[t]
    return rank


def rank_with_pivots(m: Matrix) -> tuple[int, list[int]]:
    """Rank over the fraction field plus every integer divided by during
    elimination: pivots and row-content gcds.

    Only meaningful over Q and Z. A prime dividing none of the recorded
    values admits the identical elimination mod p, so the reduction is
    guaranteed to have the same rank; the advisory modular cross-check
    skips the other primes.
    """
    if isinstance(m.ring, PrimeField):
        raise ValueError("pivot recording applies to Q and Z only")
    divisors: list[int] = []
    r = _rank_fraction_free(m, divisors)
    return r, divisors


def modular_rank_crosscheck(m: Matrix, primes: list[int]) -> dict:
    """Advisory modular cross-check of the fraction-free rank.

    Reduces an integer/rational matrix mod each given prime that divides
    no elimination pivot and compares ranks. Returns a report dict; never
    raises on disagreement (the caller decides what to flag).
    """
    r, pivots = rank_with_pivots(m)
    rows = _integer_rows(m)
    report = {"rank": r, "primes": {}, "agree": True}
    for p in primes:
        if any(pv % p == 0 for pv in pivots):
            report["primes"][p] = "skipped (divides a pivot)"
            continue
        ent = {}
        for i, row in rows.items():
            for j, v in row.items():
                if v % p:
                    ent[(i, j)] = v % p
        mp = Matrix(GF(p), m.nrows, m.ncols, ent)
        rp = mp.rank()
        report["primes"][p] = rp
        if rp != r:
            report["agree"] = False
    return report


# ---------------------------------------------------------------------------
# field-side echelon machinery: kernels, span membership, reducers.

def field_rref(m: Matrix) -> tuple[list[dict[int, object]], list[int]]:
    """Reduced row-echelon form of a matrix over a field.

    Returns (rows, pivot_cols): sparse row dicts with coefficient 1 at
    their pivot column and zero at every other pivot column, sorted by
    pivot column.
    """
    ring = m.ring
    if not ring.is_field:
        raise ValueError("field_rref needs a field")
    rows = [r for r in m.rows() if r]
    done: list[dict[int, object]] = []
    while rows:
        rows.sort(key=len)
        row = rows.pop(0)
        if not row:
            continue
        pc = min(row)
        inv = ring.inv(row[pc])
        row = {c: ring.mul(inv, v) for c, v in row.items()}
        nxt = []
        for other in rows:
            if pc in other:
                f = other[pc]
                new = dict(other)
                for c, v in row.items():
                    s = ring.sub(new.get(c, ring.zero), ring.mul(f, v))
                    if ring.is_zero(s):
                        new.pop(c, None)
                    else:
                        new[c] = s
                if new:
                    nxt.append(new)
            else:
                nxt.append(other)
        rows = nxt
        for prev in done:
            if pc in prev:
                f = prev[pc]
                for c, v in row.items():
                    s = ring.sub(prev.get(c, ring.zero), ring.mul(f, v))
                    if ring.is_zero(s):
                        prev.pop(c, None)
                    else:
                        prev[c] = s
        done.append(row)
    done.sort(key=min)
    return done, [min(r) for r in done]


def field_kernel_basis(m: Matrix) -> list[dict[int, object]]:
    """Basis of {x : m @ x = 0} over a field, as sparse column dicts."""
    ring = m.ring
    rref_rows, pivots = field_rref(m)
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.ncols) if j not in pivot_set]
    pivot_row_of = {min(row): row for row in rref_rows}
    basis = []
    for f in free_cols:
        vec = {f: ring.one}
        for pc in pivots:
            coef = pivot_row_of[pc].get(f)
            if coef is not None:
                vec[pc] = ring.neg(coef)
        basis.append(vec)
    return basis


def field_in_span(span: Matrix, vectors: Matrix) -> bool:
    """True iff every column of `vectors` lies in the column span of `span`."""
    if vectors.is_zero():
        return True
    return hstack([span, vectors]).rank() == span.rank()


class FieldReducer:
    """Reduction mod a column span over a field, with quotient coordinates.

    Built from a relation matrix R (ambient x k): `reduce` rewrites a vector
    modulo colspan(R) onto the non-pivot coordinates, `coordinates` returns
    the quotient coordinate vector, `section_column` embeds a quotient basis
    vector back into the ambient space.
    """

    def __init__(self, relations: Matrix):
        ring = relations.ring
        if not ring.is_field:
            raise ValueError("FieldReducer needs a field")
        self.ring = ring
        self.ambient = relations.nrows
        rows, pivots = field_rref(relations.transpose())
        self.pivots = pivots              # ambient coordinates eliminated
        self.free = [i for i in range(self.ambient) if i not in set(pivots)]
        self._free_pos = {c: k for k, c in enumerate(self.free)}
        self._pivot_row = {min(r): r for r in rows}

    def reduce(self, vec: dict[int, object]) -> dict[int, object]:
        ring = self.ring
        out = dict(vec)
        for pc in self.pivots:
            coef = out.get(pc)
            if coef is None or ring.is_zero(coef):
                out.pop(pc, None)
                continue
            row = self._pivot_row[pc]
            for c, v in row.items():
                s = ring.sub(out.get(c, ring.zero), ring.mul(coef, v))
                if ring.is_zero(s):
                    out.pop(c, None)
                else:
                    out[c] = s
        return out

    def coordinates(self, vec: dict[int, object]) -> dict[int, object]:
        red = self.reduce(vec)
        return {self._free_pos[c]: v for c, v in red.items()}

    @property
    def quotient_dim(self) -> int:
        return len(self.free)

    def section_column(self, k: int) -> dict[int, object]:
        return {self.free[k]: self.ring.one}
