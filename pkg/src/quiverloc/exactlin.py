"""Exact dense linear algebra over prime fields F_p and the rationals.

Every other module computes Hom and Ext spaces by row reduction over one of
these two kinds of field, so everything here is exact: integers mod p for
prime fields, ``fractions.Fraction`` for the rationals, no floating point.
Matrices are immutable, stored row-major, and pivots are always chosen as
the first nonzero entry in column order so that bases are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence, Union

from .errors import UnsupportedFieldError

Element = Union[int, Fraction]

_PRIME_UPPER = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: either F_p for a prime 2 <= p < 2^31, or Q.

    Prime-field elements are canonical representatives in ``range(p)``;
    rational elements are normalized ``Fraction`` values.
    """

    kind: str  # "prime-field" | "rationals"
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind == "prime-field":
            if self.p is None or not (2 <= self.p < _PRIME_UPPER):
                raise ValueError(f"prime out of range: {self.p}")
            if not _is_prime(self.p):
                raise ValueError(f"not a prime: {self.p}")
        elif self.kind == "rationals":
            if self.p is not None:
                raise ValueError("rationals take no modulus")
        else:
            raise ValueError(f"unknown field kind: {self.kind!r}")

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec("prime-field", p)

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec("rationals")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime-field"

    def coerce(self, x: object) -> Element:
        if self.is_prime_field:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError("denominator not invertible mod p")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p  # type: ignore[arg-type]
        return Fraction(x)  # type: ignore[arg-type]

    @property
    def zero(self) -> Element:
        return 0 if self.is_prime_field else Fraction(0)

    @property
    def one(self) -> Element:
        return 1 if self.is_prime_field else Fraction(1)

    def add(self, a: Element, b: Element) -> Element:
        if self.is_prime_field:
            return (a + b) % self.p  # type: ignore[operator]
        return a + b  # type: ignore[operator]

    def sub(self, a: Element, b: Element) -> Element:
        if self.is_prime_field:
            return (a - b) % self.p  # type: ignore[operator]
        return a - b  # type: ignore[operator]

    def mul(self, a: Element, b: Element) -> Element:
        if self.is_prime_field:
            return (a * b) % self.p  # type: ignore[operator]
        return a * b  # type: ignore[operator]

    def neg(self, a: Element) -> Element:
        if self.is_prime_field:
            return (-a) % self.p  # type: ignore[operator]
        return -a  # type: ignore[operator]

    def inv(self, a: Element) -> Element:
        if self.is_prime_field:
            return pow(a, -1, self.p)  # type: ignore[arg-type]
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a  # type: ignore[operator]

    def elements(self) -> Iterator[Element]:
        """All field elements, in canonical order. Prime fields only."""
        if not self.is_prime_field:
            raise UnsupportedFieldError("cannot enumerate the rationals")
        return iter(range(self.p))  # type: ignore[arg-type]

    def __str__(self) -> str:
        return f"F_{self.p}" if self.is_prime_field else "Q"


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix with exact entries, row-major storage."""

    rows: int
    cols: int
    field: FieldSpec
    entries: tuple[Element, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence[object]],
                  cols: Optional[int] = None) -> "Mat":
        nrows = len(rows)
        if nrows == 0:
            return Mat(0, cols if cols is not None else 0, field, ())
        ncols = len(rows[0])
        ents: list[Element] = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            ents.extend(field.coerce(x) for x in r)
        return Mat(nrows, ncols, field, tuple(ents))

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Mat":
        return Mat(rows, cols, field, (field.zero,) * (rows * cols))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Mat":
        z, o = field.zero, field.one
        ents = [z] * (n * n)
        for i in range(n):
            ents[i * n + i] = o
        return Mat(n, n, field, tuple(ents))

    @staticmethod
    def column(field: FieldSpec, values: Sequence[object]) -> "Mat":
        return Mat(len(values), 1, field, tuple(field.coerce(v) for v in values))

    def entry(self, i: int, j: int) -> Element:
        return self.entries[i * self.cols + j]

    def row_list(self) -> list[list[Element]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def col_tuple(self, j: int) -> tuple[Element, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(e == z for e in self.entries)

    def mul(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} x {other.shape}")
        f = self.field
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out: list[Element] = [f.zero] * (n * m)
        if f.is_prime_field:
            p = f.p
            for i in range(n):
                arow = a[i * k:(i + 1) * k]
                for j in range(m):
                    s = 0
                    for t in range(k):
                        s += arow[t] * b[t * m + j]  # type: ignore[operator]
                    out[i * m + j] = s % p  # type: ignore[operator]
        else:
            for i in range(n):
                arow = a[i * k:(i + 1) * k]
                for j in range(m):
                    s = Fraction(0)
                    for t in range(k):
                        s += arow[t] * b[t * m + j]  # type: ignore[operator]
                    out[i * m + j] = s
        return Mat(n, m, f, tuple(out))

    def add(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        f = self.field
        return Mat(self.rows, self.cols, f,
                   tuple(f.add(a, b) for a, b in zip(self.entries, other.entries)))

    def sub(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        f = self.field
        return Mat(self.rows, self.cols, f,
                   tuple(f.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def neg(self) -> "Mat":
        f = self.field
        return Mat(self.rows, self.cols, f, tuple(f.neg(a) for a in self.entries))

    def scale(self, c: object) -> "Mat":
        f = self.field
        cc = f.coerce(c)
        return Mat(self.rows, self.cols, f, tuple(f.mul(cc, a) for a in self.entries))

    def transpose(self) -> "Mat":
        r, c = self.rows, self.cols
        e = self.entries
        return Mat(c, r, self.field,
                   tuple(e[i * c + j] for j in range(c) for i in range(r)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def _same_shape(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __str__(self) -> str:
        return "[" + "; ".join(
            " ".join(str(x) for x in row) for row in self.row_list()) + "]"


def hstack(mats: Sequence[Mat]) -> Mat:
    """Concatenate matrices left to right. All must share a row count."""
    if not mats:
        raise ValueError("hstack of nothing")
    rows = mats[0].rows
    field = mats[0].field
    if any(m.rows != rows for m in mats):
        raise ValueError("row count mismatch in hstack")
    out: list[Element] = []
    for i in range(rows):
        for m in mats:
            out.extend(m.entries[i * m.cols:(i + 1) * m.cols])
    return Mat(rows, sum(m.cols for m in mats), field, tuple(out))


def vstack(mats: Sequence[Mat]) -> Mat:
    """Concatenate matrices top to bottom. All must share a column count."""
    if not mats:
        raise ValueError("vstack of nothing")
    cols = mats[0].cols
    field = mats[0].field
    if any(m.cols != cols for m in mats):
        raise ValueError("column count mismatch in vstack")
    out: list[Element] = []
    for m in mats:
        out.extend(m.entries)
    return Mat(sum(m.rows for m in mats), cols, field, tuple(out))


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product a (x) b."""
    f = a.field
    r, c = a.rows * b.rows, a.cols * b.cols
    out: list[Element] = [f.zero] * (r * c)
    for i in range(a.rows):
        for j in range(a.cols):
            aij = a.entry(i, j)
            if aij == f.zero:
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    out[(i * b.rows + k) * c + (j * b.cols + l)] = f.mul(aij, b.entry(k, l))
    return Mat(r, c, f, tuple(out))


class RrefResult(NamedTuple):
    rank: int
    reduced: Mat
    transform: Mat


def rref(m: Mat) -> RrefResult:
    """Reduced row-echelon form with the row transform.

    Returns (rank, reduced, transform) with transform * m == reduced and
    transform invertible. Pivot choice is deterministic: the first nonzero
    entry in column order.
    """
    f = m.field
    nr, nc = m.rows, m.cols
    a = [list(m.entries[i * nc:(i + 1) * nc]) for i in range(nr)]
    t = [[f.one if i == j else f.zero for j in range(nr)] for i in range(nr)]
    piv_row = 0
    pivots: list[int] = []
    for col in range(nc):
        sel = -1
        for i in range(piv_row, nr):
            if a[i][col] != f.zero:
                sel = i
                break
        if sel < 0:
            continue
        if sel != piv_row:
            a[piv_row], a[sel] = a[sel], a[piv_row]
            t[piv_row], t[sel] = t[sel], t[piv_row]
        inv = f.inv(a[piv_row][col])
        if inv != f.one:
            a[piv_row] = [f.mul(inv, x) for x in a[piv_row]]
            t[piv_row] = [f.mul(inv, x) for x in t[piv_row]]
        prow, trow = a[piv_row], t[piv_row]
        for i in range(nr):
            if i == piv_row:
                continue
            c = a[i][col]
            if c == f.zero:
                continue
            a[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(a[i], prow)]
            t[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(t[i], trow)]
        pivots.append(col)
        piv_row += 1
        if piv_row == nr:
            break
    reduced = Mat(nr, nc, f, tuple(x for row in a for x in row))
    transform = Mat(nr, nr, f, tuple(x for row in t for x in row))
    return RrefResult(piv_row, reduced, transform)


def pivot_columns(m: Mat) -> tuple[int, ...]:
    """Column indices of the pivots in the RREF of m."""
    r = rref(m)
    f = m.field
    cols: list[int] = []
    for i in range(r.rank):
        for j in range(m.cols):
            if r.reduced.entry(i, j) != f.zero:
                cols.append(j)
                break
    return tuple(cols)


def rank(m: Mat) -> int:
    return rref(m).rank


def kernel_basis(m: Mat) -> Mat:
    """Basis of the right null space, as columns of the returned matrix.

    The column count is cols(m) - rank(m); free variables are set to 1 in
    ascending column order.
    """
    f = m.field
    res = rref(m)
    piv = pivot_columns(m)
    piv_set = set(piv)
    free = [j for j in range(m.cols) if j not in piv_set]
    cols: list[list[Element]] = []
    for j in free:
        v = [f.zero] * m.cols
        v[j] = f.one
        for r_i, c_i in enumerate(piv):
            v[c_i] = f.neg(res.reduced.entry(r_i, j))
        cols.append(v)
    out: list[Element] = []
    for i in range(m.cols):
        for v in cols:
            out.append(v[i])
    return Mat(m.cols, len(cols), f, tuple(out))


def solve(m: Mat, b: Mat) -> Optional[Mat]:
    """Solve m * x = b column-wise; None when inconsistent.

    Free variables are set to zero, so the solution is deterministic.
    """
    if b.rows != m.rows:
        raise ValueError(f"rhs has {b.rows} rows, expected {m.rows}")
    f = m.field
    res = rref(m)
    c = res.transform.mul(b)
    piv = pivot_columns(m)
    for i in range(res.rank, m.rows):
        for j in range(b.cols):
            if c.entry(i, j) != f.zero:
                return None
    out: list[Element] = [f.zero] * (m.cols * b.cols)
    for r_i, c_i in enumerate(piv):
        for j in range(b.cols):
            out[c_i * b.cols + j] = c.entry(r_i, j)
    return Mat(m.cols, b.cols, f, tuple(out))


def column_space_basis(m: Mat) -> Mat:
    """The original columns of m at its pivot positions."""
    piv = pivot_columns(m)
    f = m.field
    out: list[Element] = []
    for i in range(m.rows):
        for j in piv:
            out.append(m.entry(i, j))
    return Mat(m.rows, len(piv), f, tuple(out))


def inverse(m: Mat) -> Optional[Mat]:
    """Inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    res = rref(m)
    if res.rank != m.rows:
        return None
    return res.transform


def row_space_rref(m: Mat) -> Mat:
    """RREF rows spanning the row space of m (the canonical basis)."""
    res = rref(m)
    c = m.cols
    ents = res.reduced.entries[: res.rank * c]
    return Mat(res.rank, c, m.field, ents)


def complement_pivots(basis: Mat) -> tuple[int, ...]:
    """Coordinates completing col(basis) to the full space.

    Returns the non-pivot coordinates of the subspace spanned by the
    columns of ``basis``; the standard vectors there are a complement.
    """
    piv = set(pivot_columns(basis.transpose()))
    return tuple(i for i in range(basis.rows) if i not in piv)


class QuotientMaps(NamedTuple):
    projection: Mat   # (n-r) x n, kernel = col(basis)
    lift: Mat         # n x (n-r), projection * lift = identity


def quotient_maps(basis: Mat) -> QuotientMaps:
    """Projection onto (and lift from) the quotient by col(basis).

    The complement is spanned by standard basis vectors at the non-pivot
    coordinates of the subspace, chosen deterministically by pivot order.
    """
    f = basis.field
    n, r = basis.rows, basis.cols
    comp = complement_pivots(basis)
    if len(comp) + r != n:
        raise ValueError("basis columns are not independent")
    lift_cols: list[list[Element]] = []
    for i in comp:
        v = [f.zero] * n
        v[i] = f.one
        lift_cols.append(v)
    lift = Mat(n, len(comp), f,
               tuple(lift_cols[j][i] for i in range(n) for j in range(len(comp))))
    full = hstack([basis, lift]) if r > 0 else lift
    inv = inverse(full)
    if inv is None:
        raise ValueError("basis columns are not independent")
    proj_entries: list[Element] = []
    for i in range(r, n):
        proj_entries.extend(inv.entries[i * n:(i + 1) * n])
    projection = Mat(n - r, n, f, tuple(proj_entries))
    return QuotientMaps(projection, lift)


def vec(m: Mat) -> tuple[Element, ...]:
    """Row-major flattening of m."""
    return m.entries


def enumerate_vectors(field: FieldSpec, dim: int) -> Iterator[tuple[Element, ...]]:
    """All coefficient tuples of the given length over a prime field."""
    if not field.is_prime_field:
        raise UnsupportedFieldError("cannot enumerate vectors over the rationals")
    return itertools.product(range(field.p), repeat=dim)  # type: ignore[arg-type]


def subspace_bases(field: FieldSpec, n: int) -> Iterator[Mat]:
    """All subspaces of F_p^n, one canonical basis matrix (n x k) each.

    Subspaces are enumerated by their reduced row-echelon row basis:
    dimension ascending, pivot sets in lexicographic order, then free
    entries in lexicographic order. Each subspace appears exactly once.
    """
    if not field.is_prime_field:
        raise UnsupportedFieldError("cannot enumerate subspaces over the rationals")
    p = field.p
    yield Mat(n, 0, field, ())
    for k in range(1, n + 1):
        for piv in itertools.combinations(range(n), k):
            free_pos: list[tuple[int, int]] = []
            for r_i in range(k):
                for j in range(piv[r_i] + 1, n):
                    if j not in piv:
                        free_pos.append((r_i, j))
            for vals in itertools.product(range(p), repeat=len(free_pos)):
                rows = [[field.zero] * n for _ in range(k)]
                for r_i in range(k):
                    rows[r_i][piv[r_i]] = field.one
                for (r_i, j), v in zip(free_pos, vals):
                    rows[r_i][j] = v
                # rows are an RREF basis; transpose to column convention
                yield Mat(n, k, field,
                          tuple(rows[j][i] for i in range(n) for j in range(k)))
