"""Exact rational dense linear algebra.

Every cohomology and obstruction question downstream reduces to rank /
kernel / solve questions over the rationals, and the answers are equality
tests, so floating point is banned throughout.  Scalars are
:class:`fractions.Fraction`; matrices are immutable, dense and row-major.

All outputs are canonical: elimination always produces the reduced row
echelon form, and kernel bases and particular solutions are the ones read
off from it.  Higher layers therefore reproduce bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Scalar = Fraction
Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class ShapeError(ValueError):
    """Dimensions of an input do not match its declared shape."""


class BrokenComplexError(RuntimeError):
    """A claimed chain complex failed im(d) <= ker(d); an upstream bug."""


def rat(value) -> Fraction:
    """Coerce an int, a Fraction, or a string like ``"-3/4"`` or ``"2"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"not an exact rational: {value!r}")


def rat_str(value: Fraction) -> str:
    """Render as ``p/q``, or just ``p`` when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def vec_add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y, strict=True))


def vec_sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y, strict=True))


def vec_scale(c: Fraction, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def vec_is_zero(x: Vector) -> bool:
    return all(not a for a in x)


def basis_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


@dataclass(frozen=True)
class Matrix:
    """Immutable rows x cols matrix of Fractions, entries row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"matrix {self.rows}x{self.cols} needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows) -> "Matrix":
        rows = [tuple(rat(x) for x in row) for row in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(row) != ncols for row in rows):
            raise ShapeError("ragged rows")
        return cls(len(rows), ncols, tuple(x for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def from_columns(cls, cols: list[Vector]) -> "Matrix":
        nrows = len(cols[0]) if cols else 0
        if any(len(c) != nrows for c in cols):
            raise ShapeError("ragged columns")
        return cls(nrows, len(cols), tuple(cols[j][i] for i in range(nrows) for j in range(len(cols))))

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def apply(self, v: Vector) -> Vector:
        """Matrix-vector product, skipping zero coordinates of ``v``."""
        if len(v) != self.cols:
            raise ShapeError(f"expected vector of length {self.cols}, got {len(v)}")
        out = [ZERO] * self.rows
        for j, vj in enumerate(v):
            if not vj:
                continue
            base = j
            for i in range(self.rows):
                e = self.entries[i * self.cols + base]
                if e:
                    out[i] += e * vj
        return tuple(out)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = [ZERO] * (self.rows * other.cols)
        for i in range(self.rows):
            ibase = i * self.cols
            for k in range(self.cols):
                a = self.entries[ibase + k]
                if not a:
                    continue
                kbase = k * other.cols
                obase = i * other.cols
                for j in range(other.cols):
                    b = other.entries[kbase + j]
                    if b:
                        out[obase + j] += a * b
        return Matrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._require_same_shape(other)
        return Matrix(self.rows, self.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._require_same_shape(other)
        return Matrix(self.rows, self.cols,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: Fraction) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))

    def is_zero(self) -> bool:
        return all(not a for a in self.entries)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.entry(i, j) == (ONE if i == j else ZERO)
                   for i in range(self.rows) for j in range(self.cols))

    def _require_same_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError(f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and the tuple of pivot columns.

    Plain rational Gauss-Jordan with first-nonzero pivoting; deterministic.
    """
    work = m.to_rows()
    pivots: list[int] = []
    pr = 0
    for pc in range(m.cols):
        pivot_row = None
        for r in range(pr, m.rows):
            if work[r][pc]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        if pivot_row != pr:
            work[pr], work[pivot_row] = work[pivot_row], work[pr]
        inv = ONE / work[pr][pc]
        if inv != ONE:
            work[pr] = [inv * x for x in work[pr]]
        for r in range(m.rows):
            if r == pr:
                continue
            factor = work[r][pc]
            if factor:
                prow = work[pr]
                work[r] = [x - factor * p for x, p in zip(work[r], prow)]
        pivots.append(pc)
        pr += 1
        if pr == m.rows:
            break
    return Matrix.from_rows(work) if m.rows else m, tuple(pivots)


def rank(m: Matrix) -> int:
    """Rank over the rationals."""
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> list[Vector]:
    """Canonical basis of the right null space, one vector per free column.

    The vector for free column f has a 1 at f, the negated reduced-echelon
    entries at the pivot columns, and zeros elsewhere; ordered by f.
    """
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red.entry(r, f)
        basis.append(tuple(v))
    return basis


def solve_affine(m: Matrix, b: Vector) -> Vector | None:
    """Canonical solution of ``m @ x == b``, or None when inconsistent.

    Free variables are set to zero, so the result is the reduced-echelon
    particular solution.
    """
    if len(b) != m.rows:
        raise ShapeError(f"expected right-hand side of length {m.rows}, got {len(b)}")
    aug = Matrix(m.rows, m.cols + 1,
                 tuple(x for i in range(m.rows) for x in (*m.row(i), b[i])))
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = red.entry(r, m.cols)
    return tuple(x)


def quotient_dim(boundary: Matrix, cocycle_kernel_of: Matrix) -> int:
    """dim ker(cocycle_kernel_of) - rank(boundary), checking the inclusion.

    ``boundary`` maps into the domain of ``cocycle_kernel_of``; the composite
    must vanish, otherwise the claimed complex is broken and we refuse to
    produce a number.
    """
    if cocycle_kernel_of.cols != boundary.rows:
        raise ShapeError(
            f"boundary lands in a {boundary.rows}-dim space but the kernel map "
            f"expects {cocycle_kernel_of.cols}")
    if not (cocycle_kernel_of * boundary).is_zero():
        raise BrokenComplexError("image not contained in kernel")
    return (cocycle_kernel_of.cols - rank(cocycle_kernel_of)) - rank(boundary)
