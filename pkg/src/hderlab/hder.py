"""Higher derivations on associative algebras.

A higher derivation of rank N is a sequence of matrices (d_1, ..., d_N)
acting on algebra coordinates and satisfying, for every k and all a, b,

    d_k(a b) = sum_{i+j=k} d_i(a) d_j(b)        (d_0 = identity, never stored).

The verifier checks this on basis pairs.  ``truncated_morphism_check`` is a
deliberately independent second route: it builds the polynomial truncation
A[t]/(t^{N+1}) and tests whether a |-> a + d_1(a) t + ... + d_N(a) t^N is an
algebra morphism; the two must agree on every input.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .algebras import Algebra, CheckReport, Violation
from .exactlin import Matrix, ShapeError, Vector, ZERO, ONE, vec_add


@dataclass(frozen=True)
class HigherDerivation:
    """Rank-N sequence of square matrices; maps[k-1] is d_k on coordinates."""

    rank: int
    maps: tuple[Matrix, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise ShapeError("rank must be at least 1")
        if len(self.maps) != self.rank:
            raise ShapeError(f"rank {self.rank} needs {self.rank} maps, got {len(self.maps)}")
        n = self.maps[0].rows
        for k, m in enumerate(self.maps, start=1):
            if m.rows != n or m.cols != n:
                raise ShapeError(f"map {k} is {m.rows}x{m.cols}, expected {n}x{n}")

    @property
    def dim(self) -> int:
        return self.maps[0].rows

    def map_at(self, k: int) -> Matrix:
        """d_k, with d_0 = identity."""
        if k == 0:
            return Matrix.identity(self.dim)
        return self.maps[k - 1]

    def apply(self, k: int, v: Vector) -> Vector:
        if k == 0:
            return v
        return self.maps[k - 1].apply(v)

    @classmethod
    def zero(cls, dim: int, rank: int) -> "HigherDerivation":
        return cls(rank, (Matrix.zeros(dim, dim),) * rank)


@dataclass(frozen=True)
class AssHDerPair:
    algebra: Algebra
    hder: HigherDerivation

    def __post_init__(self):
        if self.hder.dim != self.algebra.dim:
            raise ShapeError(
                f"higher derivation acts on dim {self.hder.dim}, algebra has dim {self.algebra.dim}")


@dataclass(frozen=True)
class AssHDerMorphism:
    """A linear map between two pairs of equal rank, to be checked."""

    source: AssHDerPair
    target: AssHDerPair
    matrix: Matrix


def verify_hder(alg: Algebra, hd: HigherDerivation) -> CheckReport:
    """The defining identity for every k = 1..N on all basis pairs."""
    if hd.dim != alg.dim:
        raise ShapeError(f"maps are {hd.dim}x{hd.dim}, algebra has dim {alg.dim}")
    d = alg.dim
    for k in range(1, hd.rank + 1):
        dk = hd.maps[k - 1]
        for i, j in itertools.product(range(d), repeat=2):
            lhs = dk.apply(alg.basis_product(i, j))
            rhs = (ZERO,) * d
            for p in range(k + 1):
                rhs = vec_add(rhs, alg.mult(hd.apply(p, alg.basis_vector(i)),
                                            hd.apply(k - p, alg.basis_vector(j))))
            if lhs != rhs:
                return CheckReport(False, Violation("higher derivation identity", (k, i, j), lhs, rhs))
    return CheckReport.passed()


def ordinary_hder(alg: Algebra, d1: Matrix, n_rank: int) -> HigherDerivation:
    """d_k = d1^k / k! from a single derivation d1."""
    trial = HigherDerivation(1, (d1,))
    report = verify_hder(alg, trial)
    if not report.ok:
        raise ValueError(f"d1 is not a derivation: {report.violation}")
    maps = []
    power = Matrix.identity(alg.dim)
    for k in range(1, n_rank + 1):
        power = power * d1
        maps.append(power.scale(ONE / math.factorial(k)))
    return HigherDerivation(n_rank, tuple(maps))


def power_commutator_hder(alg: Algebra, x: Vector, n_rank: int) -> HigherDerivation:
    """d_n(a) = x^{n-1} (x a - a x); works for any element of any algebra."""
    lx = alg.left_mult_matrix(x)
    rx = alg.right_mult_matrix(x)
    comm = lx - rx
    maps = []
    power = Matrix.identity(alg.dim)
    for n in range(1, n_rank + 1):
        maps.append(power * comm)
        power = lx * power
    return HigherDerivation(n_rank, tuple(maps))


def stretch_hder(hd: HigherDerivation, q: int) -> HigherDerivation:
    """Respace a sequence: the new d_k is d_s when k = s*q, zero otherwise."""
    if not 1 <= q <= hd.rank:
        raise ValueError(f"stretch step {q} out of range 1..{hd.rank}")
    maps = []
    for k in range(1, hd.rank + 1):
        if k % q == 0:
            maps.append(hd.maps[k // q - 1])
        else:
            maps.append(Matrix.zeros(hd.dim, hd.dim))
    return HigherDerivation(hd.rank, tuple(maps))


def inner_hder(alg: Algebra, xs: list[Vector], ys: list[Vector]) -> HigherDerivation:
    """d_n(a) = sum_{i=0..n} x_i a y_{n-i} from two convolution-inverse sequences.

    Requires a unital algebra; x_0 = y_0 = 1 by convention, and the sequences
    must satisfy sum_i x_i y_{n-i} = delta_{n0} 1 = sum_i y_i x_{n-i} for
    n = 0..N.
    """
    if alg.unit_index is None:
        raise ValueError("inner higher derivations need a unital algebra")
    n_rank = len(xs)
    if len(ys) != n_rank:
        raise ShapeError("x and y sequences must have equal length")
    one = alg.unit_vector()
    x_seq = [one, *xs]
    y_seq = [one, *ys]
    for n in range(n_rank + 1):
        want = one if n == 0 else (ZERO,) * alg.dim
        conv_xy = (ZERO,) * alg.dim
        conv_yx = (ZERO,) * alg.dim
        for i in range(n + 1):
            conv_xy = vec_add(conv_xy, alg.mult(x_seq[i], y_seq[n - i]))
            conv_yx = vec_add(conv_yx, alg.mult(y_seq[i], x_seq[n - i]))
        if conv_xy != want or conv_yx != want:
            raise ValueError(f"convolution-inverse condition fails at n={n}")
    maps = []
    for n in range(1, n_rank + 1):
        cols = []
        for j in range(alg.dim):
            ej = alg.basis_vector(j)
            acc = (ZERO,) * alg.dim
            for i in range(n + 1):
                acc = vec_add(acc, alg.mult(alg.mult(x_seq[i], ej), y_seq[n - i]))
            cols.append(acc)
        maps.append(Matrix.from_columns(cols))
    return HigherDerivation(n_rank, tuple(maps))


def polynomial_truncation(alg: Algebra, order: int) -> Algebra:
    """A[t]/(t^{order+1}) on the basis e_i t^s, indexed s*dim + i."""
    d = alg.dim
    big = d * (order + 1)
    c = [[[ZERO] * big for _ in range(big)] for _ in range(big)]
    for s in range(order + 1):
        for r in range(order + 1 - s):
            for i, j in itertools.product(range(d), repeat=2):
                row = c[s * d + i][r * d + j]
                for k, coeff in enumerate(alg.c[i][j]):
                    if coeff:
                        row[(s + r) * d + k] = coeff
    labels = tuple(
        lbl if s == 0 else f"{lbl}*t^{s}"
        for s in range(order + 1) for lbl in alg.basis_labels)
    unit = alg.unit_index if alg.unit_index is not None else None
    return Algebra(big, tuple(tuple(tuple(row) for row in mid) for mid in c), labels, unit)


def truncated_morphism_check(alg: Algebra, hd: HigherDerivation) -> CheckReport:
    """Is a |-> a + d_1(a) t + ... + d_N(a) t^N multiplicative into A[t]/(t^{N+1})?

    Built from the truncation's own structure constants, not from the
    higher-derivation identity, so it can cross-check verify_hder.
    """
    if hd.dim != alg.dim:
        raise ShapeError(f"maps are {hd.dim}x{hd.dim}, algebra has dim {alg.dim}")
    big = polynomial_truncation(alg, hd.rank)
    d = alg.dim
    cols = []
    for i in range(d):
        col = []
        for s in range(hd.rank + 1):
            col.extend(hd.apply(s, alg.basis_vector(i)))
        cols.append(tuple(col))
    f = Matrix.from_columns(cols)
    for i, j in itertools.product(range(d), repeat=2):
        lifted_product = f.apply(alg.basis_product(i, j))
        product_of_lifts = big.mult(f.column(i), f.column(j))
        if lifted_product != product_of_lifts:
            return CheckReport(False, Violation("truncated morphism multiplicativity",
                                                (i, j), lifted_product, product_of_lifts))
    return CheckReport.passed()


def check_morphism(mor: AssHDerMorphism) -> CheckReport:
    """Algebra multiplicativity on basis pairs plus intertwining with all d_k."""
    src, tgt, f = mor.source, mor.target, mor.matrix
    if src.hder.rank != tgt.hder.rank:
        raise ShapeError("source and target ranks differ")
    if f.rows != tgt.algebra.dim or f.cols != src.algebra.dim:
        raise ShapeError(
            f"morphism matrix is {f.rows}x{f.cols}, expected "
            f"{tgt.algebra.dim}x{src.algebra.dim}")
    d = src.algebra.dim
    for i, j in itertools.product(range(d), repeat=2):
        lhs = f.apply(src.algebra.basis_product(i, j))
        rhs = tgt.algebra.mult(f.column(i), f.column(j))
        if lhs != rhs:
            return CheckReport(False, Violation("algebra morphism", (i, j), lhs, rhs))
    for k in range(1, src.hder.rank + 1):
        lhs_m = tgt.hder.maps[k - 1] * f
        rhs_m = f * src.hder.maps[k - 1]
        if lhs_m != rhs_m:
            return CheckReport(False, Violation("intertwining", (k,), None, None))
    return CheckReport.passed()
