"""Finite-dimensional associative algebras and bimodules over the rationals.

An algebra is a structure-constant tensor: ``c[i][j][k]`` is the coefficient
of basis vector ``e_k`` in the product ``e_i * e_j``.  A bimodule is a pair
of action tensors plus the square matrices that play the role of the higher
derivation on the module side.  Everything is an immutable value; the
verifiers below are exhaustive brute-force checks over basis tuples, which
is equivalent to the general statement by multilinearity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactlin import Matrix, ShapeError, Vector, ZERO, rat, rat_str

Tensor3 = tuple[tuple[tuple[Fraction, ...], ...], ...]


def tensor3(data, d0: int, d1: int, d2: int, what: str = "tensor") -> Tensor3:
    """Normalize a nested iterable into a d0 x d1 x d2 tuple of Fractions."""
    rows = tuple(tuple(tuple(rat(x) for x in inner) for inner in middle) for middle in data)
    if len(rows) != d0 or any(len(m) != d1 for m in rows) or any(
            len(inner) != d2 for m in rows for inner in m):
        raise ShapeError(f"{what} is not {d0}x{d1}x{d2}")
    return rows


def zero_tensor3(d0: int, d1: int, d2: int) -> Tensor3:
    return tuple(tuple((ZERO,) * d2 for _ in range(d1)) for _ in range(d0))


@dataclass(frozen=True)
class Violation:
    """First failing instance of a law, in lexicographic scan order."""

    law: str
    at: tuple
    lhs: tuple | None = None
    rhs: tuple | None = None

    def __str__(self) -> str:
        msg = f"{self.law} fails at {self.at}"
        if self.lhs is not None:
            msg += f": lhs=({_fmt(self.lhs)}) rhs=({_fmt(self.rhs)})"
        return msg


def _fmt(values) -> str:
    return ", ".join(rat_str(x) for x in values)


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    violation: Violation | None = None

    @classmethod
    def passed(cls) -> "CheckReport":
        return cls(True, None)

    @classmethod
    def failed(cls, law: str, at: tuple, lhs=None, rhs=None) -> "CheckReport":
        return cls(False, Violation(law, at, lhs, rhs))


@dataclass(frozen=True)
class Algebra:
    """Associative algebra by structure constants c[i][j][k]."""

    dim: int
    c: Tensor3
    basis_labels: tuple[str, ...]
    unit_index: int | None = None

    def __post_init__(self):
        d = self.dim
        if len(self.basis_labels) != d:
            raise ShapeError(f"{d} basis labels expected, got {len(self.basis_labels)}")
        if len(self.c) != d or any(len(m) != d for m in self.c) or any(
                len(inner) != d for m in self.c for inner in m):
            raise ShapeError(f"structure tensor is not {d}x{d}x{d}")
        if self.unit_index is not None and not 0 <= self.unit_index < d:
            raise ShapeError(f"unit index {self.unit_index} out of range")

    @classmethod
    def from_table(cls, table, labels=None, unit_index=None) -> "Algebra":
        dim = len(table)
        if labels is None:
            labels = tuple(f"e{i}" for i in range(dim))
        return cls(dim, tensor3(table, dim, dim, dim, "structure tensor"),
                   tuple(labels), unit_index)

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(1) if j == i else ZERO for j in range(self.dim))

    def basis_product(self, i: int, j: int) -> Vector:
        return self.c[i][j]

    def mult(self, x: Vector, y: Vector) -> Vector:
        """Product of two coordinate vectors, skipping zero coordinates."""
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            ci = self.c[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                coeff = xi * yj
                for k, cijk in enumerate(ci[j]):
                    if cijk:
                        out[k] += coeff * cijk
        return tuple(out)

    def unit_vector(self) -> Vector:
        if self.unit_index is None:
            raise ValueError("algebra has no declared unit")
        return self.basis_vector(self.unit_index)

    def left_mult_matrix(self, x: Vector) -> Matrix:
        cols = [self.mult(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols)

    def right_mult_matrix(self, x: Vector) -> Matrix:
        cols = [self.mult(self.basis_vector(j), x) for j in range(self.dim)]
        return Matrix.from_columns(cols)


@dataclass(frozen=True)
class Bimodule:
    """Bimodule with module-side derivation maps.

    ``left[i][a][b]`` is the coefficient of m_b in e_i * m_a, and
    ``right[a][i][b]`` the coefficient of m_b in m_a * e_i.  ``dmaps`` holds
    the square matrices (d_1^M, ..., d_N^M) acting on module coordinates.
    """

    mdim: int
    left: Tensor3
    right: Tensor3
    dmaps: tuple[Matrix, ...]

    def __post_init__(self):
        for k, m in enumerate(self.dmaps, start=1):
            if m.rows != self.mdim or m.cols != self.mdim:
                raise ShapeError(f"module map {k} is {m.rows}x{m.cols}, expected {self.mdim}x{self.mdim}")

    def act_left(self, avec: Vector, mvec: Vector) -> Vector:
        out = [ZERO] * self.mdim
        for i, ai in enumerate(avec):
            if not ai:
                continue
            li = self.left[i]
            for a, ma in enumerate(mvec):
                if not ma:
                    continue
                coeff = ai * ma
                for b, lab in enumerate(li[a]):
                    if lab:
                        out[b] += coeff * lab
        return tuple(out)

    def act_right(self, mvec: Vector, avec: Vector) -> Vector:
        out = [ZERO] * self.mdim
        for a, ma in enumerate(mvec):
            if not ma:
                continue
            ra = self.right[a]
            for i, ai in enumerate(avec):
                if not ai:
                    continue
                coeff = ma * ai
                for b, rab in enumerate(ra[i]):
                    if rab:
                        out[b] += coeff * rab
        return tuple(out)

    def dmap_at(self, k: int) -> Matrix:
        """d_k^M with the convention that d_0^M is the identity."""
        if k == 0:
            return Matrix.identity(self.mdim)
        return self.dmaps[k - 1]

    def basis_vector(self, a: int) -> Vector:
        return tuple(Fraction(1) if b == a else ZERO for b in range(self.mdim))

    def has_zero_actions(self) -> bool:
        return all(not x for m in self.left for inner in m for x in inner) and \
            all(not x for m in self.right for inner in m for x in inner)


def verify_algebra(alg: Algebra) -> CheckReport:
    """Associativity on all basis triples, plus unit laws when a unit is declared."""
    d = alg.dim
    c = alg.c
    for i, j, l in itertools.product(range(d), repeat=3):
        lhs = tuple(sum(c[i][j][r] * c[r][l][k] for r in range(d)) for k in range(d))
        rhs = tuple(sum(c[j][l][r] * c[i][r][k] for r in range(d)) for k in range(d))
        if lhs != rhs:
            return CheckReport.failed("associativity", (i, j, l), lhs, rhs)
    u = alg.unit_index
    if u is not None:
        for j in range(d):
            ej = alg.basis_vector(j)
            if c[u][j] != ej:
                return CheckReport.failed("left unit law", (u, j), c[u][j], ej)
            if c[j][u] != ej:
                return CheckReport.failed("right unit law", (j, u), c[j][u], ej)
    return CheckReport.passed()


def verify_bimodule(alg: Algebra, hder, mod: Bimodule) -> CheckReport:
    """Module laws and module-side higher-derivation laws on basis elements.

    ``hder`` supplies the algebra-side maps d_k entering the laws
    d_k^M(a m) = sum_{i+j=k} d_i(a) d_j^M(m) and its right-handed twin.
    """
    d, md = alg.dim, mod.mdim
    if len(mod.dmaps) != hder.rank:
        raise ShapeError(f"{hder.rank} module maps expected, got {len(mod.dmaps)}")
    for i, j, a in itertools.product(range(d), range(d), range(md)):
        ma = mod.basis_vector(a)
        prod = alg.basis_product(i, j)
        ei, ej = alg.basis_vector(i), alg.basis_vector(j)
        lhs = mod.act_left(prod, ma)
        rhs = mod.act_left(ei, mod.act_left(ej, ma))
        if lhs != rhs:
            return CheckReport.failed("left module law", (i, j, a), lhs, rhs)
        lhs = mod.act_right(ma, prod)
        rhs = mod.act_right(mod.act_right(ma, ei), ej)
        if lhs != rhs:
            return CheckReport.failed("right module law", (i, j, a), lhs, rhs)
        lhs = mod.act_right(mod.act_left(ei, ma), ej)
        rhs = mod.act_left(ei, mod.act_right(ma, ej))
        if lhs != rhs:
            return CheckReport.failed("bimodule compatibility", (i, j, a), lhs, rhs)
    for k in range(1, hder.rank + 1):
        for i, a in itertools.product(range(d), range(md)):
            ei = alg.basis_vector(i)
            ma = mod.basis_vector(a)
            lhs = mod.dmap_at(k).apply(mod.act_left(ei, ma))
            rhs = tuple(
                sum(col) for col in zip(*(
                    mod.act_left(hder.map_at(p).apply(ei), mod.dmap_at(k - p).apply(ma))
                    for p in range(k + 1))))
            if lhs != rhs:
                return CheckReport.failed("left derivation law", (k, i, a), lhs, rhs)
            lhs = mod.dmap_at(k).apply(mod.act_right(ma, ei))
            rhs = tuple(
                sum(col) for col in zip(*(
                    mod.act_right(mod.dmap_at(p).apply(ma), hder.map_at(k - p).apply(ei))
                    for p in range(k + 1))))
            if lhs != rhs:
                return CheckReport.failed("right derivation law", (k, i, a), lhs, rhs)
    return CheckReport.passed()


def adjoint_bimodule(alg: Algebra, hder) -> Bimodule:
    """The algebra acting on itself, with the higher derivation as module maps."""
    d = alg.dim
    left = alg.c
    right = alg.c
    return Bimodule(d, left, right, tuple(hder.maps))


def trivial_bimodule(alg: Algebra, mdim: int, dmaps: tuple[Matrix, ...]) -> Bimodule:
    """Zero left and right actions; any dmaps are lawful since every law vanishes."""
    return Bimodule(mdim, zero_tensor3(alg.dim, mdim, mdim),
                    zero_tensor3(mdim, alg.dim, mdim), tuple(dmaps))
