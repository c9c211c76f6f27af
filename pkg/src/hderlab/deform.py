"""Truncated one-parameter deformations of a pair and their calculus.

A deformation of order n is a coefficient family: bilinear maps
mu_0, ..., mu_n with mu_0 the algebra product, and for each k a matrix list
d_{k,0}, ..., d_{k,n} with d_{k,0} = d_k.  The index-0 derivation series is
the constant identity (d_{0,0} = id, d_{0,s} = 0 for s >= 1), which the
convolutions below bake in.  Nothing is ever symbolic: all series algebra is
convolution on coefficient lists, truncated at the stored order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebras import Algebra, CheckReport, Violation, adjoint_bimodule
from .cochain import (
    Cochain, MultiMap, cochain_to_vector, differential, differential_matrix,
    matrix_to_multimap, multimap_to_matrix, vector_to_cochain,
)
from .exactlin import Matrix, ShapeError, ZERO, solve_affine, vec_add
from .hder import HigherDerivation


@dataclass(frozen=True)
class Deformation:
    """Coefficient family (mu_0..mu_n; d_{k,0}..d_{k,n} for k = 1..N)."""

    order: int
    mus: tuple[MultiMap, ...]
    dks: tuple[tuple[Matrix, ...], ...]

    def __post_init__(self):
        if self.order < 0:
            raise ShapeError("order must be >= 0")
        if len(self.mus) != self.order + 1:
            raise ShapeError(f"{self.order + 1} product coefficients expected, got {len(self.mus)}")
        d = self.mus[0].dim
        for mu in self.mus:
            if mu.arity != 2 or mu.dim != d or mu.mdim != d:
                raise ShapeError("product coefficients must be bilinear self maps")
        for k, series in enumerate(self.dks, start=1):
            if len(series) != self.order + 1:
                raise ShapeError(f"derivation series {k} has {len(series)} coefficients")
            for mat in series:
                if mat.rows != d or mat.cols != d:
                    raise ShapeError(f"derivation coefficient in series {k} is not {d}x{d}")

    @property
    def dim(self) -> int:
        return self.mus[0].dim

    @property
    def rank(self) -> int:
        return len(self.dks)

    def dcoeff(self, k: int, s: int) -> Matrix | None:
        """d_{k,s} with the constant-identity convention at k = 0; None means zero."""
        if k == 0:
            return Matrix.identity(self.dim) if s == 0 else None
        mat = self.dks[k - 1][s]
        return None if mat.is_zero() else mat

    def coefficient(self, s: int) -> Cochain:
        """The order-s coefficient as a 2-cochain with self coefficients."""
        return Cochain(self.mus[s],
                       tuple(matrix_to_multimap(series[s]) for series in self.dks))


@dataclass(frozen=True)
class GaugeMap:
    """Truncated formal isomorphism: matrices (Phi_0 = id, Phi_1, ..., Phi_T)."""

    order: int
    phis: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.phis) != self.order + 1:
            raise ShapeError(f"{self.order + 1} coefficients expected, got {len(self.phis)}")

    @property
    def dim(self) -> int:
        return self.phis[0].rows

    @classmethod
    def identity(cls, dim: int, order: int) -> "GaugeMap":
        return cls(order, (Matrix.identity(dim),
                           *(Matrix.zeros(dim, dim) for _ in range(order))))

    @classmethod
    def single(cls, dim: int, order: int, r: int, mat: Matrix) -> "GaugeMap":
        """id + t^r * mat, truncated at the given order."""
        if not 1 <= r <= order:
            raise ValueError(f"coefficient index {r} out of range 1..{order}")
        phis = [Matrix.identity(dim)] + [Matrix.zeros(dim, dim)] * order
        phis[r] = mat
        return cls(order, tuple(phis))


def product_multimap(alg: Algebra) -> MultiMap:
    """The algebra multiplication as a bilinear self map."""
    values: list[Fraction] = []
    for i, j in itertools.product(range(alg.dim), repeat=2):
        values.extend(alg.c[i][j])
    return MultiMap(2, alg.dim, alg.dim, tuple(values))


def trivial_deformation(alg: Algebra, hd: HigherDerivation, order: int) -> Deformation:
    """The undeformed family: base coefficients followed by zeros."""
    d = alg.dim
    mus = (product_multimap(alg),) + tuple(MultiMap.zero(2, d, d) for _ in range(order))
    dks = tuple((hd.maps[k], *(Matrix.zeros(d, d) for _ in range(order)))
                for k in range(hd.rank))
    return Deformation(order, mus, dks)


def _check_base(alg: Algebra, hd: HigherDerivation, defm: Deformation) -> None:
    if defm.dim != alg.dim:
        raise ShapeError("deformation dimension differs from the algebra")
    if defm.rank != hd.rank:
        raise ShapeError("deformation rank differs from the higher derivation")
    if defm.mus[0] != product_multimap(alg):
        raise ValueError("order-0 product coefficient is not the algebra multiplication")
    for k in range(1, hd.rank + 1):
        if defm.dks[k - 1][0] != hd.maps[k - 1]:
            raise ValueError(f"order-0 derivation coefficient {k} is not d_{k}")


def verify_deformation(alg: Algebra, hd: HigherDerivation,
                       defm: Deformation) -> CheckReport:
    """All order-s equations for s = 0..order, on all basis tuples."""
    _check_base(alg, hd, defm)
    d = alg.dim
    basis = [alg.basis_vector(i) for i in range(d)]
    for s in range(defm.order + 1):
        for i, j, l in itertools.product(range(d), repeat=3):
            lhs = (ZERO,) * d
            rhs = (ZERO,) * d
            for p in range(s + 1):
                q = s - p
                lhs = vec_add(lhs, defm.mus[p].eval((defm.mus[q].value_at((i, j)), basis[l])))
                rhs = vec_add(rhs, defm.mus[p].eval((basis[i], defm.mus[q].value_at((j, l)))))
            if lhs != rhs:
                return CheckReport(False, Violation(f"order-{s} associativity", (i, j, l), lhs, rhs))
        for k in range(1, defm.rank + 1):
            for i, j in itertools.product(range(d), repeat=2):
                lhs = (ZERO,) * d
                for p in range(s + 1):
                    mat = defm.dcoeff(k, p)
                    if mat is not None:
                        lhs = vec_add(lhs, mat.apply(defm.mus[s - p].value_at((i, j))))
                rhs = (ZERO,) * d
                for a in range(k + 1):
                    b = k - a
                    for p in range(s + 1):
                        for q in range(s - p + 1):
                            r = s - p - q
                            da = defm.dcoeff(a, q)
                            db = defm.dcoeff(b, r)
                            if a == 0 and q > 0:
                                continue
                            if b == 0 and r > 0:
                                continue
                            left = basis[i] if a == 0 else (da.apply(basis[i]) if da is not None else None)
                            right = basis[j] if b == 0 else (db.apply(basis[j]) if db is not None else None)
                            if left is None or right is None:
                                continue
                            rhs = vec_add(rhs, defm.mus[p].eval((left, right)))
                if lhs != rhs:
                    return CheckReport(
                        False, Violation(f"order-{s} higher-derivation law k={k}", (i, j), lhs, rhs))
    return CheckReport.passed()


def _require_verified(alg: Algebra, hd: HigherDerivation, defm: Deformation) -> None:
    report = verify_deformation(alg, hd, defm)
    if not report.ok:
        raise ValueError(f"deformation does not verify: {report.violation}")


def infinitesimal(alg: Algebra, hd: HigherDerivation, defm: Deformation,
                  at_order: int = 1) -> tuple[Cochain, CheckReport]:
    """The first interesting coefficient, with its cocycle certificate.

    With ``at_order`` = r, coefficients 1..r-1 must vanish; the returned
    report certifies that coefficient r is killed by the differential, which
    must happen for verified deformations.
    """
    if not 1 <= at_order <= defm.order:
        raise ValueError(f"coefficient index {at_order} out of range 1..{defm.order}")
    _require_verified(alg, hd, defm)
    for s in range(1, at_order):
        if not defm.coefficient(s).is_zero():
            raise ValueError(f"coefficient {s} is nonzero below the requested order")
    coeff = defm.coefficient(at_order)
    mod = adjoint_bimodule(alg, hd)
    defect = differential(alg, mod, hd, coeff)
    if defect.is_zero():
        return coeff, CheckReport.passed()
    return coeff, CheckReport.failed("infinitesimal cocycle condition", (at_order,))


def _series_inverse(phis: list[Matrix]) -> list[Matrix]:
    dim = phis[0].rows
    psis = [Matrix.identity(dim)]
    for s in range(1, len(phis)):
        acc = Matrix.zeros(dim, dim)
        for q in range(1, s + 1):
            if not phis[q].is_zero():
                acc = acc + psis[s - q] * phis[q]
        psis.append(-acc)
    return psis


def _pre_slots(f: MultiMap, a: Matrix, b: Matrix) -> MultiMap:
    if not a.is_identity():
        f = f.compose_slot(0, a)
    if not b.is_identity():
        f = f.compose_slot(1, b)
    return f


def apply_gauge(defm: Deformation, gauge: GaugeMap) -> Deformation:
    """Conjugate coefficientwise: mu' = Phi^{-1} mu (Phi x Phi), d' = Phi^{-1} d Phi.

    The gauge is padded or truncated with zeros to the deformation's order;
    the inverse series is the truncated geometric series.
    """
    dim = defm.dim
    if gauge.dim != dim:
        raise ShapeError("gauge dimension differs from the deformation")
    if not gauge.phis[0].is_identity():
        raise ValueError("gauge must start at the identity")
    T = defm.order
    phis = [gauge.phis[s] if s <= gauge.order else Matrix.zeros(dim, dim)
            for s in range(T + 1)]
    psis = _series_inverse(phis)
    phi_zero = [m.is_zero() for m in phis]
    psi_zero = [m.is_zero() for m in psis]
    new_mus = []
    for s in range(T + 1):
        acc = MultiMap.zero(2, dim, dim)
        for q in range(s + 1):
            if defm.mus[q].is_zero():
                continue
            for r in range(s - q + 1):
                if phi_zero[r]:
                    continue
                for w in range(s - q - r + 1):
                    p = s - q - r - w
                    if phi_zero[w] or psi_zero[p]:
                        continue
                    term = _pre_slots(defm.mus[q], phis[r], phis[w])
                    if not psis[p].is_identity():
                        term = term.postcompose(psis[p])
                    acc = acc.add(term)
        new_mus.append(acc)
    new_dks = []
    for k in range(1, defm.rank + 1):
        series = []
        for s in range(T + 1):
            acc = Matrix.zeros(dim, dim)
            for q in range(s + 1):
                dq = defm.dks[k - 1][q]
                if dq.is_zero():
                    continue
                for r in range(s - q + 1):
                    p = s - q - r
                    if phi_zero[r] or psi_zero[p]:
                        continue
                    acc = acc + psis[p] * dq * phis[r]
            series.append(acc)
        new_dks.append(tuple(series))
    return Deformation(T, tuple(new_mus), tuple(new_dks))


def gauge_inverse(gauge: GaugeMap) -> GaugeMap:
    """Truncated inverse series; composing back gives the identity mod t^{T+1}."""
    if not gauge.phis[0].is_identity():
        raise ValueError("gauge must start at the identity")
    return GaugeMap(gauge.order, tuple(_series_inverse(list(gauge.phis))))


def gauge_compose(first: GaugeMap, second: GaugeMap) -> GaugeMap:
    """The gauge acting like `first` followed by `second` (series product)."""
    order = min(first.order, second.order)
    dim = first.dim
    phis = []
    for s in range(order + 1):
        acc = Matrix.zeros(dim, dim)
        for p in range(s + 1):
            a, b = first.phis[p], second.phis[s - p]
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        phis.append(acc)
    return GaugeMap(order, tuple(phis))


def obstruction(alg: Algebra, hd: HigherDerivation, defm: Deformation) -> Cochain:
    """All known terms of the order-(n+1) equations, as a 3-cochain.

    A candidate next coefficient extends the deformation exactly when its
    differential equals this cochain.  The mixed sum keeps every term whose
    coefficient indices stay at or below the stored order, including those
    with an index-zero slot.
    """
    _require_verified(alg, hd, defm)
    d = alg.dim
    n = defm.order
    basis = [alg.basis_vector(i) for i in range(d)]
    main_values: list[Fraction] = []
    for i, j, l in itertools.product(range(d), repeat=3):
        acc = (ZERO,) * d
        for p in range(1, n + 1):
            q = n + 1 - p
            if not 1 <= q <= n:
                continue
            left = defm.mus[p].eval((defm.mus[q].value_at((i, j)), basis[l]))
            right = defm.mus[p].eval((basis[i], defm.mus[q].value_at((j, l))))
            acc = vec_add(acc, tuple(x - y for x, y in zip(left, right)))
        main_values.extend(acc)
    main = MultiMap(3, d, d, tuple(main_values))
    parts = []
    for k in range(1, defm.rank + 1):
        values: list[Fraction] = []
        for i, j in itertools.product(range(d), repeat=2):
            acc = [ZERO] * d
            for p in range(1, n + 1):
                q = n + 1 - p
                if not 1 <= q <= n:
                    continue
                term = defm.dks[k - 1][p].apply(defm.mus[q].value_at((i, j)))
                for b in range(d):
                    if term[b]:
                        acc[b] += term[b]
            for a in range(k + 1):
                bb = k - a
                for p in range(n + 1):
                    for q in range(n + 1):
                        r = n + 1 - p - q
                        if not 0 <= r <= n:
                            continue
                        if a == 0 and q > 0:
                            continue
                        if bb == 0 and r > 0:
                            continue
                        da = defm.dcoeff(a, q)
                        db = defm.dcoeff(bb, r)
                        left = basis[i] if a == 0 else (da.apply(basis[i]) if da is not None else None)
                        right = basis[j] if bb == 0 else (db.apply(basis[j]) if db is not None else None)
                        if left is None or right is None:
                            continue
                        term = defm.mus[p].eval((left, right))
                        for b in range(d):
                            if term[b]:
                                acc[b] -= term[b]
            values.extend(acc)
        parts.append(MultiMap(2, d, d, tuple(values)))
    return Cochain(main, tuple(parts))


@dataclass(frozen=True)
class ExtendOutcome:
    """Next-order candidate when one exists; the obstruction either way."""

    candidate: Cochain | None
    obstruction: Cochain


def try_extend(alg: Algebra, hd: HigherDerivation, defm: Deformation) -> ExtendOutcome:
    """Solve for a next coefficient; absence certifies a fresh obstruction class."""
    ob = obstruction(alg, hd, defm)
    mod = adjoint_bimodule(alg, hd)
    mat = differential_matrix(alg, mod, hd, 2)
    sol = solve_affine(mat, cochain_to_vector(ob))
    if sol is None:
        return ExtendOutcome(None, ob)
    cand = vector_to_cochain(alg.dim, alg.dim, hd.rank, 2, sol)
    return ExtendOutcome(cand, ob)


def extend_deformation(defm: Deformation, candidate: Cochain) -> Deformation:
    """Append a next-order coefficient family."""
    if candidate.n != 2 or len(candidate.parts) != defm.rank:
        raise ShapeError("candidate must be a 2-cochain with one part per derivation map")
    mus = defm.mus + (candidate.main,)
    dks = tuple(defm.dks[k] + (multimap_to_matrix(candidate.parts[k]),)
                for k in range(defm.rank))
    return Deformation(defm.order + 1, mus, dks)


def truncate_deformation(defm: Deformation, order: int) -> Deformation:
    if order > defm.order:
        raise ValueError("cannot truncate to a higher order")
    return Deformation(order, defm.mus[:order + 1],
                       tuple(series[:order + 1] for series in defm.dks))


@dataclass(frozen=True)
class TrivializeOutcome:
    """Either the trivializing gauge, or the order and class that block it."""

    gauge: GaugeMap | None
    blocked_order: int | None = None
    blocking_class: Cochain | None = None


def trivialize(alg: Algebra, hd: HigherDerivation, defm: Deformation,
               max_order: int | None = None) -> TrivializeOutcome:
    """Kill coefficients from the bottom up by solving for gauge shears.

    The lowest nonzero coefficient of a verified deformation is a cocycle;
    when it is a coboundary with preimage -h, gauging by id + t^r h clears
    it without touching lower orders.  Success returns the accumulated gauge
    making the deformation trivial modulo t^{T+1}; a non-coboundary
    coefficient is returned as the blocking class.
    """
    _require_verified(alg, hd, defm)
    T = defm.order if max_order is None else max_order
    if T > defm.order:
        raise ValueError("cannot trivialize past the stored order")
    dim = alg.dim
    current = truncate_deformation(defm, T)
    acc = GaugeMap.identity(dim, T)
    mod = adjoint_bimodule(alg, hd)
    mat = differential_matrix(alg, mod, hd, 1)
    while True:
        lowest = None
        for s in range(1, T + 1):
            if not current.coefficient(s).is_zero():
                lowest = s
                break
        if lowest is None:
            return TrivializeOutcome(acc)
        coeff = current.coefficient(lowest)
        if not differential(alg, mod, hd, coeff).is_zero():
            raise RuntimeError(
                f"lowest coefficient at order {lowest} is not a cocycle; "
                "the input cannot have verified")
        target = tuple(-x for x in cochain_to_vector(coeff))
        sol = solve_affine(mat, target)
        if sol is None:
            return TrivializeOutcome(None, lowest, coeff)
        shear = multimap_to_matrix(
            vector_to_cochain(dim, dim, hd.rank, 1, sol).main)
        step = GaugeMap.single(dim, T, lowest, shear)
        current = apply_gauge(current, step)
        acc = gauge_compose(acc, step)
