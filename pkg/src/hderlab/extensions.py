"""Extensions of an algebra-with-higher-derivation pair by a bimodule.

One construction serves both flavors: a central extension is the special
case in which the bimodule actions vanish.  Total spaces always live in
normal form on the coordinates of A followed by the coordinates of M, with
the canonical inclusion, projection and section matrices; a square-zero
M-block carries the module structure and a 2-cocycle (psi; chi_1..chi_N)
twists the product and the derivation maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebras import Algebra, Bimodule, CheckReport
from .cochain import (
    Cochain, MultiMap, NotACocycleError, cochain_to_vector, cohomology,
    differential, differential_matrix, is_coboundary, multimap_to_matrix,
)
from .exactlin import Matrix, ShapeError, Vector, ZERO, ONE, rank
from .hder import AssHDerPair, HigherDerivation


class SectionError(ValueError):
    """A claimed splitting is not one, or induces the wrong actions."""


@dataclass(frozen=True)
class TwoCocycle:
    """Candidate twisting data: a bilinear map plus N linear maps into M."""

    psi: MultiMap
    chis: tuple[MultiMap, ...]

    def __post_init__(self):
        if self.psi.arity != 2:
            raise ShapeError("psi must be bilinear")
        for chi in self.chis:
            if chi.arity != 1 or chi.dim != self.psi.dim or chi.mdim != self.psi.mdim:
                raise ShapeError("chi maps must be linear with matching dimensions")

    @classmethod
    def zero(cls, dim: int, mdim: int, nrank: int) -> "TwoCocycle":
        return cls(MultiMap.zero(2, dim, mdim),
                   tuple(MultiMap.zero(1, dim, mdim) for _ in range(nrank)))

    @classmethod
    def from_cochain(cls, c: Cochain) -> "TwoCocycle":
        if c.n != 2:
            raise ShapeError("a 2-cochain is required")
        return cls(c.main, c.parts)

    def as_cochain(self) -> Cochain:
        return Cochain(self.psi, self.chis)


@dataclass(frozen=True)
class ExtensionPair:
    """An extension in normal form, with its base data kept alongside."""

    base: AssHDerPair
    module: Bimodule
    total: AssHDerPair
    include: Matrix   # M -> E
    project: Matrix   # E -> A
    section: Matrix   # A -> E, the canonical splitting a |-> (a, 0)

    @property
    def dim(self) -> int:
        return self.base.algebra.dim

    @property
    def mdim(self) -> int:
        return self.module.mdim

    def module_part(self, v: Vector) -> Vector:
        return v[self.dim:]

    def algebra_part(self, v: Vector) -> Vector:
        return v[:self.dim]


def extension_structure(alg: Algebra, hd: HigherDerivation, mod: Bimodule,
                        z: TwoCocycle) -> AssHDerPair:
    """The A + M structure twisted by z, with no cocycle check applied.

    Verifying the result is exactly the cocycle test: the pair passes the
    algebra and higher-derivation verifiers if and only if z is killed by
    the differential.
    """
    d, md = alg.dim, mod.mdim
    big = d + md
    c = [[[ZERO] * big for _ in range(big)] for _ in range(big)]
    for i, j in itertools.product(range(d), repeat=2):
        row = c[i][j]
        for k, coeff in enumerate(alg.c[i][j]):
            if coeff:
                row[k] = coeff
        for b, coeff in enumerate(z.psi.value_at((i, j))):
            if coeff:
                row[d + b] = coeff
    for i, a in itertools.product(range(d), range(md)):
        for b, coeff in enumerate(mod.left[i][a]):
            if coeff:
                c[i][d + a][d + b] = coeff
        for b, coeff in enumerate(mod.right[a][i]):
            if coeff:
                c[d + a][i][d + b] = coeff
    labels = alg.basis_labels + tuple(f"m{a}" for a in range(md))
    total_alg = Algebra(big, tuple(tuple(tuple(r) for r in mid) for mid in c), labels)
    maps = []
    for k in range(1, hd.rank + 1):
        dk = hd.maps[k - 1]
        dkm = mod.dmaps[k - 1]
        fk = multimap_to_matrix(z.chis[k - 1])
        rows = []
        for r in range(d):
            rows.append((*dk.row(r), *([ZERO] * md)))
        for r in range(md):
            rows.append((*fk.row(r), *dkm.row(r)))
        maps.append(Matrix.from_rows(rows))
    return AssHDerPair(total_alg, HigherDerivation(hd.rank, tuple(maps)))


def _canonical_matrices(d: int, md: int) -> tuple[Matrix, Matrix, Matrix]:
    big = d + md
    include = Matrix.from_rows([[ONE if (r - d) == c else ZERO for c in range(md)]
                                for r in range(big)])
    project = Matrix.from_rows([[ONE if r == c else ZERO for c in range(big)]
                                for r in range(d)])
    section = Matrix.from_rows([[ONE if r == c else ZERO for c in range(d)]
                                for r in range(big)])
    return include, project, section


def semidirect(alg: Algebra, hd: HigherDerivation, mod: Bimodule) -> AssHDerPair:
    """(a, m)(b, n) = (ab, an + mb) with block-diagonal derivation maps."""
    return extension_structure(alg, hd, mod,
                               TwoCocycle.zero(alg.dim, mod.mdim, hd.rank))


def extension_from_cocycle(alg: Algebra, hd: HigherDerivation, mod: Bimodule,
                           z: TwoCocycle) -> ExtensionPair:
    """Build the extension twisted by z after checking z really is a cocycle.

    The error names the first violated component: the bilinear one, or the
    index k of the first failing derivation condition.
    """
    defect = differential(alg, mod, hd, z.as_cochain())
    if not defect.main.is_zero():
        raise NotACocycleError("delta_hoch of the bilinear component is nonzero")
    for k, part in enumerate(defect.parts, start=1):
        if not part.is_zero():
            raise NotACocycleError(f"derivation cocycle condition fails at k={k}")
    total = extension_structure(alg, hd, mod, z)
    include, project, section = _canonical_matrices(alg.dim, mod.mdim)
    return ExtensionPair(AssHDerPair(alg, hd), mod, total, include, project, section)


def _check_induced_actions(ext: ExtensionPair, section: Matrix) -> None:
    alg, mod = ext.base.algebra, ext.module
    total = ext.total.algebra
    for i in range(alg.dim):
        s_i = section.column(i)
        for a in range(mod.mdim):
            inc = ext.include.column(a)
            left = ext.module_part(total.mult(s_i, inc))
            if left != mod.left[i][a]:
                raise SectionError(
                    f"induced left action at ({i}, {a}) differs from the declared bimodule")
            right = ext.module_part(total.mult(inc, s_i))
            if right != mod.right[a][i]:
                raise SectionError(
                    f"induced right action at ({a}, {i}) differs from the declared bimodule")


def cocycle_from_section(ext: ExtensionPair, section: Matrix | None = None) -> TwoCocycle:
    """Twisting data read off a splitting: products and derivation defects.

    psi(a, b) = s(a) s(b) - s(ab) and chi_k(a) = d^E_k(s(a)) - s(d_k(a)),
    both landing in M.  Any linear right inverse of the projection works and
    must induce the declared bimodule actions.
    """
    s = ext.section if section is None else section
    alg, mod = ext.base.algebra, ext.module
    d, md = alg.dim, mod.mdim
    if s.rows != d + md or s.cols != d:
        raise ShapeError(f"section must be {d + md}x{d}")
    if ext.project * s != Matrix.identity(d):
        raise SectionError("matrix is not a section: p o s is not the identity")
    _check_induced_actions(ext, s)
    total = ext.total
    psi_values: list[Fraction] = []
    for i, j in itertools.product(range(d), repeat=2):
        prod = total.algebra.mult(s.column(i), s.column(j))
        lifted = s.apply(alg.basis_product(i, j))
        diff = tuple(x - y for x, y in zip(prod, lifted))
        if any(ext.algebra_part(diff)):
            raise SectionError("section defect does not land in the module part")
        psi_values.extend(ext.module_part(diff))
    psi = MultiMap(2, d, md, tuple(psi_values))
    chis = []
    for k in range(1, ext.base.hder.rank + 1):
        chi_values: list[Fraction] = []
        for i in range(d):
            diff_vec = tuple(
                x - y for x, y in zip(
                    total.hder.maps[k - 1].apply(s.column(i)),
                    s.apply(ext.base.hder.apply(k, alg.basis_vector(i)))))
            if any(ext.algebra_part(diff_vec)):
                raise SectionError("derivation defect does not land in the module part")
            chi_values.extend(ext.module_part(diff_vec))
        chis.append(MultiMap(1, d, md, tuple(chi_values)))
    return TwoCocycle(psi, tuple(chis))


def equivalence_from_cochain(h: MultiMap) -> Matrix:
    """The shear (a, m) |-> (a, m + h(a)) as a block matrix; always invertible."""
    if h.arity != 1:
        raise ShapeError("a linear map A -> M is required")
    d, md = h.dim, h.mdim
    hmat = multimap_to_matrix(h)
    rows = []
    for r in range(d):
        rows.append(tuple(ONE if c == r else ZERO for c in range(d + md)))
    for r in range(md):
        rows.append((*hmat.row(r), *(ONE if c == r else ZERO for c in range(md))))
    return Matrix.from_rows(rows)


def check_equivalence(e1: ExtensionPair, e2: ExtensionPair,
                      candidate: Matrix) -> CheckReport:
    """Is the candidate an equivalence of extensions over the same (A, M)?

    It must be an algebra morphism intertwining the derivation maps,
    restrict to the identity on M, and project to the identity on A.
    """
    if (e1.dim, e1.mdim) != (e2.dim, e2.mdim):
        raise ShapeError("extensions are not over the same base and module")
    big = e1.dim + e1.mdim
    if candidate.rows != big or candidate.cols != big:
        raise ShapeError(f"candidate must be {big}x{big}")
    if e2.project * candidate != e1.project:
        return CheckReport.failed("projects to identity on base", ())
    if candidate * e1.include != e2.include:
        return CheckReport.failed("restricts to identity on module", ())
    t1, t2 = e1.total, e2.total
    for i, j in itertools.product(range(big), repeat=2):
        lhs = candidate.apply(t1.algebra.basis_product(i, j))
        rhs = t2.algebra.mult(candidate.column(i), candidate.column(j))
        if lhs != rhs:
            return CheckReport.failed("algebra morphism", (i, j), lhs, rhs)
    for k in range(1, e1.base.hder.rank + 1):
        if t2.hder.maps[k - 1] * candidate != candidate * t1.hder.maps[k - 1]:
            return CheckReport.failed("intertwining", (k,))
    return CheckReport.passed()


def find_equivalence(e1: ExtensionPair, e2: ExtensionPair) -> Matrix | None:
    """Search for an equivalence between two extensions over the same data.

    Any equivalence has the shear normal form (a, m) |-> (a, m + h(a)), so
    existence reduces to a linear solve: the canonical section cocycles must
    differ by the coboundary of h.  Returns the shear matrix, or None when
    the extensions represent different cohomology classes.
    """
    if (e1.dim, e1.mdim) != (e2.dim, e2.mdim):
        raise ShapeError("extensions are not over the same base and module")
    alg, hd, mod = e1.base.algebra, e1.base.hder, e1.module
    z1 = cocycle_from_section(e1)
    z2 = cocycle_from_section(e2)
    h = is_coboundary(alg, mod, hd, z1.as_cochain().sub(z2.as_cochain()))
    if h is None:
        return None
    psi = equivalence_from_cochain(h.main)
    report = check_equivalence(e1, e2, psi)
    if not report.ok:
        raise RuntimeError(f"solved shear fails the equivalence check: {report.violation}")
    return psi


def classify_central(alg: Algebra, hd: HigherDerivation,
                     mod: Bimodule) -> list[tuple[TwoCocycle, ExtensionPair]]:
    """One extension per second-cohomology basis class, semidirect first.

    Central classification needs the trivial representation, so nonzero
    actions are rejected.  Representatives are chosen greedily from the
    canonical cocycle kernel basis, keeping those that grow the span of the
    coboundaries; the output order is the kernel-basis order.
    """
    if not mod.has_zero_actions():
        raise ValueError("central classification requires a bimodule with zero actions")
    report = cohomology(alg, mod, hd, 2)
    boundary = differential_matrix(alg, mod, hd, 1)
    base_rank = rank(boundary)
    chosen: list[Cochain] = []
    span_cols = [boundary.column(j) for j in range(boundary.cols)]
    for cocycle in report.cocycle_basis:
        trial = span_cols + [cochain_to_vector(c) for c in chosen] + [cochain_to_vector(cocycle)]
        if rank(Matrix.from_columns(trial)) > base_rank + len(chosen):
            chosen.append(cocycle)
        if len(chosen) == report.betti:
            break
    out = []
    zero = TwoCocycle.zero(alg.dim, mod.mdim, hd.rank)
    out.append((zero, extension_from_cocycle(alg, hd, mod, zero)))
    for c in chosen:
        z = TwoCocycle.from_cochain(c)
        out.append((z, extension_from_cocycle(alg, hd, mod, z)))
    return out
