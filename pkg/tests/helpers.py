"""Shared generators, fixture menus, and independent oracles for the tests.

The oracles here deliberately avoid the operators under test: second
cohomology is recomputed from the raw extension-law defects, and coboundary
probes use the section-difference formulas directly.
"""

from __future__ import annotations

import random
from fractions import Fraction

import hderlab as H
from hderlab import samples
from hderlab.exactlin import ZERO

# ---------------------------------------------------------------- generators


def rand_fraction(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2, 3)))


def rand_vector(rng: random.Random, n: int) -> tuple:
    return tuple(rand_fraction(rng) for _ in range(n))


def rand_matrix(rng: random.Random, rows: int, cols: int | None = None) -> H.Matrix:
    cols = rows if cols is None else cols
    return H.Matrix(rows, cols, tuple(rand_fraction(rng) for _ in range(rows * cols)))


def rand_multimap(rng: random.Random, arity: int, dim: int, mdim: int) -> H.MultiMap:
    return H.MultiMap(arity, dim, mdim,
                      tuple(rand_fraction(rng) for _ in range(dim ** arity * mdim)))


def rand_cochain(rng: random.Random, dim: int, mdim: int, nrank: int, n: int) -> H.Cochain:
    if n == 1:
        return H.Cochain(rand_multimap(rng, 1, dim, mdim))
    return H.Cochain(rand_multimap(rng, n, dim, mdim),
                     tuple(rand_multimap(rng, n - 1, dim, mdim) for _ in range(nrank)))


def rand_gauge(rng: random.Random, dim: int, order: int) -> H.GaugeMap:
    return H.GaugeMap(order, (H.Matrix.identity(dim),
                              *(rand_matrix(rng, dim) for _ in range(order))))


# ------------------------------------------------------------ fixture menus


def pair_fixtures() -> list[tuple[str, H.Algebra, H.HigherDerivation]]:
    """Verified pairs across dimensions 1..3 and ranks 1..3."""
    rng = random.Random(90125)
    d2 = samples.dual_numbers()
    qq = samples.product_of_fields()
    p3 = samples.truncated_polynomials(3)
    z1 = samples.zero_algebra(1)
    z2 = samples.zero_algebra(2)
    out = [
        ("dual/ordinary2", d2, samples.dual_numbers_hder(2)),
        ("dual/ordinary3", d2, samples.dual_numbers_hder(3)),
        ("split/zero1", qq, H.HigherDerivation.zero(2, 1)),
        ("split/zero2", qq, H.HigherDerivation.zero(2, 2)),
        ("poly3/divided2", p3, H.ordinary_hder(p3, samples.euler_matrix(3), 2)),
        # any maps at all are a higher derivation on a zero-multiplication algebra
        ("nil1/random3", z1, H.HigherDerivation(3, tuple(rand_matrix(rng, 1) for _ in range(3)))),
        ("nil2/random2", z2, H.HigherDerivation(2, tuple(rand_matrix(rng, 2) for _ in range(2)))),
    ]
    for name, alg, hd in out:
        assert H.verify_hder(alg, hd).ok, name
    return out


def coefficient_fixtures() -> list[tuple[str, H.Algebra, H.HigherDerivation, H.Bimodule]]:
    """Pairs with both adjoint and trivial-with-random-dmaps coefficients."""
    rng = random.Random(5150)
    out = []
    for name, alg, hd in pair_fixtures():
        out.append((f"{name}/adjoint", alg, hd, H.adjoint_bimodule(alg, hd)))
        mdim = 1 if alg.dim >= 3 else 2
        dmaps = tuple(rand_matrix(rng, mdim) for _ in range(hd.rank))
        out.append((f"{name}/trivial{mdim}", alg, hd,
                    H.trivial_bimodule(alg, mdim, dmaps)))
    return out


# ------------------------------------------------------- independent oracles


def raw_cocycle_defects(alg: H.Algebra, hd: H.HigherDerivation, mod: H.Bimodule,
                        z: H.TwoCocycle) -> tuple:
    """Defects of the extension laws, straight from their displayed forms.

    Associativity defect on basis triples:
        psi(i,j).e_l + psi(ij, l) - e_i.psi(j,l) - psi(i, jl)
    and for each k the derivation-law defect on basis pairs:
        d_k^M(psi(i,j)) + chi_k(ij)
           - sum_{p+q=k} [ d_p(e_i).chi_q(e_j) + chi_p(e_i).d_q(e_j) + psi(d_p e_i, d_q e_j) ]
    with the index-0 member of the chi family treated as zero.
    """
    d = alg.dim
    defects = []
    for i in range(d):
        for j in range(d):
            for l in range(d):
                acc = list(mod.act_right(z.psi.value_at((i, j)), alg.basis_vector(l)))
                for r, coeff in enumerate(alg.c[i][j]):
                    if coeff:
                        for b, x in enumerate(z.psi.value_at((r, l))):
                            acc[b] += coeff * x
                term = mod.act_left(alg.basis_vector(i), z.psi.value_at((j, l)))
                for b, x in enumerate(term):
                    acc[b] -= x
                for r, coeff in enumerate(alg.c[j][l]):
                    if coeff:
                        for b, x in enumerate(z.psi.value_at((i, r))):
                            acc[b] -= coeff * x
                defects.extend(acc)
    for k in range(1, hd.rank + 1):
        for i in range(d):
            for j in range(d):
                acc = list(mod.dmaps[k - 1].apply(z.psi.value_at((i, j))))
                for r, coeff in enumerate(alg.c[i][j]):
                    if coeff:
                        for b, x in enumerate(z.chis[k - 1].value_at((r,))):
                            acc[b] += coeff * x
                for p in range(k + 1):
                    q = k - p
                    dpi = hd.apply(p, alg.basis_vector(i))
                    dqj = hd.apply(q, alg.basis_vector(j))
                    if q >= 1:
                        term = mod.act_left(dpi, z.chis[q - 1].value_at((j,)))
                        for b, x in enumerate(term):
                            acc[b] -= x
                    if p >= 1:
                        term = mod.act_right(z.chis[p - 1].value_at((i,)), dqj)
                        for b, x in enumerate(term):
                            acc[b] -= x
                    term = z.psi.eval((dpi, dqj))
                    for b, x in enumerate(term):
                        acc[b] -= x
                defects.extend(acc)
    return tuple(defects)


def raw_coboundary(alg: H.Algebra, hd: H.HigherDerivation, mod: H.Bimodule,
                   h: H.MultiMap) -> H.TwoCocycle:
    """Section-difference twisting data of a linear map, from the raw formulas.

    psi_h(a, b) = a.h(b) - h(ab) + h(a).b  and
    chi_{h,k}(a) = d_k^M(h(a)) - h(d_k(a)).
    """
    d, md = alg.dim, mod.mdim
    psi_vals = []
    for i in range(d):
        for j in range(d):
            acc = list(mod.act_left(alg.basis_vector(i), h.value_at((j,))))
            for r, coeff in enumerate(alg.c[i][j]):
                if coeff:
                    for b, x in enumerate(h.value_at((r,))):
                        acc[b] -= coeff * x
            term = mod.act_right(h.value_at((i,)), alg.basis_vector(j))
            for b, x in enumerate(term):
                acc[b] += x
            psi_vals.extend(acc)
    chis = []
    for k in range(1, hd.rank + 1):
        vals = []
        for i in range(d):
            acc = list(mod.dmaps[k - 1].apply(h.value_at((i,))))
            dk_ei = hd.apply(k, alg.basis_vector(i))
            term = h.eval((dk_ei,))
            for b, x in enumerate(term):
                acc[b] -= x
            vals.extend(acc)
        chis.append(H.MultiMap(1, d, md, tuple(vals)))
    return H.TwoCocycle(H.MultiMap(2, d, md, tuple(psi_vals)), tuple(chis))


def betti2_by_rank_count(alg: H.Algebra, hd: H.HigherDerivation,
                         mod: H.Bimodule) -> int:
    """Second cohomology dimension from raw defect and coboundary probes."""
    d, md, nrank = alg.dim, mod.mdim, hd.rank
    n2 = d * d * md + nrank * d * md
    cocycle_cols = []
    for pos in range(n2):
        vec = [ZERO] * n2
        vec[pos] = Fraction(1)
        z = H.TwoCocycle.from_cochain(
            H.vector_to_cochain(d, md, nrank, 2, tuple(vec)))
        cocycle_cols.append(raw_cocycle_defects(alg, hd, mod, z))
    constraint = H.Matrix.from_columns(cocycle_cols)
    dim_z = n2 - H.rank(constraint)
    n1 = d * md
    boundary_cols = []
    for pos in range(n1):
        vec = [ZERO] * n1
        vec[pos] = Fraction(1)
        h = H.MultiMap(1, d, md, tuple(vec))
        boundary_cols.append(H.cochain_to_vector(
            raw_coboundary(alg, hd, mod, h).as_cochain()))
    dim_b = H.rank(H.Matrix.from_columns(boundary_cols))
    return dim_z - dim_b


def cochains_equal(a: H.Cochain, b: H.Cochain) -> bool:
    return a.main.values == b.main.values and len(a.parts) == len(b.parts) and \
        all(x.values == y.values for x, y in zip(a.parts, b.parts))
