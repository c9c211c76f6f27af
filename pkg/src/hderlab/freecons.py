"""Free constructions: induced maps on a truncated tensor algebra, the
universal property of the resulting pair, and the commutator bridge to
Lie-algebra higher derivations.

The tensor algebra here is truncated by the graded ideal of words longer
than ``max_degree``: concatenation that overflows the bound is zero.  That
quotient is an honest associative algebra, and the induced maps descend to
it because they preserve word length.  Words are enumerated by length and
then lexicographically, with the empty word (the unit) first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebras import Algebra, CheckReport, Tensor3, Violation
from .exactlin import Matrix, ShapeError, Vector, ZERO, ONE, vec_add
from .hder import AssHDerPair, HigherDerivation

Word = tuple[int, ...]


@dataclass(frozen=True)
class TruncatedTensorAlgebra:
    vdim: int
    max_degree: int
    words: tuple[Word, ...]
    algebra: Algebra

    def word_index(self, w: Word) -> int:
        return self.words.index(w)


@dataclass(frozen=True)
class LieHDerPair:
    """Lie algebra by an antisymmetric bracket tensor, plus maps phi_1..phi_N."""

    dim: int
    bracket: Tensor3
    maps: tuple[Matrix, ...]

    def bracket_vec(self, x: Vector, y: Vector) -> Vector:
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            bi = self.bracket[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                coeff = xi * yj
                for k, bijk in enumerate(bi[j]):
                    if bijk:
                        out[k] += coeff * bijk
        return tuple(out)

    def map_at(self, k: int) -> Matrix:
        if k == 0:
            return Matrix.identity(self.dim)
        return self.maps[k - 1]

    def basis_vector(self, i: int) -> Vector:
        return tuple(ONE if j == i else ZERO for j in range(self.dim))


def _enumerate_words(vdim: int, max_degree: int) -> tuple[Word, ...]:
    words: list[Word] = []
    for length in range(max_degree + 1):
        words.extend(itertools.product(range(vdim), repeat=length))
    return tuple(words)


def _word_label(w: Word) -> str:
    if not w:
        return "1"
    return "⊗".join(f"v{i}" for i in w)


def build_tensor_algebra(vdim: int, max_degree: int) -> TruncatedTensorAlgebra:
    """Words of length <= max_degree under concatenation, overflow to zero."""
    if vdim < 1 or max_degree < 1:
        raise ShapeError("need vdim >= 1 and max_degree >= 1")
    words = _enumerate_words(vdim, max_degree)
    index = {w: i for i, w in enumerate(words)}
    n = len(words)
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i, u in enumerate(words):
        for j, w in enumerate(words):
            if len(u) + len(w) <= max_degree:
                c[i][j][index[u + w]] = ONE
    alg = Algebra(n, tuple(tuple(tuple(row) for row in mid) for mid in c),
                  tuple(_word_label(w) for w in words), unit_index=0)
    return TruncatedTensorAlgebra(vdim, max_degree, words, alg)


def _compositions(total: int, parts: int):
    """Ordered tuples of `parts` positive integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def induced_tensor_hder(vdim: int, max_degree: int,
                        thetas: tuple[Matrix, ...]) -> tuple[TruncatedTensorAlgebra, HigherDerivation]:
    """Extend maps on V to the truncated tensor algebra.

    The k-th induced map sends a word to the sum, over every way of
    distributing a composition (p_1, ..., p_s) of k onto s chosen slots
    i_1 < ... < i_s, of the word with theta_{p_l} applied at slot i_l.  It
    preserves word length, vanishes on the empty word, and the result is a
    higher derivation on the truncation.
    """
    rank = len(thetas)
    if rank < 1:
        raise ShapeError("need at least one map")
    for k, th in enumerate(thetas, start=1):
        if th.rows != vdim or th.cols != vdim:
            raise ShapeError(f"theta {k} is {th.rows}x{th.cols}, expected {vdim}x{vdim}")
    tta = build_tensor_algebra(vdim, max_degree)
    index = {w: i for i, w in enumerate(tta.words)}
    n = len(tta.words)
    maps = []
    for k in range(1, rank + 1):
        cols: list[Vector] = []
        for w in tta.words:
            out = [ZERO] * n
            length = len(w)
            for s in range(1, min(length, k) + 1):
                for comp in _compositions(k, s):
                    for slots in itertools.combinations(range(length), s):
                        _accumulate_replacements(out, w, slots, comp, thetas, index)
            cols.append(tuple(out))
        maps.append(Matrix.from_columns(cols))
    return tta, HigherDerivation(rank, tuple(maps))


def _accumulate_replacements(out, w: Word, slots, comp, thetas, index) -> None:
    choices = []
    for slot, p in zip(slots, comp):
        th = thetas[p - 1]
        letter = w[slot]
        nonzero = [(b, th.entry(b, letter)) for b in range(th.rows) if th.entry(b, letter)]
        if not nonzero:
            return
        choices.append((slot, nonzero))
    for picks in itertools.product(*(nz for _, nz in choices)):
        coeff = ONE
        new = list(w)
        for (slot, _), (b, val) in zip(choices, picks):
            coeff *= val
            new[slot] = b
        out[index[tuple(new)]] += coeff


@dataclass(frozen=True)
class UniversalExtensionReport:
    ok: bool
    violation: Violation | None
    map: Matrix
    unit_handling: str  # "mapped-to-unit" or "degree-zero-skipped"


def universal_extension(tta: TruncatedTensorAlgebra, thetas: tuple[Matrix, ...],
                        target: AssHDerPair, f: Matrix) -> UniversalExtensionReport:
    """Extend a compatible map on generators to words, and check it.

    Precondition (raised on failure): d_k o f = f o theta_k for all k.  The
    extension sends a word to the product of the images of its letters; the
    empty word goes to the target unit when one is declared, else to zero
    with the degree-zero checks skipped and recorded.  The report then
    asserts multiplicativity on word pairs of total degree <= max_degree and
    intertwining with the induced maps on all words.
    """
    alg, hd = target.algebra, target.hder
    if len(thetas) != hd.rank:
        raise ShapeError(f"{hd.rank} generator maps expected, got {len(thetas)}")
    if f.rows != alg.dim or f.cols != tta.vdim:
        raise ShapeError(f"generator map is {f.rows}x{f.cols}, expected {alg.dim}x{tta.vdim}")
    for k in range(1, hd.rank + 1):
        if hd.maps[k - 1] * f != f * thetas[k - 1]:
            raise ValueError(f"generator map does not intertwine at k={k}")

    unital = alg.unit_index is not None
    unit_handling = "mapped-to-unit" if unital else "degree-zero-skipped"
    zero = (ZERO,) * alg.dim
    images: list[Vector] = []
    for w in tta.words:
        if not w:
            images.append(alg.unit_vector() if unital else zero)
            continue
        acc = f.column(w[0])
        for letter in w[1:]:
            acc = alg.mult(acc, f.column(letter))
        images.append(acc)
    lifted = Matrix.from_columns(images)

    _, induced = induced_tensor_hder(tta.vdim, tta.max_degree, thetas)

    for i, u in enumerate(tta.words):
        for j, w in enumerate(tta.words):
            if len(u) + len(w) > tta.max_degree:
                continue
            if not unital and (not u or not w):
                continue
            lhs = lifted.apply(tta.algebra.basis_product(i, j))
            rhs = alg.mult(images[i], images[j])
            if lhs != rhs:
                return UniversalExtensionReport(
                    False, Violation("multiplicativity", (i, j), lhs, rhs), lifted, unit_handling)
    for k in range(1, hd.rank + 1):
        for i, w in enumerate(tta.words):
            if not unital and not w:
                continue
            lhs = hd.maps[k - 1].apply(images[i])
            rhs = lifted.apply(induced.maps[k - 1].column(i))
            if lhs != rhs:
                return UniversalExtensionReport(
                    False, Violation("intertwining", (k, i), lhs, rhs), lifted, unit_handling)
    return UniversalExtensionReport(True, None, lifted, unit_handling)


def commutator_liehder(alg: Algebra, hd: HigherDerivation) -> LieHDerPair:
    """Commutator bracket [a,b] = ab - ba with the same maps."""
    d = alg.dim
    bracket = tuple(
        tuple(
            tuple(alg.c[i][j][k] - alg.c[j][i][k] for k in range(d))
            for j in range(d))
        for i in range(d))
    return LieHDerPair(d, bracket, tuple(hd.maps))


def verify_liehder(pair: LieHDerPair) -> CheckReport:
    """Antisymmetry, Jacobi, and the higher-derivation law on basis tuples."""
    d = pair.dim
    b = pair.bracket
    for i, j, k in itertools.product(range(d), repeat=3):
        if b[i][j][k] + b[j][i][k] != 0:
            return CheckReport.failed("antisymmetry", (i, j, k))
    for i, j, k in itertools.product(range(d), repeat=3):
        ei, ej, ek = (pair.basis_vector(t) for t in (i, j, k))
        total = vec_add(
            vec_add(pair.bracket_vec(pair.bracket_vec(ei, ej), ek),
                    pair.bracket_vec(pair.bracket_vec(ej, ek), ei)),
            pair.bracket_vec(pair.bracket_vec(ek, ei), ej))
        if any(total):
            return CheckReport.failed("jacobi identity", (i, j, k), total, (ZERO,) * d)
    for k in range(1, len(pair.maps) + 1):
        for i, j in itertools.product(range(d), repeat=2):
            ei, ej = pair.basis_vector(i), pair.basis_vector(j)
            lhs = pair.maps[k - 1].apply(pair.bracket_vec(ei, ej))
            rhs = (ZERO,) * d
            for p in range(k + 1):
                rhs = vec_add(rhs, pair.bracket_vec(pair.map_at(p).apply(ei),
                                                    pair.map_at(k - p).apply(ej)))
            if lhs != rhs:
                return CheckReport.failed("lie higher derivation identity", (k, i, j), lhs, rhs)
    return CheckReport.passed()
