"""JSON problem files and report payloads.

Rationals travel as strings "p/q" (or "p" when the denominator is 1), never
as floats.  Matrices are nested row lists; structure-constant tensors are
nested [i][j][k] lists; multilinear maps are flat row-major lists matching
the cochain value layout.  Parse errors carry the JSON path that failed.
"""

from __future__ import annotations

from fractions import Fraction

from .algebras import Algebra, Bimodule
from .cochain import Cochain, CohomologyReport, MultiMap
from .deform import Deformation, GaugeMap
from .exactlin import Matrix, rat, rat_str
from .extensions import ExtensionPair, TwoCocycle
from .hder import HigherDerivation


class ParseError(ValueError):
    """Malformed problem file; the message names the offending path."""


def _need(doc: dict, key: str, path: str):
    if key not in doc:
        raise ParseError(f"{path}: missing required key '{key}'")
    return doc[key]


def _int(obj, path: str) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ParseError(f"{path}: expected an integer")
    return obj


def _list(obj, path: str, length: int | None = None) -> list:
    if not isinstance(obj, list):
        raise ParseError(f"{path}: expected a list")
    if length is not None and len(obj) != length:
        raise ParseError(f"{path}: expected {length} entries, got {len(obj)}")
    return obj


def parse_rational(obj, path: str) -> Fraction:
    if isinstance(obj, float):
        raise ParseError(f"{path}: floats are not accepted; use rational strings")
    try:
        return rat(obj)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def parse_matrix(obj, rows: int, cols: int, path: str) -> Matrix:
    data = _list(obj, path, rows)
    entries = []
    for r, row in enumerate(data):
        row = _list(row, f"{path}[{r}]", cols)
        for c, x in enumerate(row):
            entries.append(parse_rational(x, f"{path}[{r}][{c}]"))
    return Matrix(rows, cols, tuple(entries))


def matrix_to_json(mat: Matrix) -> list[list[str]]:
    return [[rat_str(x) for x in mat.row(r)] for r in range(mat.rows)]


def parse_tensor3(obj, d0: int, d1: int, d2: int, path: str):
    data = _list(obj, path, d0)
    out = []
    for i, mid in enumerate(data):
        mid = _list(mid, f"{path}[{i}]", d1)
        rows = []
        for j, inner in enumerate(mid):
            inner = _list(inner, f"{path}[{i}][{j}]", d2)
            rows.append(tuple(parse_rational(x, f"{path}[{i}][{j}][{k}]")
                              for k, x in enumerate(inner)))
        out.append(tuple(rows))
    return tuple(out)


def tensor3_to_json(tensor) -> list:
    return [[[rat_str(x) for x in inner] for inner in mid] for mid in tensor]


def parse_algebra(doc, path: str = "algebra") -> Algebra:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected an object")
    dim = _int(_need(doc, "dim", path), f"{path}.dim")
    if dim < 1:
        raise ParseError(f"{path}.dim: must be >= 1")
    table = parse_tensor3(_need(doc, "table", path), dim, dim, dim, f"{path}.table")
    labels = doc.get("basis")
    if labels is None:
        labels = [f"e{i}" for i in range(dim)]
    labels = [str(x) for x in _list(labels, f"{path}.basis", dim)]
    unit = doc.get("unit")
    if unit is not None:
        unit = _int(unit, f"{path}.unit")
        if not 0 <= unit < dim:
            raise ParseError(f"{path}.unit: index {unit} out of range")
    return Algebra(dim, table, tuple(labels), unit)


def algebra_to_json(alg: Algebra) -> dict:
    doc = {"dim": alg.dim, "basis": list(alg.basis_labels),
           "table": tensor3_to_json(alg.c)}
    if alg.unit_index is not None:
        doc["unit"] = alg.unit_index
    return doc


def parse_hder(doc, dim: int, path: str = "hder") -> HigherDerivation:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected an object")
    nrank = _int(_need(doc, "rank", path), f"{path}.rank")
    if nrank < 1:
        raise ParseError(f"{path}.rank: must be >= 1")
    maps = _list(_need(doc, "maps", path), f"{path}.maps", nrank)
    return HigherDerivation(nrank, tuple(
        parse_matrix(m, dim, dim, f"{path}.maps[{k}]") for k, m in enumerate(maps)))


def hder_to_json(hd: HigherDerivation) -> dict:
    return {"rank": hd.rank, "maps": [matrix_to_json(m) for m in hd.maps]}


def parse_bimodule(doc, dim: int, nrank: int, path: str = "bimodule") -> Bimodule:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected an object")
    mdim = _int(_need(doc, "mdim", path), f"{path}.mdim")
    if mdim < 1:
        raise ParseError(f"{path}.mdim: must be >= 1")
    left = parse_tensor3(_need(doc, "left", path), dim, mdim, mdim, f"{path}.left")
    right = parse_tensor3(_need(doc, "right", path), mdim, dim, mdim, f"{path}.right")
    dmaps = _list(_need(doc, "dmaps", path), f"{path}.dmaps", nrank)
    return Bimodule(mdim, left, right, tuple(
        parse_matrix(m, mdim, mdim, f"{path}.dmaps[{k}]") for k, m in enumerate(dmaps)))


def bimodule_to_json(mod: Bimodule) -> dict:
    return {"mdim": mod.mdim, "left": tensor3_to_json(mod.left),
            "right": tensor3_to_json(mod.right),
            "dmaps": [matrix_to_json(m) for m in mod.dmaps]}


def parse_multimap(obj, arity: int, dim: int, mdim: int, path: str) -> MultiMap:
    data = _list(obj, path, dim ** arity * mdim)
    return MultiMap(arity, dim, mdim,
                    tuple(parse_rational(x, f"{path}[{i}]") for i, x in enumerate(data)))


def multimap_to_json(mm: MultiMap) -> list[str]:
    return [rat_str(x) for x in mm.values]


def parse_cochain(doc, dim: int, mdim: int, nrank: int, path: str = "cochain") -> Cochain:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected an object")
    n = _int(_need(doc, "n", path), f"{path}.n")
    if n < 1:
        raise ParseError(f"{path}.n: must be >= 1")
    main = parse_multimap(_need(doc, "main", path), n, dim, mdim, f"{path}.main")
    if n == 1:
        return Cochain(main)
    parts = _list(_need(doc, "parts", path), f"{path}.parts", nrank)
    return Cochain(main, tuple(
        parse_multimap(p, n - 1, dim, mdim, f"{path}.parts[{k}]")
        for k, p in enumerate(parts)))


def cochain_to_json(c: Cochain) -> dict:
    return {"n": c.n, "main": multimap_to_json(c.main),
            "parts": [multimap_to_json(p) for p in c.parts]}


def parse_two_cocycle(doc, dim: int, mdim: int, nrank: int, path: str) -> TwoCocycle:
    c = parse_cochain(doc, dim, mdim, nrank, path)
    if c.n != 2:
        raise ParseError(f"{path}.n: a 2-cochain is required")
    return TwoCocycle.from_cochain(c)


def parse_deformation(doc, dim: int, nrank: int, path: str = "deformation") -> Deformation:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected an object")
    order = _int(_need(doc, "order", path), f"{path}.order")
    if order < 0:
        raise ParseError(f"{path}.order: must be >= 0")
    mu_docs = _list(_need(doc, "mu", path), f"{path}.mu", order + 1)
    mus = []
    for p, t in enumerate(mu_docs):
        tensor = parse_tensor3(t, dim, dim, dim, f"{path}.mu[{p}]")
        mus.append(MultiMap(2, dim, dim,
                            tuple(x for mid in tensor for inner in mid for x in inner)))
    d_docs = _list(_need(doc, "d", path), f"{path}.d", nrank)
    dks = []
    for k, series in enumerate(d_docs):
        series = _list(series, f"{path}.d[{k}]", order + 1)
        dks.append(tuple(parse_matrix(m, dim, dim, f"{path}.d[{k}][{s}]")
                         for s, m in enumerate(series)))
    return Deformation(order, tuple(mus), tuple(dks))


def deformation_to_json(defm: Deformation) -> dict:
    d = defm.dim
    mu_json = []
    for mu in defm.mus:
        tensor = [[[rat_str(x) for x in mu.value_at((i, j))] for j in range(d)]
                  for i in range(d)]
        mu_json.append(tensor)
    return {"order": defm.order, "mu": mu_json,
            "d": [[matrix_to_json(m) for m in series] for series in defm.dks]}


def parse_tensor_section(doc, path: str = "tensor") -> tuple[int, int | None, tuple[Matrix, ...]]:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected an object")
    vdim = _int(_need(doc, "vdim", path), f"{path}.vdim")
    if vdim < 1:
        raise ParseError(f"{path}.vdim: must be >= 1")
    degree = doc.get("degree")
    if degree is not None:
        degree = _int(degree, f"{path}.degree")
    theta_docs = _list(_need(doc, "thetas", path), f"{path}.thetas")
    if not theta_docs:
        raise ParseError(f"{path}.thetas: at least one map is required")
    thetas = tuple(parse_matrix(m, vdim, vdim, f"{path}.thetas[{k}]")
                   for k, m in enumerate(theta_docs))
    return vdim, degree, thetas


def gauge_to_json(gauge: GaugeMap) -> dict:
    return {"order": gauge.order, "phis": [matrix_to_json(m) for m in gauge.phis]}


def extension_to_json(ext: ExtensionPair) -> dict:
    return {
        "total": {"algebra": algebra_to_json(ext.total.algebra),
                  "hder": hder_to_json(ext.total.hder)},
        "i": matrix_to_json(ext.include),
        "p": matrix_to_json(ext.project),
        "s": matrix_to_json(ext.section),
    }


def two_cocycle_to_json(z: TwoCocycle) -> dict:
    return cochain_to_json(z.as_cochain())


def cohomology_to_json(rep: CohomologyReport) -> dict:
    return {
        "degree": rep.degree,
        "dim_cochains": rep.dim_cochains,
        "dim_cocycles": rep.dim_cocycles,
        "dim_coboundaries": rep.dim_coboundaries,
        "betti": rep.betti,
        "cocycle_basis": [cochain_to_json(c) for c in rep.cocycle_basis],
    }


def check_report_to_json(report) -> dict:
    doc = {"ok": report.ok}
    if report.violation is not None:
        doc["violation"] = str(report.violation)
    return doc
