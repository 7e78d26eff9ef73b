"""Presentation files and reports.

A presentation file is JSON::

    {
      "schema_version": 1,
      "name": "k[x,y]",
      "field": "rational",
      "generators": ["x", "y"],
      "relations": [
        [{"coefficient": "1", "word": ["x", "y"]},
         {"coefficient": "-1", "word": ["y", "x"]}]
      ],
      "twisting": {
        "presentation": {"generators": ["z"], "relations": []},
        "sigma": [["1"]]
      }
    }

A word is a list of two generator names, or a two-character string when
all names are single characters.  ``sigma`` lists the rows of the matrix
``B^1 (x) A^1 -> A^1 (x) B^1`` in the Kronecker bases ``b_i (x) a_j`` and
``a_k (x) b_l``.  Instead of ``sigma`` a twisting block may carry a
``family`` of degree-one matrices ``{"n": n, "degree_one": [[M_ij]],
"degree_zero": [[c_ij]]}`` twisting the tensor algebra on ``n`` generators
past the algebra of the file.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from json.decoder import JSONArray, JSONObject
from json.scanner import py_make_scanner

from .exceptions import InputError
from .graded import QuadraticPresentation
from .linalg import Field, Matrix, kron_all

__all__ = ["SCHEMA_VERSION", "REPORT_SCHEMA_VERSION", "ProblemFile", "TwistBlock",
           "FamilyBlock", "parse_problem", "load_problem", "input_digest", "dump_report",
           "presentation_to_json", "family_degree_matrices"]

SCHEMA_VERSION = 1
REPORT_SCHEMA_VERSION = 1


class _PositionDecoder(json.JSONDecoder):
    """Decoder that records where each object and array starts."""

    def __init__(self):
        super().__init__()
        self.positions = {}

        def parse_object(s_and_end, *args, **kw):
            obj, end = JSONObject(s_and_end, *args, **kw)
            self.positions[id(obj)] = s_and_end[1] - 1
            return obj, end

        def parse_array(s_and_end, *args, **kw):
            arr, end = JSONArray(s_and_end, *args, **kw)
            self.positions[id(arr)] = s_and_end[1] - 1
            return arr, end

        self.parse_object = parse_object
        self.parse_array = parse_array
        self.scan_once = py_make_scanner(self)


@dataclass
class FamilyBlock:
    n: int
    degree_one: list
    degree_zero: list


@dataclass
class TwistBlock:
    presentation: QuadraticPresentation | None
    sigma: Matrix | None = None
    family: FamilyBlock | None = None


@dataclass
class ProblemFile:
    field: Field
    presentation: QuadraticPresentation
    twisting: TwistBlock | None
    digest: str
    path: str | None = None


class _Reader:
    def __init__(self, text: str, path: str | None, positions: dict):
        self.text, self.path, self.positions = text, path, positions

    def error(self, message: str, node=None, where: str = "") -> InputError:
        line = col = None
        pos = self.positions.get(id(node)) if node is not None else None
        if pos is not None:
            line = self.text.count("\n", 0, pos) + 1
            col = pos - self.text.rfind("\n", 0, pos)
        if where:
            message = f"{where}: {message}"
        return InputError(message, line=line, column=col, path=self.path)

    def coefficient(self, field: Field, value, node, where: str):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise self.error(f"coefficient must be an integer or a 'p/q' string, got {value!r}",
                             node, where)
        try:
            return field.element(value.strip() if isinstance(value, str) else value)
        except (ValueError, ZeroDivisionError) as exc:
            raise self.error(f"coefficient {value!r} does not parse in {field.name}: {exc}",
                             node, where) from None

    def word(self, gens: list, value, node, where: str) -> tuple:
        if isinstance(value, str):
            if all(len(g) == 1 for g in gens):
                value = list(value)
            else:
                value = value.split()
        if not isinstance(value, list):
            raise self.error("word must be a list of generator names", node, where)
        if len(value) != 2:
            raise self.error(f"relation words must have length exactly 2, got {len(value)}",
                             node, where)
        out = []
        for g in value:
            if g not in gens:
                raise self.error(f"unknown generator {g!r}", node, where)
            out.append(g)
        return tuple(out)

    def presentation(self, field: Field, obj, where: str, name: str = "") -> QuadraticPresentation:
        if not isinstance(obj, dict):
            raise self.error("presentation must be an object", obj, where.rstrip("."))
        gens = obj.get("generators")
        if not isinstance(gens, list) or not all(isinstance(g, str) and g for g in gens):
            raise self.error("'generators' must be a list of non-empty strings", obj,
                             where.rstrip("."))
        if len(set(gens)) != len(gens):
            raise self.error("duplicate generator names", gens, where.rstrip("."))
        rels = obj.get("relations", [])
        if not isinstance(rels, list):
            raise self.error("'relations' must be a list", obj, where.rstrip("."))
        parsed = []
        for r, rel in enumerate(rels):
            w = f"{where}relations[{r}]"
            if not isinstance(rel, list):
                raise self.error("a relation is a list of terms", rel, w)
            terms = {}
            for t, term in enumerate(rel):
                wt = f"{w}[{t}]"
                if not isinstance(term, dict) or set(term) != {"coefficient", "word"}:
                    raise self.error("a term is {\"coefficient\": ..., \"word\": ...}", term, wt)
                word = self.word(gens, term["word"], term, wt)
                c = self.coefficient(field, term["coefficient"], term, wt)
                terms[word] = terms.get(word, field.element(0)) + c
            parsed.append(terms)
        return QuadraticPresentation.from_relations(field, gens, parsed,
                                                    name=obj.get("name", name) or "")

    def matrix(self, field: Field, rows, nrows: int, ncols: int, where: str) -> Matrix:
        if (not isinstance(rows, list) or len(rows) != nrows
                or not all(isinstance(r, list) and len(r) == ncols for r in rows)):
            raise self.error(f"expected a {nrows}x{ncols} matrix", rows, where)
        return Matrix.from_rows(field, [[self.coefficient(field, v, r, where) for v in r]
                                        for r in rows])

    def twisting(self, field: Field, obj, pA: QuadraticPresentation) -> TwistBlock:
        where = "twisting"
        if not isinstance(obj, dict):
            raise self.error("twisting block must be an object", obj, where)
        if ("sigma" in obj) == ("family" in obj):
            raise self.error("twisting block needs exactly one of 'sigma' or 'family'", obj, where)
        if "sigma" in obj:
            if "presentation" not in obj:
                raise self.error("'sigma' needs a second 'presentation'", obj, where)
            pB = self.presentation(field, obj["presentation"], "twisting.presentation.")
            nA, nB = pA.n_gen, pB.n_gen
            s = self.matrix(field, obj["sigma"], nA * nB, nB * nA, "twisting.sigma")
            return TwistBlock(pB, sigma=s)
        fam = obj["family"]
        if not isinstance(fam, dict) or not isinstance(fam.get("n"), int) or fam["n"] < 1:
            raise self.error("family needs a positive integer 'n'", fam, where)
        n, nA = fam["n"], pA.n_gen
        d1 = fam.get("degree_one")
        if not isinstance(d1, list) or len(d1) != n or not all(
                isinstance(r, list) and len(r) == n for r in d1):
            raise self.error(f"'degree_one' must be an {n}x{n} array of matrices", fam, where)
        ones = [[self.matrix(field, d1[i][j], nA, nA, f"family.degree_one[{i}][{j}]")
                 for j in range(n)] for i in range(n)]
        d0 = fam.get("degree_zero")
        if d0 is None:
            zeros = [[field.element(int(i == j)) for j in range(n)] for i in range(n)]
        else:
            zeros = self.matrix(field, d0, n, n, "family.degree_zero").rows()
        return TwistBlock(None, family=FamilyBlock(n, ones, zeros))


def input_digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_problem(text: str, path: str | None = None, field_override: str | None = None
                  ) -> ProblemFile:
    """Parse a presentation file; raises :class:`InputError` with a position."""
    dec = _PositionDecoder()
    try:
        obj = dec.decode(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno,
                         path=path) from None
    rd = _Reader(text, path, dec.positions)
    if not isinstance(obj, dict):
        raise rd.error("top level must be an object", obj)
    version = obj.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise rd.error(f"unsupported schema_version {version!r}", obj)
    known = {"schema_version", "name", "field", "generators", "relations", "twisting"}
    extra = sorted(set(obj) - known)
    if extra:
        raise rd.error(f"unknown keys {extra}", obj)
    fname = field_override or obj.get("field", "rational")
    try:
        field = Field.parse(fname)
    except (ValueError, TypeError) as exc:
        raise rd.error(f"bad field {fname!r}: {exc}", obj) from None
    pres = rd.presentation(field, obj, "")
    tw = rd.twisting(field, obj["twisting"], pres) if "twisting" in obj else None
    return ProblemFile(field, pres, tw, input_digest(text), path)


def load_problem(path: str, field_override: str | None = None) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read input: {exc.strerror}", path=path) from None
    return parse_problem(text, path, field_override)


def presentation_to_json(p: QuadraticPresentation) -> dict:
    """Serialize a presentation; each relation is one basis vector of ``W``."""
    f, g = p.field, p.generators
    rels = []
    basis = p.relations.basis
    for col in range(basis.ncols):
        terms = []
        for idx, v in enumerate(basis.column(col)):
            if v != 0:
                i, j = divmod(idx, len(g))
                terms.append({"coefficient": f.format(v), "word": [g[i], g[j]]})
        rels.append(terms)
    out = {"schema_version": SCHEMA_VERSION, "field": f.name, "generators": list(g),
           "relations": rels}
    if p.name:
        out["name"] = p.name
    return out


def family_degree_matrices(field: Field, block: FamilyBlock, algebra, N: int):
    """Per-degree matrices of the endomorphisms ``sigma_ij`` from their degree-one data.

    Degree ``d >= 2`` uses the multiplicativity rule on ``V^{(x)d}`` followed
    by the projection to ``A^d``; degree zero is taken as given.
    """
    n = block.n
    nA = algebra.dims[1] if algebra.max_degree >= 1 else 0
    out = [[[Matrix.from_rows(field, [[block.degree_zero[i][j]]])] for j in range(n)]
           for i in range(n)]
    if N < 1:
        return out
    for d in range(1, N + 1):
        for i in range(n):
            for j in range(n):
                if d == 1:
                    out[i][j].append(block.degree_one[i][j])
                    continue
                acc = Matrix.zeros(field, nA ** d, nA ** d)
                for path in _paths(n, i, j, d):
                    acc = acc + kron_all(*[block.degree_one[a][b] for a, b in path])
                out[i][j].append(algebra.projections[d] @ acc @ algebra.sections[d])
    return out


def _paths(n: int, i: int, j: int, d: int):
    """Index chains ``(i, k1), (k1, k2), ..., (k_{d-1}, j)``."""
    if d == 1:
        yield ((i, j),)
        return
    for k in range(n):
        for rest in _paths(n, k, j, d - 1):
            yield ((i, k),) + rest


def dump_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    return _text_report(report)


def _text_report(report: dict) -> str:
    lines = [f"schema_version: {report['schema_version']}",
             f"input_digest: {report['input_digest']}"]
    for section in ("dims", "exactness_table", "verdicts", "timings"):
        body = report.get(section) or {}
        lines.append(f"{section}:")
        if not body:
            lines.append("  (none)")
        for key, val in body.items():
            lines.append(f"  {key}: {_text_value(val)}")
    return "\n".join(lines) + "\n"


def _text_value(v) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    return str(v)
