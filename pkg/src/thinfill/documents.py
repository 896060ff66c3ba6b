"""The flat text document format shared by the library and the CLI.

One human-writable line-based format with an explicit version header; the
first line is ``thinfill 1``.  Keys are positional words, the payload comes
after a colon.  Matrices are written with an explicit shape, rows separated
by semicolons: ``diff 1 = 2x1 [ -1 ; 1 ]``.

Kinds: simplicial_set, chain_complex, crossed_complex, t_complex,
group_presentation.  Serialization preserves the stored order of cells and
generators, so parse -> serialize -> parse is the identity on documents.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import ChainComplex
from .crossed import (
    AbGrp,
    CrossedComplex,
    FiniteGroupoid,
    FiniteGrp,
    MatrixHom,
    TableHom,
)
from .errors import DocumentError
from .intlinalg import IntMatrix
from .presentations import GroupPresentation
from .sset import DegenerateExpr, SimplicialSet
from .tcomplex import TComplex

FORMAT_VERSION = 1
KINDS = ("simplicial_set", "chain_complex", "crossed_complex", "t_complex",
         "group_presentation")


@dataclass
class Document:
    kind: str
    payload: object
    format_version: int = FORMAT_VERSION


# low-level helpers


def _matrix_to_text(m: IntMatrix) -> str:
    rows = " ; ".join(" ".join(str(x) for x in row) for row in m.entries)
    return f"{m.rows}x{m.cols} [ {rows} ]".replace("[  ]", "[ ]")


def _matrix_from_text(text: str) -> IntMatrix:
    try:
        shape, rest = text.split("[", 1)
        rows, cols = shape.strip().split("x")
        rows, cols = int(rows), int(cols)
        body = rest.rsplit("]", 1)[0].strip()
        if not body:
            return IntMatrix.zero(rows, cols)
        data = [[int(x) for x in row.split()] for row in body.split(";")]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError
        return IntMatrix.from_rows(data, cols=cols)
    except (ValueError, IndexError) as e:
        raise DocumentError(f"malformed matrix {text!r}") from e


def _expr_to_text(e: DegenerateExpr) -> str:
    if not e.word:
        return e.base
    return " ".join(f"s{w}" for w in e.word) + " " + e.base


def _expr_from_tokens(tokens) -> DegenerateExpr:
    word = []
    for i, t in enumerate(tokens):
        if t.startswith("s") and t[1:].isdigit():
            word.append(int(t[1:]))
        else:
            if i != len(tokens) - 1:
                raise DocumentError(f"malformed simplex expression {' '.join(tokens)!r}")
            return DegenerateExpr(tuple(word), t)
    raise DocumentError(f"simplex expression missing a base cell: {' '.join(tokens)!r}")


def _elem_to_text(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(_elem_to_text(v) for v in x) + ")"
    return str(x)


def _split_top_level(body: str):
    parts = []
    depth = 0
    cur = []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    if cur or parts:
        parts.append("".join(cur))
    return parts


def _elem_from_text(t: str):
    if t.startswith("(") and t.endswith(")"):
        inner = t[1:-1]
        if not inner:
            return ()
        return tuple(_elem_from_text(p) for p in _split_top_level(inner))
    try:
        return int(t)
    except ValueError:
        return t


def _lines_of(text: str):
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            out.append(line.strip())
    return out


# simplicial sets


def serialize_sset(X: SimplicialSet, thin=None) -> str:
    lines = []
    if X.truncated and X.dim_bound is not None:
        lines.append(f"truncated: {X.dim_bound}")
    for d in sorted(X.cells.keys()):
        lines.append(f"cells {d}: " + " ".join(X.cells[d]))
    for d in sorted(X.cells.keys()):
        if d == 0:
            continue
        for c in X.cells[d]:
            for i, f in enumerate(X.faces[c]):
                lines.append(f"face {c} {i}: {_expr_to_text(f)}")
    if thin is not None:
        lines.append("thin: " + " ".join(sorted(thin)))
    return "\n".join(lines)


def parse_sset(lines, thin_allowed=False):
    cells = {}
    faces = {}
    thin = set()
    dim_bound = None
    truncated = False
    for line in lines:
        key, _, val = line.partition(":")
        parts = key.split()
        val = val.strip()
        if parts[0] == "truncated":
            dim_bound = int(val)
            truncated = True
        elif parts[0] == "cells":
            cells[int(parts[1])] = val.split()
        elif parts[0] == "face":
            name, i = parts[1], int(parts[2])
            faces.setdefault(name, {})[i] = _expr_from_tokens(val.split())
        elif parts[0] == "thin" and thin_allowed:
            thin.update(val.split())
        else:
            raise DocumentError(f"unexpected line {line!r}")
    packed = {}
    for name, fs in faces.items():
        n = max(fs) if fs else -1
        if sorted(fs) != list(range(n + 1)):
            raise DocumentError(f"cell {name!r} has missing face indices")
        packed[name] = tuple(fs[i] for i in range(n + 1))
    try:
        X = SimplicialSet(cells, packed, dim_bound, truncated)
    except ValueError as e:
        raise DocumentError(str(e)) from e
    return (X, frozenset(thin)) if thin_allowed else X


# chain complexes


def serialize_chain(C: ChainComplex) -> str:
    lines = ["gens: " + " ".join(str(g) for g in C.gens)]
    if C.labels is not None:
        for n in range(C.top + 1):
            if C.labels[n]:
                lines.append(f"labels {n}: " + " ".join(C.labels[n]))
    for n in range(C.top + 1):
        if C.rel(n).cols:
            lines.append(f"rels {n} = {_matrix_to_text(C.rel(n))}")
    for n in range(1, C.top + 1):
        if not C.diff(n).is_zero():
            lines.append(f"diff {n} = {_matrix_to_text(C.diff(n))}")
    return "\n".join(lines)


def parse_chain(lines) -> ChainComplex:
    gens = None
    labels = {}
    rels = {}
    diffs = {}
    for line in lines:
        if line.startswith("gens:"):
            gens = [int(x) for x in line.split(":", 1)[1].split()]
        elif line.startswith("labels"):
            key, _, val = line.partition(":")
            labels[int(key.split()[1])] = tuple(val.split())
        elif line.startswith("rels"):
            key, _, val = line.partition("=")
            rels[int(key.split()[1])] = _matrix_from_text(val.strip())
        elif line.startswith("diff"):
            key, _, val = line.partition("=")
            diffs[int(key.split()[1])] = _matrix_from_text(val.strip())
        else:
            raise DocumentError(f"unexpected line {line!r}")
    if gens is None:
        raise DocumentError("chain complex without a gens line")
    top = len(gens) - 1
    rel_list = [rels.get(n, IntMatrix.zero(gens[n], 0)) for n in range(top + 1)]
    diff_list = [diffs.get(n, IntMatrix.zero(gens[n - 1], gens[n])) for n in range(1, top + 1)]
    lab = None
    if labels:
        lab = [labels.get(n, ("",) * gens[n]) for n in range(top + 1)]
    try:
        return ChainComplex(gens, rel_list, diff_list, labels=lab)
    except ValueError as e:
        raise DocumentError(str(e)) from e


# crossed complexes (finite table groupoid; table or presented abelian fibers)


def serialize_crossed(C: CrossedComplex) -> str:
    g = C.groupoid
    if not isinstance(g, FiniteGroupoid):
        raise DocumentError("only table-backed groupoids serialize")
    lines = ["objects: " + " ".join(_elem_to_text(p) for p in g.objects),
             "morphisms: " + " ".join(_elem_to_text(m) for m in g.morphisms)]
    for m in g.morphisms:
        lines.append(f"source {_elem_to_text(m)}: {_elem_to_text(g.src[m])}")
        lines.append(f"target {_elem_to_text(m)}: {_elem_to_text(g.tgt[m])}")
    for p in g.objects:
        lines.append(f"identity {_elem_to_text(p)}: {_elem_to_text(g.identities[p])}")
    for (a, b), c in sorted(g.comp.items(), key=lambda kv: (repr(kv[0]))):
        lines.append(f"compose {_elem_to_text(a)} {_elem_to_text(b)}: {_elem_to_text(c)}")
    lines.append(f"top: {C.top}")
    for n in C.levels():
        for p in g.objects:
            fiber = C.fiber(n, p)
            pt = _elem_to_text(p)
            if isinstance(fiber, FiniteGrp):
                lines.append(f"fiber {n} {pt} table: "
                             + " ".join(_elem_to_text(x) for x in fiber.elements)
                             + f" | identity {_elem_to_text(fiber.identity)}")
                for a in fiber.elements:
                    for b in fiber.elements:
                        lines.append(f"fiber-mul {n} {pt} {_elem_to_text(a)} "
                                     f"{_elem_to_text(b)}: {_elem_to_text(fiber.mul(a, b))}")
            else:
                lines.append(f"fiber {n} {pt} abelian: {fiber.ngens}")
                if fiber.rel.cols:
                    lines.append(f"fiber-rels {n} {pt} = {_matrix_to_text(fiber.rel)}")
        if n == 2 and C.delta2 is not None:
            for p in g.objects:
                for x, m in sorted(C.delta2[p].items(), key=lambda kv: repr(kv[0])):
                    lines.append(f"delta2 {_elem_to_text(p)} {_elem_to_text(x)}: "
                                 f"{_elem_to_text(m)}")
        if n >= 3:
            for p in g.objects:
                h = C.deltas.get(n, {}).get(p)
                if isinstance(h, MatrixHom):
                    lines.append(f"delta {n} {_elem_to_text(p)} = {_matrix_to_text(h.mat)}")
                elif isinstance(h, TableHom):
                    for x, y in h.mapping:
                        lines.append(f"delta-table {n} {_elem_to_text(p)} "
                                     f"{_elem_to_text(x)}: {_elem_to_text(y)}")
        for m in g.morphisms:
            h = C.phi.get(n, {}).get(m)
            if isinstance(h, MatrixHom):
                lines.append(f"phi {n} {_elem_to_text(m)} = {_matrix_to_text(h.mat)}")
            elif isinstance(h, TableHom):
                for x, y in h.mapping:
                    lines.append(f"phi-table {n} {_elem_to_text(m)} "
                                 f"{_elem_to_text(x)}: {_elem_to_text(y)}")
    return "\n".join(lines)


def parse_crossed(lines) -> CrossedComplex:
    objects = []
    morphisms = []
    src = {}
    tgt = {}
    comp = {}
    identities = {}
    top = 1
    fiber_decl = {}
    fiber_mul = {}
    fiber_rels = {}
    delta2 = {}
    deltas = {}
    delta_tables = {}
    phi = {}
    phi_tables = {}
    for line in lines:
        if "=" in line and line.split("=")[0].split()[0] in ("fiber-rels", "delta", "phi"):
            key, _, val = line.partition("=")
            parts = key.split()
            mat = _matrix_from_text(val.strip())
            if parts[0] == "fiber-rels":
                fiber_rels[(int(parts[1]), _elem_from_text(parts[2]))] = mat
            elif parts[0] == "delta":
                deltas.setdefault(int(parts[1]), {})[_elem_from_text(parts[2])] = MatrixHom(mat)
            else:
                phi.setdefault(int(parts[1]), {})[_elem_from_text(parts[2])] = MatrixHom(mat)
            continue
        key, _, val = line.partition(":")
        parts = key.split()
        val = val.strip()
        if parts[0] == "objects":
            objects = [_elem_from_text(t) for t in val.split()]
        elif parts[0] == "morphisms":
            morphisms = [_elem_from_text(t) for t in val.split()]
        elif parts[0] == "source":
            src[_elem_from_text(parts[1])] = _elem_from_text(val)
        elif parts[0] == "target":
            tgt[_elem_from_text(parts[1])] = _elem_from_text(val)
        elif parts[0] == "identity":
            identities[_elem_from_text(parts[1])] = _elem_from_text(val)
        elif parts[0] == "compose":
            comp[(_elem_from_text(parts[1]), _elem_from_text(parts[2]))] = _elem_from_text(val)
        elif parts[0] == "top":
            top = int(val)
        elif parts[0] == "fiber":
            n, p, kind = int(parts[1]), _elem_from_text(parts[2]), parts[3]
            if kind == "table":
                elems_part, _, ident_part = val.partition("|")
                elems = [_elem_from_text(t) for t in elems_part.split()]
                ident = _elem_from_text(ident_part.split()[1])
                fiber_decl[(n, p)] = ("table", elems, ident)
            else:
                fiber_decl[(n, p)] = ("abelian", int(val), None)
        elif parts[0] == "fiber-mul":
            n, p = int(parts[1]), _elem_from_text(parts[2])
            a, b = _elem_from_text(parts[3]), _elem_from_text(parts[4])
            fiber_mul.setdefault((n, p), {})[(a, b)] = _elem_from_text(val)
        elif parts[0] == "delta2":
            p, x = _elem_from_text(parts[1]), _elem_from_text(parts[2])
            delta2.setdefault(p, {})[x] = _elem_from_text(val)
        elif parts[0] == "delta-table":
            n, p, x = int(parts[1]), _elem_from_text(parts[2]), _elem_from_text(parts[3])
            delta_tables.setdefault((n, p), {})[x] = _elem_from_text(val)
        elif parts[0] == "phi-table":
            n, m, x = int(parts[1]), _elem_from_text(parts[2]), _elem_from_text(parts[3])
            phi_tables.setdefault((n, m), {})[x] = _elem_from_text(val)
        else:
            raise DocumentError(f"unexpected line {line!r}")
    try:
        gpd = FiniteGroupoid(objects, morphisms, src, tgt, comp, identities)
        fibers = {}
        for (n, p), (kind, data, ident) in fiber_decl.items():
            if kind == "table":
                fibers.setdefault(n, {})[p] = FiniteGrp(data, fiber_mul[(n, p)], ident)
            else:
                rel = fiber_rels.get((n, p), IntMatrix.zero(data, 0))
                fibers.setdefault(n, {})[p] = AbGrp(data, rel)
        for (n, p), table in delta_tables.items():
            deltas.setdefault(n, {})[p] = TableHom.of(table)
        for (n, m), table in phi_tables.items():
            phi.setdefault(n, {})[m] = TableHom.of(table)
        return CrossedComplex(gpd, top, fibers, delta2 or None, deltas, phi)
    except (KeyError, ValueError) as e:
        raise DocumentError(f"inconsistent crossed complex document: {e}") from e


# presentations


def serialize_presentation(P: GroupPresentation) -> str:
    lines = ["generators: " + " ".join(P.generators)]
    for w in P.relators:
        toks = [P.generators[abs(c) - 1] + ("^-1" if c < 0 else "") for c in w]
        lines.append("relator: " + " ".join(toks))
    return "\n".join(lines)


def parse_presentation(lines) -> GroupPresentation:
    gens = ()
    relators = []
    for line in lines:
        key, _, val = line.partition(":")
        if key.strip() == "generators":
            gens = tuple(val.split())
        elif key.strip() == "relator":
            w = []
            for t in val.split():
                if t.endswith("^-1"):
                    name, sign = t[:-3], -1
                else:
                    name, sign = t, 1
                if name not in gens:
                    raise DocumentError(f"relator uses unknown generator {name!r}")
                w.append(sign * (gens.index(name) + 1))
            relators.append(tuple(w))
        else:
            raise DocumentError(f"unexpected line {line!r}")
    return GroupPresentation(gens, tuple(relators))


# top level


def serialize_document(doc: Document) -> str:
    header = f"thinfill {doc.format_version}\nkind: {doc.kind}\n"
    k, p = doc.kind, doc.payload
    if k == "simplicial_set":
        body = serialize_sset(p)
    elif k == "chain_complex":
        body = serialize_chain(p)
    elif k == "crossed_complex":
        body = serialize_crossed(p)
    elif k == "t_complex":
        body = serialize_sset(p.sset, thin=p.thin)
    elif k == "group_presentation":
        body = serialize_presentation(p)
    else:
        raise DocumentError(f"unknown kind {k!r}")
    return header + body + "\n"


def parse_document(text: str) -> Document:
    lines = _lines_of(text)
    if not lines or not lines[0].startswith("thinfill"):
        raise DocumentError("missing 'thinfill <version>' header")
    try:
        version = int(lines[0].split()[1])
    except (IndexError, ValueError) as e:
        raise DocumentError("malformed version header") from e
    if version != FORMAT_VERSION:
        raise DocumentError(f"unrecognized format version {version}")
    if len(lines) < 2 or not lines[1].startswith("kind:"):
        raise DocumentError("missing kind line")
    kind = lines[1].split(":", 1)[1].strip()
    body = lines[2:]
    try:
        if kind == "simplicial_set":
            payload = parse_sset(body)
        elif kind == "chain_complex":
            payload = parse_chain(body)
        elif kind == "crossed_complex":
            payload = parse_crossed(body)
        elif kind == "t_complex":
            ss, thin = parse_sset(body, thin_allowed=True)
            payload = TComplex(sset=ss, thin=thin, label="document")
        elif kind == "group_presentation":
            payload = parse_presentation(body)
        else:
            raise DocumentError(f"unknown kind {kind!r}")
    except (ValueError, KeyError, IndexError) as e:
        raise DocumentError(f"malformed {kind} document: {e}") from e
    return Document(kind, payload, version)


def documents_equal(a: Document, b: Document) -> bool:
    return serialize_document(a) == serialize_document(b)
