"""Finite simplicial sets in nondegenerate normal form.

Conventions used throughout the package:

* the face map d_i omits vertex i, the degeneracy s_i repeats vertex i;
* an edge e has source d_1(e) and target d_0(e);
* the long edge of a triangle composes the short ones: d_1(t) = d_0(t) o d_2(t)
  in function order ("first d_2, then d_0");
* every simplex is stored as a strictly decreasing degeneracy word applied to
  a nondegenerate cell (Eilenberg-Zilber normal form), so equality of
  simplices is structural equality of expressions.

Only nondegenerate cells are stored; a complex with no cells above dimension
d still has simplices in every dimension (all degenerate).  A *truncated*
complex additionally promises nothing above ``dim_bound`` and operations
that would need to look there fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import ConnectivityError, InfiniteOrUnknownFundamentalGroup, TruncationError
from .presentations import GroupPresentation, todd_coxeter


@dataclass(frozen=True, order=True)
class DegenerateExpr:
    """A degeneracy word (strictly decreasing) applied to a nondegenerate cell."""

    word: tuple
    base: str

    def is_nondegenerate(self) -> bool:
        return not self.word

    def __str__(self):
        if not self.word:
            return self.base
        return " ".join(f"s{w}" for w in self.word) + " " + self.base


def cell(name: str) -> DegenerateExpr:
    return DegenerateExpr((), name)


@dataclass(frozen=True)
class Horn:
    """A map Lambda^n_k -> X: all faces of an n-simplex except the k-th.

    ``faces`` lists the n assigned (n-1)-simplices in face-index order with
    index k skipped.
    """

    n: int
    k: int
    faces: tuple

    def face(self, i: int) -> DegenerateExpr:
        if i == self.k or not 0 <= i <= self.n:
            raise IndexError(f"face {i} is not part of the horn")
        return self.faces[i if i < self.k else i - 1]

    def present_indices(self):
        return [i for i in range(self.n + 1) if i != self.k]


@dataclass(frozen=True)
class Violation:
    kind: str
    cell: str
    detail: str
    indices: tuple = ()


class SimplicialSet:
    """A simplicial set with finitely many nondegenerate cells per dimension."""

    def __init__(self, cells, faces, dim_bound=None, truncated=False):
        self.cells = {int(d): tuple(names) for d, names in cells.items() if names}
        self.faces = {name: tuple(fs) for name, fs in faces.items()}
        self.dim_bound = dim_bound
        self.truncated = truncated
        self.cell_dim = {}
        for d, names in self.cells.items():
            for name in names:
                if name in self.cell_dim:
                    raise ValueError(f"duplicate cell name {name!r}")
                self.cell_dim[name] = d
        self._face_cache = {}
        self._simplices_cache = {}

    # structure

    def max_cell_dim(self) -> int:
        return max(self.cells.keys(), default=0)

    def data_bound(self) -> int | None:
        """Highest dimension whose simplices are trustworthy (None = all)."""
        return self.dim_bound if self.truncated else None

    def _require_dim(self, n: int):
        bound = self.data_bound()
        if bound is not None and n > bound:
            raise TruncationError(
                f"dimension {n} exceeds the truncation bound {bound}")

    def dim_of(self, expr: DegenerateExpr) -> int:
        return self.cell_dim[expr.base] + len(expr.word)

    def face_of_cell(self, name: str, i: int) -> DegenerateExpr:
        return self.faces[name][i]

    def face_of(self, expr: DegenerateExpr, i: int) -> DegenerateExpr:
        """d_i of a simplex in normal form, in normal form."""
        key = (expr, i)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        word = expr.word
        out = []
        res = None
        for pos, w in enumerate(word):
            if i < w:
                out.append(w - 1)
            elif i == w or i == w + 1:
                res = DegenerateExpr(tuple(out) + word[pos + 1:], expr.base)
                break
            else:
                out.append(w)
                i -= 1
        if res is None:
            res = self.faces[expr.base][i]
            for w in reversed(out):
                res = self.degeneracy_of(res, w)
        self._face_cache[key] = res
        return res

    def degeneracy_of(self, expr: DegenerateExpr, i: int) -> DegenerateExpr:
        # s_i s_w = s_{w+1} s_i for i <= w: bump the prefix >= i, insert i
        pre = tuple(w + 1 for w in expr.word if w >= i)
        post = tuple(w for w in expr.word if w < i)
        return DegenerateExpr(pre + (i,) + post, expr.base)

    def vertex_of(self, expr: DegenerateExpr, j: int) -> str:
        d = self.dim_of(expr)
        if not 0 <= j <= d:
            raise IndexError("vertex index out of range")
        while d > j:
            expr = self.face_of(expr, d)
            d -= 1
        while d > 0:
            expr = self.face_of(expr, 0)
            d -= 1
        return expr.base

    def edge_endpoints(self, name: str):
        """(source, target) of a nondegenerate 1-cell."""
        return (self.face_of_cell(name, 1).base, self.face_of_cell(name, 0).base)

    def simplices(self, n: int) -> list:
        """All n-simplices, degenerate ones included, in a deterministic order."""
        self._require_dim(n)
        if n in self._simplices_cache:
            return self._simplices_cache[n]
        out = []
        for k in sorted(self.cells.keys()):
            if k > n:
                continue
            m = n - k
            for base in self.cells[k]:
                if m == 0:
                    out.append(DegenerateExpr((), base))
                    continue
                for combo in combinations(range(n), m):
                    word = tuple(reversed(combo))
                    if all(word[idx] <= k + (m - 1 - idx) for idx in range(m)):
                        out.append(DegenerateExpr(word, base))
        out.sort()
        self._simplices_cache[n] = out
        return out

    def initial_edge(self, expr: DegenerateExpr) -> DegenerateExpr:
        """The 01-edge of a simplex of dimension >= 1."""
        d = self.dim_of(expr)
        while d > 1:
            expr = self.face_of(expr, d)
            d -= 1
        return expr


def validate_sset(X: SimplicialSet) -> list:
    """Validation report; empty iff X satisfies the simplicial-set contract.

    Structural checks (face arities, normal forms, referenced cells) come
    first; then the identities d_i d_j = d_{j-1} d_i (i < j) are verified by
    exhaustive enumeration on every nondegenerate cell.
    """
    report = []
    for name, dim in X.cell_dim.items():
        if dim == 0:
            if name in X.faces and X.faces[name]:
                report.append(Violation("structure", name, "vertex with face data"))
            continue
        fs = X.faces.get(name)
        if fs is None or len(fs) != dim + 1:
            report.append(Violation("structure", name, f"expected {dim + 1} faces"))
            continue
        for i, f in enumerate(fs):
            if f.base not in X.cell_dim:
                report.append(Violation("structure", name, f"face {i} references unknown cell {f.base!r}"))
                continue
            if any(a <= b for a, b in zip(f.word, f.word[1:])):
                report.append(Violation("structure", name, f"face {i} word not strictly decreasing"))
                continue
            if X.cell_dim[f.base] + len(f.word) != dim - 1:
                report.append(Violation("structure", name, f"face {i} has wrong dimension"))
    if report:
        return report
    for dim in sorted(X.cells.keys()):
        if dim < 2:
            continue
        for name in X.cells[dim]:
            e = cell(name)
            for j in range(dim + 1):
                for i in range(j):
                    lhs = X.face_of(X.face_of(e, j), i)
                    rhs = X.face_of(X.face_of(e, i), j - 1)
                    if lhs != rhs:
                        report.append(Violation(
                            "identity", name,
                            f"d_{i} d_{j} = {lhs} but d_{j - 1} d_{i} = {rhs}",
                            (i, j)))
    return report


def _compatible(X, assigned, j, y):
    """Whether y placed at face index j agrees with the faces assigned so far."""
    if X.dim_of(y) == 0:
        return True  # vertices impose no pairwise conditions
    for i, x in assigned.items():
        if i < j:
            if X.face_of(y, i) != X.face_of(x, j - 1):
                return False
        else:
            if X.face_of(x, j) != X.face_of(y, i - 1):
                return False
    return True


def _enumerate_tuples(X, n, skip):
    """All compatible assignments of (n-1)-simplices to the face indices of an
    n-simplex, omitting index ``skip`` (None for boundary spheres)."""
    positions = [i for i in range(n + 1) if i != skip]
    candidates = X.simplices(n - 1)
    out = []
    assigned = {}

    def place(idx):
        if idx == len(positions):
            out.append({i: assigned[i] for i in positions})
            return
        j = positions[idx]
        for y in candidates:
            if _compatible(X, assigned, j, y):
                assigned[j] = y
                place(idx + 1)
                del assigned[j]

    place(0)
    return out


def enumerate_horns(X: SimplicialSet, n: int) -> list:
    """Every map Lambda^n_k -> X for every k, in a deterministic order."""
    if n < 1:
        raise ValueError("horns need dimension >= 1")
    X._require_dim(n - 1)
    horns = []
    for k in range(n + 1):
        for assignment in _enumerate_tuples(X, n, k):
            faces = tuple(assignment[i] for i in sorted(assignment))
            horns.append(Horn(n, k, faces))
    return horns


def horn_of_simplex(X: SimplicialSet, z: DegenerateExpr, k: int) -> Horn:
    n = X.dim_of(z)
    faces = tuple(X.face_of(z, i) for i in range(n + 1) if i != k)
    return Horn(n, k, faces)


def is_horn_of(X: SimplicialSet, h: Horn) -> bool:
    assigned = {}
    for i in h.present_indices():
        y = h.face(i)
        if X.dim_of(y) != h.n - 1 or not _compatible(X, assigned, i, y):
            return False
        assigned[i] = y
    return True


def fillers(X: SimplicialSet, h: Horn) -> list:
    """All n-simplices (possibly degenerate) whose faces away from k match h."""
    X._require_dim(h.n)
    out = []
    for z in X.simplices(h.n):
        if all(X.face_of(z, i) == h.face(i) for i in h.present_indices()):
            out.append(z)
    return out


def enumerate_spheres(X: SimplicialSet, n: int) -> list:
    """All maps of the boundary of an n-simplex into X, as face tuples."""
    X._require_dim(n - 1)
    return [tuple(a[i] for i in range(n + 1)) for a in _enumerate_tuples(X, n, None)]


@dataclass(frozen=True)
class CoskeletalResult:
    ok: bool
    witness_dim: int | None = None
    witness_faces: tuple | None = None
    witness_count: int | None = None

    def __bool__(self):
        return self.ok


def is_coskeletal(X: SimplicialSet, m: int, dmax: int) -> CoskeletalResult:
    """Whether every boundary sphere in dimensions m < n <= dmax fills uniquely."""
    for n in range(m + 1, dmax + 1):
        X._require_dim(n)
        buckets = {}
        for z in X.simplices(n):
            key = tuple(X.face_of(z, i) for i in range(n + 1))
            buckets[key] = buckets.get(key, 0) + 1
        for sphere in enumerate_spheres(X, n):
            count = buckets.get(sphere, 0)
            if count != 1:
                return CoskeletalResult(False, n, sphere, count)
    return CoskeletalResult(True)


# connectivity and the fundamental group

def components(X: SimplicialSet):
    """Vertex sets of the connected components, each sorted, sorted by minimum."""
    parent = {v: v for v in X.cells.get(0, ())}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in X.cells.get(1, ()):
        s, t = X.edge_endpoints(e)
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[max(rs, rt)] = min(rs, rt)
    groups = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def component_subcomplex(X: SimplicialSet, vertex: str) -> SimplicialSet:
    comp = None
    for g in components(X):
        if vertex in g:
            comp = set(g)
            break
    if comp is None:
        raise ValueError(f"unknown vertex {vertex!r}")
    cells = {}
    faces = {}
    for d in sorted(X.cells.keys()):
        keep = [c for c in X.cells[d] if X.vertex_of(cell(c), 0) in comp]
        if keep:
            cells[d] = keep
            for c in keep:
                if d >= 1:
                    faces[c] = X.faces[c]
    return SimplicialSet(cells, faces, X.dim_bound, X.truncated)


def spanning_tree(X: SimplicialSet, v: str):
    """Breadth-first spanning tree from v over lexicographically ordered edges.

    Returns (tree edge set, parent map vertex -> (edge, via-source?) or None).
    """
    edges = sorted(X.cells.get(1, ()))
    ends = {e: X.edge_endpoints(e) for e in edges}
    visited = {v}
    tree = set()
    queue = [v]
    while queue:
        u = queue.pop(0)
        for e in edges:
            s, t = ends[e]
            if s == u and t not in visited:
                tree.add(e)
                visited.add(t)
                queue.append(t)
            elif t == u and s not in visited:
                tree.add(e)
                visited.add(s)
                queue.append(s)
    return tree, visited


def pi1_presentation(X: SimplicialSet, v: str) -> GroupPresentation:
    """Edge-path presentation of the fundamental group at the vertex v.

    Generators are the nondegenerate edges outside a breadth-first spanning
    tree; each nondegenerate 2-cell contributes the relator reading
    d_1 = d_0 o d_2 around its boundary, with tree edges killed.
    """
    comps = components(X)
    if len(comps) > 1:
        raise ConnectivityError(
            f"input is disconnected: components through {comps[0][0]!r} and {comps[1][0]!r}",
            components=comps)
    if v not in X.cells.get(0, ()):
        raise ValueError(f"basepoint {v!r} is not a vertex")
    tree, _ = spanning_tree(X, v)
    gens = [e for e in sorted(X.cells.get(1, ())) if e not in tree]
    gen_index = {e: i + 1 for i, e in enumerate(gens)}

    def letter(expr):
        if expr.word or expr.base in tree:
            return ()
        return (gen_index[expr.base],)

    relators = []
    for t in sorted(X.cells.get(2, ())):
        e = cell(t)
        w = letter(X.face_of(e, 2)) + letter(X.face_of(e, 0)) \
            + tuple(-c for c in reversed(letter(X.face_of(e, 1))))
        relators.append(w)
    return GroupPresentation(tuple(gens), tuple(relators))


@dataclass
class UniversalCover:
    cover: SimplicialSet
    covering: dict          # cover cell name -> base cell name
    deck: tuple             # one cell-name permutation (dict) per group element
    group_order: int


def universal_cover(X: SimplicialSet, budget: int) -> UniversalCover:
    """Universal cover of a connected complex with finite fundamental group.

    Cells of the cover are (cell, fiber) pairs; the fiber coordinate of a
    face changes only when the initial vertex is dropped, by the deck action
    of the simplex's 01-edge.  The group is realized by Todd-Coxeter coset
    enumeration; an enumeration that does not close within the budget raises.
    """
    comps = components(X)
    if len(comps) > 1:
        raise ConnectivityError(
            f"input is disconnected: components through {comps[0][0]!r} and {comps[1][0]!r}",
            components=comps)
    v = comps[0][0]
    pres = pi1_presentation(X, v)
    tc = todd_coxeter(pres, budget)
    if tc is None:
        raise InfiniteOrUnknownFundamentalGroup(
            "fundamental group not certified finite within budget")
    order = tc.order
    tree, _ = spanning_tree(X, v)
    gens = [e for e in sorted(X.cells.get(1, ())) if e not in tree]
    gen_letter = {e: 2 * i for i, e in enumerate(gens)}

    def edge_action(expr, fiber):
        if expr.word or expr.base in tree:
            return fiber
        return tc.act_letter(fiber, gen_letter[expr.base])

    def lift(name, fiber):
        return f"{name}@{fiber}"

    cells = {}
    faces = {}
    for d in sorted(X.cells.keys()):
        cells[d] = [lift(c, f) for c in X.cells[d] for f in range(order)]
        if d == 0:
            continue
        for c in X.cells[d]:
            e = cell(c)
            edge01 = X.initial_edge(e)
            for f in range(order):
                lifted = []
                for i in range(d + 1):
                    fc = X.face_of(e, i)
                    fiber = edge_action(edge01, f) if i == 0 else f
                    lifted.append(DegenerateExpr(fc.word, lift(fc.base, fiber)))
                faces[lift(c, f)] = tuple(lifted)
    cover = SimplicialSet(cells, faces, X.dim_bound, X.truncated)
    covering = {lift(c, f): c for d in X.cells for c in X.cells[d] for f in range(order)}
    deck = []
    for h in range(order):
        perm = {}
        for d in X.cells:
            for c in X.cells[d]:
                for f in range(order):
                    perm[lift(c, f)] = lift(c, tc.act_word(h, tc.words[f]))
        deck.append(perm)
    return UniversalCover(cover, covering, tuple(deck), order)


# builders

def simplicial_complex(facets, name_of=None, dim_bound=None, truncated=False) -> SimplicialSet:
    """Simplicial set of an ordered simplicial complex given by its facets.

    Vertices within a facet must be listed in increasing order; all faces
    are generated downward.  Cell names default to the concatenated vertex
    labels.
    """
    if name_of is None:
        name_of = lambda vs: "".join(str(v) for v in vs)
    cells = {}
    faces = {}
    seen = set()

    def add(vs):
        if vs in seen:
            return
        seen.add(vs)
        d = len(vs) - 1
        cells.setdefault(d, []).append(name_of(vs))
        if d >= 1:
            fs = []
            for i in range(d + 1):
                sub = vs[:i] + vs[i + 1:]
                add(sub)
                fs.append(cell(name_of(sub)))
            faces[name_of(vs)] = tuple(fs)

    for f in facets:
        add(tuple(f))
    for d in cells:
        cells[d] = sorted(cells[d])
    return SimplicialSet(cells, faces, dim_bound, truncated)


def standard_simplex(n: int) -> SimplicialSet:
    return simplicial_complex([tuple(range(n + 1))])


def boundary_simplex(n: int) -> SimplicialSet:
    vs = tuple(range(n + 1))
    return simplicial_complex([vs[:i] + vs[i + 1:] for i in range(n + 1)])


def point(name: str = "v") -> SimplicialSet:
    return SimplicialSet({0: [name]}, {})


def circle() -> SimplicialSet:
    return SimplicialSet({0: ["v"], 1: ["e"]}, {"e": (cell("v"), cell("v"))})


def sphere(n: int, top_cells=("top",)) -> SimplicialSet:
    """One vertex and one (or several wedged) nondegenerate n-cells."""
    if n < 2:
        raise ValueError("use circle() for n = 1")
    collapsed = DegenerateExpr(tuple(range(n - 2, -1, -1)), "v")
    faces = {t: tuple(collapsed for _ in range(n + 1)) for t in top_cells}
    return SimplicialSet({0: ["v"], n: list(top_cells)}, faces)


def wedge_of_spheres(n: int, count: int) -> SimplicialSet:
    return sphere(n, tuple(f"top{i}" for i in range(count)))


def rp2() -> SimplicialSet:
    """The 6-vertex triangulation of the real projective plane."""
    tri = [(1, 2, 5), (1, 2, 6), (1, 3, 4), (1, 3, 6), (1, 4, 5),
           (2, 3, 4), (2, 3, 5), (2, 4, 6), (3, 5, 6), (4, 5, 6)]
    return simplicial_complex(tri)


def torus() -> SimplicialSet:
    """The 7-vertex triangulation of the torus."""
    tri = []
    for i in range(7):
        tri.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tri.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return simplicial_complex(tri)


def disjoint_union(X: SimplicialSet, Y: SimplicialSet, suffixes=("_l", "_r")) -> SimplicialSet:
    def rename(Z, suffix):
        cmap = {c: c + suffix for c in Z.cell_dim}
        cells = {d: [cmap[c] for c in names] for d, names in Z.cells.items()}
        faces = {cmap[c]: tuple(DegenerateExpr(f.word, cmap[f.base]) for f in fs)
                 for c, fs in Z.faces.items()}
        return cells, faces

    cx, fx = rename(X, suffixes[0])
    cy, fy = rename(Y, suffixes[1])
    cells = {d: list(cx.get(d, [])) + list(cy.get(d, [])) for d in set(cx) | set(cy)}
    fx.update(fy)
    bound = None
    truncated = X.truncated or Y.truncated
    if truncated:
        bounds = [b for b in (X.data_bound(), Y.data_bound()) if b is not None]
        bound = min(bounds)
    return SimplicialSet(cells, fx, bound, truncated)


def is_one_reduced(X: SimplicialSet) -> bool:
    """Single vertex and no nondegenerate edges."""
    return len(X.cells.get(0, ())) == 1 and not X.cells.get(1, ())
