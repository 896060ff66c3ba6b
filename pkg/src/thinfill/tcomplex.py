"""Simplicial T-complexes: thin markings, unique thin fillers, composition.

Two computable sources of T-complexes live here.

* ``u_st``: the underlying simplicial set of a simplicial abelian group,
  thin = top chain component zero.
* ``ndk_build``: the nerve of a crossed complex, built inductively; an
  n-simplex is a tuple of compatible faces together with one element of the
  dimension-n bundle, constrained by the boundary word of its faces.  A cell
  is thin exactly when that element is neutral, which makes the unique thin
  filler a solve-for-the-element step instead of a search.

The boundary word in dimension 2 is the triangle word d2 then d0 then the
inverse of d1 (an automorphism of the initial vertex); higher dimensions
alternate the faces' elements with the 0th face transported back along the
01-edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chain import ChainComplex, normalized_chains
from .crossed import CrossedComplex, SymbolicUcr, fiber_elements, u_cr
from .doldkan import GammaRep, Materialization, materialize, thin_filler_abelian
from .errors import EnumerabilityError, TruncationError
from .intlinalg import IntMatrix
from .sset import (
    DegenerateExpr,
    Horn,
    SimplicialSet,
    cell,
    enumerate_horns,
    fillers,
)


@dataclass(frozen=True)
class NdkSimplex:
    """A nerve simplex: face ids one dimension down plus the bundle element.

    Dimension 0 stores the object in ``alpha``; dimension 1 stores the
    morphism, with faces (target vertex, source vertex).
    """

    n: int
    faces: tuple
    alpha: object

    def sort_key(self):
        return (self.faces, repr(self.alpha))


class NdkComplex:
    """Registry of all nerve simplices of a crossed complex through a bound."""

    def __init__(self, C: CrossedComplex, dmax: int):
        if isinstance(C, SymbolicUcr):
            raise EnumerabilityError("the nerve needs a materialized crossed complex")
        self.C = C
        self.dmax = dmax
        self.simplices = []      # per dim: list of NdkSimplex
        self.index = []          # per dim: NdkSimplex -> id
        self.deg = {}            # (j, dim, id) -> id one dimension up
        self.normal = []         # per dim: id -> DegenerateExpr over cell names
        self.cell_ids = []       # per dim: list of nondegenerate ids
        self._build()

    # structural accessors

    def simplex(self, n: int, sid: int) -> NdkSimplex:
        return self.simplices[n][sid]

    def face_id(self, n: int, sid: int, i: int) -> int:
        return self.simplices[n][sid].faces[i]

    def initial_vertex(self, n: int, sid: int):
        while n > 0:
            sid = self.face_id(n, sid, n)
            n -= 1
        return self.simplices[0][sid].alpha

    def initial_edge_morphism(self, n: int, sid: int):
        """The 01-edge of a simplex of dimension >= 1, as a morphism."""
        while n > 1:
            sid = self.face_id(n, sid, n)
            n -= 1
        return self.simplices[1][sid].alpha

    def alpha_of(self, n: int, sid: int):
        return self.simplices[n][sid].alpha

    def is_thin_id(self, n: int, sid: int) -> bool:
        s = self.simplices[n][sid]
        if n == 0:
            return True
        if n == 1:
            p = self.simplices[0][s.faces[1]].alpha
            return s.alpha == self.C.groupoid.identity(p)
        p0 = self.initial_vertex(n, sid)
        return s.alpha == self.C.fiber(n, p0).identity

    # construction

    def _add_level(self, items):
        items = sorted(set(items), key=NdkSimplex.sort_key)
        self.simplices.append(items)
        self.index.append({s: i for i, s in enumerate(items)})

    def _boundary_word(self, n: int, faces: tuple):
        """The word the bundle element must bound, and its base object."""
        C = self.C
        g = C.groupoid
        if n == 2:
            m0 = self.simplices[1][faces[0]].alpha
            m1 = self.simplices[1][faces[1]].alpha
            m2 = self.simplices[1][faces[2]].alpha
            p0 = self.simplices[0][self.simplices[1][faces[2]].faces[1]].alpha
            w = g.compose(g.inv(m1), g.compose(m0, m2))
            return p0, w
        p0 = self.initial_vertex(n - 1, faces[n])
        p = self.initial_edge_morphism(n - 1, faces[n])
        F = C.fiber(n - 1, p0)
        a = [self.alpha_of(n - 1, faces[i]) for i in range(n + 1)]
        a0 = C.act(n - 1, g.inv(p), a[0])
        if n == 3:
            w = F.mul(F.mul(F.mul(a0, a[2]), F.inv(a[1])), F.inv(a[3]))
        else:
            w = a0
            for i in range(1, n + 1):
                w = F.mul(w, a[i] if i % 2 == 0 else F.inv(a[i]))
        return p0, w

    def _solve_alpha(self, n: int, p0, w):
        """All bundle elements with boundary w at p0."""
        C = self.C
        fiber = C.fiber(n, p0)
        if n == 2:
            return [x for x in fiber_elements(fiber) if C.boundary2(p0, x) == w]
        return [x for x in fiber_elements(fiber) if C.boundary(n, p0, x) == w]

    def _compatible_tuples(self, n: int):
        lower = self.simplices[n - 1]
        count = len(lower)
        out = []
        chosen = [0] * (n + 1)

        def compatible(j, y):
            for i in range(j):
                if self.face_id(n - 1, y, i) != self.face_id(n - 1, chosen[i], j - 1):
                    return False
            return True

        def place(j):
            for y in range(count):
                if n - 1 == 0 or compatible(j, y):
                    chosen[j] = y
                    if j == n:
                        out.append(tuple(chosen))
                    else:
                        place(j + 1)

        # vertices impose no conditions only when the faces are 0-dimensional
        place(0)
        return out

    def _build(self):
        C = self.C
        g = C.groupoid
        objects = sorted(g.objects, key=repr)
        self._add_level([NdkSimplex(0, (), p) for p in objects])
        if self.dmax >= 1:
            vid = {s.alpha: i for i, s in enumerate(self.simplices[0])}
            self._add_level([
                NdkSimplex(1, (vid[g.tgt[m]], vid[g.src[m]]), m) for m in g.morphisms])
        for n in range(2, self.dmax + 1):
            items = []
            for faces in self._compatible_tuples(n):
                p0, w = self._boundary_word(n, faces)
                for alpha in self._solve_alpha(n, p0, w):
                    items.append(NdkSimplex(n, faces, alpha))
            self._add_level(items)
        self._mark_degeneracies()
        self._name_cells()

    def _mark_degeneracies(self):
        # level 1: s_0(vertex) = identity morphism
        g = self.C.groupoid
        if self.dmax >= 1:
            for vid, v in enumerate(self.simplices[0]):
                target = NdkSimplex(1, (vid, vid), g.identity(v.alpha))
                self.deg[(0, 0, vid)] = self.index[1][target]
        for n in range(2, self.dmax + 1):
            for sid, s in enumerate(self.simplices[n - 1]):
                p0 = self.initial_vertex(n - 1, sid)
                neutral = self.C.fiber(n, p0).identity
                for j in range(n):
                    faces = []
                    for i in range(n + 1):
                        if i == j or i == j + 1:
                            faces.append(sid)
                        elif i < j:
                            faces.append(self.deg[(j - 1, n - 2, self.face_id(n - 1, sid, i))])
                        else:
                            faces.append(self.deg[(j, n - 2, self.face_id(n - 1, sid, i - 1))])
                    target = NdkSimplex(n, tuple(faces), neutral)
                    tid = self.index[n].get(target)
                    if tid is None:
                        raise AssertionError(
                            "degenerate simplex missing from enumeration: "
                            "boundary conventions are inconsistent")
                    self.deg[(j, n - 1, sid)] = tid

    def _name_cells(self):
        parent = [dict() for _ in range(self.dmax + 1)]  # degenerate id -> (j, source id)
        for (j, dim, sid), tid in self.deg.items():
            parent[dim + 1].setdefault(tid, (j, sid))
        names = []
        self.cell_ids = []
        for n in range(self.dmax + 1):
            nondeg = [i for i in range(len(self.simplices[n])) if i not in parent[n]]
            self.cell_ids.append(nondeg)
            names.append({sid: f"x{n}_{pos}" for pos, sid in enumerate(nondeg)})
        # normal forms, bottom up: a degenerate simplex takes its source's
        # word with the new index inserted (the EZ form does not depend on
        # which degeneracy produced it)
        self.normal = [dict() for _ in range(self.dmax + 1)]
        for n in range(self.dmax + 1):
            for sid in self.cell_ids[n]:
                self.normal[n][sid] = DegenerateExpr((), names[n][sid])
            for sid, (j, src) in parent[n].items():
                base = self.normal[n - 1][src]
                pre = tuple(w + 1 for w in base.word if w >= j)
                post = tuple(w for w in base.word if w < j)
                self.normal[n][sid] = DegenerateExpr(pre + (j,) + post, base.base)
        self._names = names
        self._by_name = {}
        for n in range(self.dmax + 1):
            for sid in self.cell_ids[n]:
                self._by_name[names[n][sid]] = (n, sid)

    def to_sset(self) -> SimplicialSet:
        cells = {}
        faces = {}
        for n in range(self.dmax + 1):
            cells[n] = [self._names[n][sid] for sid in self.cell_ids[n]]
            if n == 0:
                continue
            for sid in self.cell_ids[n]:
                faces[self._names[n][sid]] = tuple(
                    self.normal[n - 1][self.face_id(n, sid, i)] for i in range(n + 1))
        return SimplicialSet(cells, faces, dim_bound=self.dmax, truncated=True)

    def thin_cells(self) -> frozenset:
        out = set()
        for n in range(self.dmax + 1):
            for sid in self.cell_ids[n]:
                if n >= 1 and self.is_thin_id(n, sid):
                    out.add(self._names[n][sid])
        return frozenset(out)

    def id_of_expr(self, expr: DegenerateExpr):
        """(dimension, id) of the simplex in normal form expr."""
        if expr.base not in self._by_name:
            raise KeyError(f"unknown cell {expr.base!r}")
        dim, cur = self._by_name[expr.base]
        for w in reversed(expr.word):
            cur = self.deg[(w, dim, cur)]
            dim += 1
        return dim, cur


class TComplex:
    """A simplicial set with thin markings, with optional solver backends.

    ``gamma`` is present for u_st models (thin = top component zero);
    ``ndk`` for nerves of crossed complexes (thin = neutral element);
    ``chain_backend`` carries the normalized chains of the abelian model and
    stays available even when the cells cannot be materialized.
    """

    def __init__(self, sset=None, thin=None, label="", gamma=None, ndk=None,
                 chain_backend=None):
        self.sset = sset
        self.thin = thin
        self.label = label
        self.gamma = gamma
        self.ndk = ndk
        self.chain_backend = chain_backend
        self._cell_index = None

    def require_cells(self) -> SimplicialSet:
        if self.sset is None:
            raise EnumerabilityError(
                f"{self.label or 'this T-complex'} has no explicit cells")
        return self.sset

    def is_thin_expr(self, expr: DegenerateExpr) -> bool:
        """Axiom 1 built in: degenerate simplices are always thin."""
        if expr.word:
            return True
        return expr.base in self.thin

    def bound(self) -> int:
        return self.require_cells().data_bound()


def u_st(A: ChainComplex, dmax: int) -> TComplex:
    """The T-complex of the simplicial abelian group presented by A."""
    rep = GammaRep(A)
    try:
        mat = materialize(rep, dmax)
        return TComplex(sset=mat.sset, thin=mat.thin, label="u_st model",
                        gamma=mat, chain_backend=A)
    except EnumerabilityError:
        return TComplex(label="u_st model (symbolic)", chain_backend=A)


def ndk_build(C: CrossedComplex, dmax: int) -> TComplex:
    """The nerve of a crossed complex through dimension dmax."""
    reg = NdkComplex(C, dmax)
    return TComplex(sset=reg.to_sset(), thin=reg.thin_cells(),
                    label="nerve of a crossed complex", ndk=reg)


def thin_fillers_of(X: TComplex, h: Horn) -> list:
    return [z for z in fillers(X.require_cells(), h) if X.is_thin_expr(z)]


@dataclass(frozen=True)
class TcViolation:
    axiom: int
    horn: Horn
    detail: str


def tcomplex_validate(X: TComplex, dmax: int) -> list:
    """Axiom 2 (unique thin filler per horn) and axiom 3 (all-thin horns have
    thin compositions), exhaustively through dmax.  Axiom 1 holds by
    construction: degenerate simplices are thin by definition here."""
    ss = X.require_cells()
    bound = ss.data_bound()
    if bound is not None and dmax > bound:
        raise TruncationError(f"validation through {dmax} exceeds the data bound {bound}")
    report = []
    for n in range(1, dmax + 1):
        for h in enumerate_horns(ss, n):
            thins = thin_fillers_of(X, h)
            if len(thins) != 1:
                report.append(TcViolation(
                    2, h, f"{len(thins)} thin fillers (expected exactly 1)"))
                continue
            if n >= 2 and all(X.is_thin_expr(h.face(i)) for i in h.present_indices()):
                composition = ss.face_of(thins[0], h.k)
                if not X.is_thin_expr(composition):
                    report.append(TcViolation(3, h, "composition of an all-thin horn is not thin"))
    return report


def compose_horn(X: TComplex, h: Horn) -> DegenerateExpr:
    """The k-th face of the unique thin filler of h.

    On a nerve backend the filler is found by solving the boundary word for
    the missing element; on an abelian backend by the zero-top-component
    solve; a plain marked complex falls back to filtering fillers.
    """
    ss = X.require_cells()
    bound = ss.data_bound()
    if bound is not None and h.n > bound:
        raise TruncationError("horn dimension exceeds the materialized bound")
    if X.ndk is not None:
        return _compose_horn_ndk(X, h)
    if X.gamma is not None:
        faces = {i: X.gamma.simplex_of(h.face(i)) for i in h.present_indices()}
        z = thin_filler_abelian(X.gamma.rep, h.n, h.k, faces)
        return X.gamma.expr_of(X.gamma.rep.face(z, h.k))
    thins = thin_fillers_of(X, h)
    if len(thins) != 1:
        raise ValueError(f"horn has {len(thins)} thin fillers")
    return ss.face_of(thins[0], h.k)


def _compose_horn_ndk(X: TComplex, h: Horn) -> DegenerateExpr:
    reg = X.ndk
    C = reg.C
    g = C.groupoid
    n, k = h.n, h.k
    ids = {}
    for i in h.present_indices():
        dim, sid = reg.id_of_expr(h.face(i))
        if dim != n - 1:
            raise ValueError("horn face of wrong dimension")
        ids[i] = sid
    if n == 1:
        # the unique thin filler of a 1-horn is the degenerate edge
        vdim, vid = reg.id_of_expr(h.face(1 - k))
        return reg.normal[0][vid]
    # faces of the missing facet, forced by the simplicial identities
    fk_faces = []
    for j in range(n):
        if j < k:
            fk_faces.append(reg.face_id(n - 1, ids[j], k - 1))
        else:
            fk_faces.append(reg.face_id(n - 1, ids[j + 1], k))
    if n == 2:
        m = {i: reg.simplices[1][ids[i]].alpha for i in ids}
        if k == 0:
            alpha = g.compose(m[1], g.inv(m[2]))
        elif k == 1:
            alpha = g.compose(m[0], m[2])
        else:
            alpha = g.compose(g.inv(m[0]), m[1])
        missing = NdkSimplex(1, tuple(fk_faces), alpha)
    else:
        ref = ids[2] if k != 2 else ids[3]
        # all faces other than 0 share the initial vertex and 01-edge
        p0 = reg.initial_vertex(n - 1, ref)
        p = reg.initial_edge_morphism(n - 1, ref)
        F = C.fiber(n - 1, p0)
        a = {i: reg.alpha_of(n - 1, ids[i]) for i in ids}
        if k == 0:
            if n == 3:
                w = F.mul(F.mul(a[3], a[1]), F.inv(a[2]))
            else:
                w = F.identity
                for i in range(1, n + 1):
                    w = F.mul(w, a[i] if i % 2 == 1 else F.inv(a[i]))
            alpha = C.act(n - 1, p, w)
        else:
            a0t = C.act(n - 1, g.inv(p), a[0])
            if n == 3:
                if k == 1:
                    alpha = F.mul(F.mul(F.inv(a[3]), a0t), a[2])
                elif k == 2:
                    alpha = F.mul(F.inv(a0t), F.mul(a[3], a[1]))
                else:
                    alpha = F.mul(F.mul(a0t, a[2]), F.inv(a[1]))
            else:
                acc = a0t
                for i in range(1, n + 1):
                    if i == k:
                        continue
                    acc = F.mul(acc, a[i] if i % 2 == 0 else F.inv(a[i]))
                alpha = acc if k % 2 == 1 else F.inv(acc)
        missing = NdkSimplex(n - 1, tuple(fk_faces), alpha)
    sid = reg.index[n - 1].get(missing)
    if sid is None:
        raise ValueError("horn is not fillable in this nerve")
    return reg.normal[n - 1][sid]


def truncate_chain(C: ChainComplex, top: int) -> ChainComplex:
    """Restrict or zero-pad a chain complex to degrees 0..top exactly."""
    if top <= C.top:
        return ChainComplex(C.gens[:top + 1], C.rels[:top + 1], C.diffs[:top],
                            labels=None if C.labels is None else C.labels[:top + 1])
    gens = list(C.gens) + [0] * (top - C.top)
    rels = list(C.rels) + [IntMatrix.zero(0, 0)] * (top - C.top)
    diffs = list(C.diffs) + [IntMatrix.zero(gens[n - 1], 0)
                             for n in range(C.top + 1, top + 1)]
    labels = None if C.labels is None else tuple(C.labels) + ((),) * (top - C.top)
    return ChainComplex(gens, rels, diffs, labels=labels)


def ab_st(X: TComplex, dmax: int) -> ChainComplex:
    """Normalized chains of the abelianized T-complex.

    Free on the nondegenerate cells, modulo: (a) the class of the thin
    filler of every horn through dmax (the pushed-forward horn fills with a
    degenerate-spanned simplex, so the identification kills the filler
    class), and (b) the one-face-down shadow of the same identification for
    horns one dimension higher: the alternating sum of the horn's face
    classes, signed from the missing index, minus the composition class.
    """
    ss = X.require_cells()
    bound = ss.data_bound()
    if bound is not None and bound < dmax + 1:
        raise TruncationError(
            f"need cells through {dmax + 1} to abelianize through {dmax}")
    base = truncate_chain(normalized_chains(ss), dmax)
    index = [{name: i for i, name in enumerate(base.labels[n])}
             for n in range(base.top + 1)]

    def class_vector(n, expr):
        vec = [0] * base.gens[n]
        if not expr.word:
            vec[index[n][expr.base]] = 1
        return vec

    rel_cols = [[] for _ in range(dmax + 1)]
    for n in range(1, dmax + 2):
        for h in enumerate_horns(ss, n):
            if n <= dmax:
                thins = thin_fillers_of(X, h)
                if len(thins) != 1:
                    raise ValueError("input fails the unique-thin-filler axiom")
                col = class_vector(n, thins[0])
                if any(col):
                    rel_cols[n].append(col)
            # the face-k shadow lands one dimension down
            m = n - 1
            if m > dmax:
                continue
            acc = [0] * base.gens[m]
            sign_k = 1 if (h.k + 1) % 2 == 0 else -1
            for i in h.present_indices():
                sign = sign_k * (1 if i % 2 == 0 else -1)
                for t, aa in enumerate(class_vector(m, h.face(i))):
                    acc[t] += sign * aa
            comp = compose_horn(X, h)
            for t, aa in enumerate(class_vector(m, comp)):
                acc[t] -= aa
            if any(acc):
                rel_cols[m].append(acc)
    rels = [IntMatrix.from_columns(rel_cols[n], base.gens[n]) if rel_cols[n]
            else IntMatrix.zero(base.gens[n], 0) for n in range(dmax + 1)]
    return ChainComplex(base.gens, rels, base.diffs, labels=base.labels)


# the isomorphism u_st(Gamma(A)) = nerve(u_cr(A))


@dataclass
class EtaCertificate:
    """Dimensionwise bijection between the two models, with its checks.

    The map sends a simplex to the tuple of its mapped faces together with
    its top chain component, identically in dimensions 0 and 1.  The
    certificate records bijectivity, commutation with every face and
    degeneracy, and thinness preservation in both directions.
    """

    ok: bool
    sizes: tuple
    failures: tuple


def eta_iso(A: ChainComplex, dmax: int) -> EtaCertificate:
    from .crossed import CrossedComplex as _CC

    rep = GammaRep(A)
    X = u_cr(A)
    if not isinstance(X, _CC):
        raise EnumerabilityError("eta needs an enumerable bottom pair of degrees")
    reg = NdkComplex(X, dmax)
    failures = []
    maps = []
    sizes = []
    vid = {s.alpha: i for i, s in enumerate(reg.simplices[0])}
    for n in range(dmax + 1):
        gam = rep.all_simplices(n)
        table = {}
        for x in gam:
            if n == 0:
                target = NdkSimplex(0, (), rep.top(x))
            elif n == 1:
                src = rep.top(rep.face(x, 1))
                m = (src, rep.top(x))
                tgt = X.groupoid.tgt.get(m)
                if tgt is None:
                    failures.append(f"dim 1: {m} is not a morphism")
                    continue
                target = NdkSimplex(1, (vid[tgt], vid[src]), m)
            else:
                try:
                    faces = tuple(maps[n - 1][rep.face(x, i)] for i in range(n + 1))
                except KeyError:
                    failures.append(f"dim {n}: face of {x} not mapped")
                    continue
                target = NdkSimplex(n, faces, rep.top(x))
            sid = reg.index[n].get(target)
            if sid is None:
                failures.append(f"dim {n}: image of {x} is not a nerve simplex")
                continue
            table[x] = sid
        if len(set(table.values())) != len(table):
            failures.append(f"dim {n}: map is not injective")
        if len(table) != len(gam) or len(gam) != len(reg.simplices[n]):
            failures.append(
                f"dim {n}: sizes differ ({len(gam)} vs {len(reg.simplices[n])})")
        sizes.append((len(gam), len(reg.simplices[n])))
        maps.append(table)
    if not failures:
        for n in range(1, dmax + 1):
            for x, sid in maps[n].items():
                for i in range(n + 1):
                    if maps[n - 1][rep.face(x, i)] != reg.face_id(n, sid, i):
                        failures.append(f"dim {n}: face {i} does not commute")
                        break
        for n in range(dmax):
            for x, sid in maps[n].items():
                for j in range(n + 1):
                    if maps[n + 1][rep.degeneracy(x, j)] != reg.deg[(j, n, sid)]:
                        failures.append(f"dim {n}: degeneracy {j} does not commute")
                        break
        for n in range(1, dmax + 1):
            for x, sid in maps[n].items():
                if rep.is_thin(x) != reg.is_thin_id(n, sid):
                    failures.append(f"dim {n}: thinness not preserved at {x}")
                    break
        # identity in dimensions 0 and 1 under the canonical pairings
        for x, sid in maps[0].items():
            if reg.simplices[0][sid].alpha != rep.top(x):
                failures.append("dim 0: map is not the identity")
                break
        for x, sid in maps[1].items() if dmax >= 1 else ():
            m = reg.simplices[1][sid].alpha
            if m != (rep.top(rep.face(x, 1)), rep.top(x)):
                failures.append("dim 1: map is not the identity pairing")
                break
    return EtaCertificate(not failures, tuple(sizes), tuple(failures))


# marked filled complexes, thin closure, co-thin pairs


@dataclass
class MarkedFilledComplex:
    """A simplicial set with a chosen filler for every horn through a bound."""

    sset: SimplicialSet
    bound: int
    fillers: dict  # (n, k, faces) -> filler expr

    def filler(self, h: Horn) -> DegenerateExpr:
        return self.fillers[(h.n, h.k, h.faces)]


def marked_from_tcomplex(X: TComplex, bound: int) -> MarkedFilledComplex:
    """Choose the unique thin fillers as the distinguished ones."""
    ss = X.require_cells()
    table = {}
    for n in range(1, bound + 1):
        for h in enumerate_horns(ss, n):
            thins = thin_fillers_of(X, h)
            if len(thins) != 1:
                raise ValueError("not a T-complex: thin filler not unique")
            table[(h.n, h.k, h.faces)] = thins[0]
    return MarkedFilledComplex(ss, bound, table)


def thin_closure(M: MarkedFilledComplex) -> frozenset:
    """Least set of nondegenerate cells closed under the three thinness rules:
    degeneracies are thin by convention, distinguished fillers are thin, and
    compositions of all-thin horns are thin.  Fixed-point iteration."""
    ss = M.sset
    thin = set()

    def is_thin(expr):
        return bool(expr.word) or expr.base in thin

    horns = [(key, filler) for key, filler in sorted(M.fillers.items())]
    for (n, k, faces), filler in horns:
        if not filler.word:
            thin.add(filler.base)
    changed = True
    while changed:
        changed = False
        for (n, k, faces), filler in horns:
            if n < 2:
                continue
            if all(is_thin(f) for f in faces):
                comp = ss.face_of(filler, k)
                if not comp.word and comp.base not in thin:
                    thin.add(comp.base)
                    changed = True
    return frozenset(thin)


def cothin_pairs(M: MarkedFilledComplex) -> list:
    """Distinct thin simplices sharing a horn, as unordered expression pairs."""
    thin = thin_closure(M)

    def is_thin(expr):
        return bool(expr.word) or expr.base in thin

    ss = M.sset
    out = set()
    for n in range(1, M.bound + 1):
        buckets = {}
        for z in ss.simplices(n):
            if not is_thin(z):
                continue
            zf = [ss.face_of(z, i) for i in range(n + 1)]
            for k in range(n + 1):
                key = (k, tuple(zf[i] for i in range(n + 1) if i != k))
                buckets.setdefault(key, []).append(z)
        for members in buckets.values():
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    a, b = sorted((members[i], members[j]))
                    out.add((a, b))
    return sorted(out)
