"""Crossed complexes: a groupoid in dimension 1 with group bundles above.

Bundle fibers come in two backends: finite multiplication tables (possibly
nonabelian, allowed in dimension 2 only) and finitely presented abelian
groups.  The boundary of dimension 2 lands in vertex automorphism groups and
acts there by conjugation; everything from dimension 3 up is abelian with
trivial action by boundaries.

Morphism convention matches the rest of the package: ``compose(g, f)`` is
"first f, then g" and is defined when the source of g is the target of f.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .chain import ChainComplex, FGAbelianGroup, ChainMap, cokernel_invariants
from .errors import EnumerabilityError, RepresentabilityError
from .intlinalg import IntMatrix, Lattice, smith_normal_form
from .presentations import GroupPresentation, presentation_from_table


# group backends


class FiniteGrp:
    """Finite group given by a full multiplication table."""

    def __init__(self, elements, mul, identity):
        self.elements = tuple(elements)
        self._mul = dict(mul)
        self.identity = identity
        self._inv = {}
        for a in self.elements:
            for b in self.elements:
                if self._mul[a, b] == identity:
                    self._inv[a] = b

    def mul(self, a, b):
        return self._mul[a, b]

    def inv(self, a):
        return self._inv[a]

    def power(self, a, k):
        out = self.identity
        base = a if k >= 0 else self.inv(a)
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def is_abelian(self):
        return all(self.mul(a, b) == self.mul(b, a)
                   for a in self.elements for b in self.elements)

    def validate(self):
        report = []
        if self.identity not in self.elements:
            report.append("identity not an element")
        for a in self.elements:
            if a not in self._inv:
                report.append(f"no inverse for {a!r}")
            if self._mul[self.identity, a] != a or self._mul[a, self.identity] != a:
                report.append(f"identity law fails at {a!r}")
        for a in self.elements:
            for b in self.elements:
                if self._mul[a, b] not in self.elements:
                    report.append(f"product {a!r}*{b!r} escapes the element set")
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self._mul[self._mul[a, b], c] != self._mul[a, self._mul[b, c]]:
                        report.append(f"associativity fails at ({a!r},{b!r},{c!r})")
                        return report
        return report

    @staticmethod
    def cyclic(n: int) -> "FiniteGrp":
        elems = tuple(range(n))
        return FiniteGrp(elems, {(a, b): (a + b) % n for a in elems for b in elems}, 0)

    @staticmethod
    def symmetric(n: int) -> "FiniteGrp":
        from itertools import permutations
        elems = tuple(sorted(permutations(range(n))))
        mul = {}
        for a in elems:
            for b in elems:
                mul[a, b] = tuple(a[b[i]] for i in range(n))  # first b, then a
        return FiniteGrp(elems, mul, tuple(range(n)))


class AbGrp:
    """Finitely presented abelian group; elements are canonical vectors."""

    def __init__(self, ngens: int, rel: IntMatrix | None = None):
        self.ngens = ngens
        self.rel = rel if rel is not None else IntMatrix.zero(ngens, 0)
        if self.rel.rows != ngens:
            raise ValueError("relation matrix shape mismatch")
        self._lat = Lattice(self.rel) if self.rel.cols else None
        self.identity = (0,) * ngens

    @staticmethod
    def from_invariants(group: FGAbelianGroup) -> "AbGrp":
        g = group.rank + len(group.torsion)
        cols = []
        for j, d in enumerate(group.torsion):
            col = [0] * g
            col[group.rank + j] = d
            cols.append(col)
        return AbGrp(g, IntMatrix.from_columns(cols, g))

    def reduce(self, vec) -> tuple:
        vec = tuple(vec)
        return self._lat.reduce(vec) if self._lat is not None else vec

    def mul(self, a, b):
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def inv(self, a):
        return self.reduce(tuple(-x for x in a))

    def power(self, a, k):
        return self.reduce(tuple(k * x for x in a))

    def is_abelian(self):
        return True

    def group(self) -> FGAbelianGroup:
        return cokernel_invariants(self.ngens, self.rel)

    def elements(self) -> list:
        if self.ngens == 0:
            return [()]
        S = smith_normal_form(self.rel)
        diag = [d for d in S.D.diagonal() if d != 0]
        if len(diag) < self.ngens:
            raise EnumerabilityError("abelian fiber has positive rank")
        out = {self.reduce(S.Uinv.apply(ys)) for ys in product(*[range(d) for d in diag])}
        return sorted(out)


def fiber_elements(G):
    return list(G.elements) if isinstance(G, FiniteGrp) else G.elements()


def fiber_is_enumerable(G) -> bool:
    if isinstance(G, FiniteGrp):
        return True
    try:
        G.elements()
        return True
    except EnumerabilityError:
        return False


def table_ab_presentation(G: FiniteGrp):
    """(index map, relation matrix) presenting the abelianization of a table
    group on one generator per element."""
    idx = {x: i for i, x in enumerate(G.elements)}
    n = len(G.elements)
    cols = []
    for a in G.elements:
        for b in G.elements:
            col = [0] * n
            col[idx[a]] += 1
            col[idx[b]] += 1
            col[idx[G.mul(a, b)]] -= 1
            cols.append(col)
    return idx, IntMatrix.from_columns(cols, n)


# bundle homomorphisms


@dataclass(frozen=True)
class TableHom:
    mapping: tuple  # sorted tuple of (src elem, tgt elem)

    def apply(self, x):
        return dict(self.mapping)[x]

    @staticmethod
    def of(d: dict) -> "TableHom":
        return TableHom(tuple(sorted(d.items())))


@dataclass(frozen=True)
class MatrixHom:
    mat: IntMatrix

    def apply_in(self, tgt: AbGrp, vec):
        return tgt.reduce(self.mat.apply(vec))


def hom_apply(h, tgt, x):
    if isinstance(h, TableHom):
        return h.apply(x)
    if isinstance(h, MatrixHom):
        return h.apply_in(tgt, x)
    raise TypeError(f"not a bundle hom: {h!r}")


def identity_hom(G):
    if isinstance(G, FiniteGrp):
        return TableHom.of({x: x for x in G.elements})
    return MatrixHom(IntMatrix.identity(G.ngens))


# groupoids


class FiniteGroupoid:
    """Groupoid on finitely many objects with a full composition table."""

    def __init__(self, objects, morphisms, src, tgt, comp, identities):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.comp = dict(comp)
        self.identities = dict(identities)
        self._inv = {}
        for m in self.morphisms:
            for w in self.morphisms:
                if self.src[w] == self.tgt[m] and self.tgt[w] == self.src[m] \
                        and self.comp.get((w, m)) == self.identities[self.src[m]]:
                    self._inv[m] = w
                    break

    def compose(self, g, f):
        """g o f, defined when src(g) = tgt(f)."""
        return self.comp[g, f]

    def inv(self, m):
        return self._inv[m]

    def identity(self, p):
        return self.identities[p]

    def aut(self, p):
        return [m for m in self.morphisms if self.src[m] == p and self.tgt[m] == p]

    def composable_pairs(self):
        return [(g, f) for g in self.morphisms for f in self.morphisms
                if self.src[g] == self.tgt[f]]

    def components(self):
        parent = {p: p for p in self.objects}

        def find(p):
            while parent[p] != p:
                parent[p] = parent[parent[p]]
                p = parent[p]
            return p

        for m in self.morphisms:
            a, b = find(self.src[m]), find(self.tgt[m])
            if a != b:
                parent[max(a, b)] = min(a, b)
        comps = {}
        for p in self.objects:
            comps.setdefault(find(p), []).append(p)
        return sorted((sorted(c) for c in comps.values()), key=lambda c: c[0])

    def validate(self):
        report = []
        for p in self.objects:
            e = self.identities.get(p)
            if e is None or self.src.get(e) != p or self.tgt.get(e) != p:
                report.append(f"bad identity at object {p!r}")
        for g, f in self.composable_pairs():
            c = self.comp.get((g, f))
            if c is None:
                report.append(f"missing composite ({g!r},{f!r})")
            elif self.src[c] != self.src[f] or self.tgt[c] != self.tgt[g]:
                report.append(f"composite ({g!r},{f!r}) has wrong endpoints")
        for m in self.morphisms:
            if m not in self._inv:
                report.append(f"no inverse for morphism {m!r}")
            p, q = self.src[m], self.tgt[m]
            if self.comp.get((m, self.identities[p])) != m \
                    or self.comp.get((self.identities[q], m)) != m:
                report.append(f"identity law fails at {m!r}")
        for h in self.morphisms:
            for g in self.morphisms:
                if self.src[h] != self.tgt[g]:
                    continue
                hg = self.comp[h, g]
                for f in self.morphisms:
                    if self.src[g] != self.tgt[f]:
                        continue
                    if self.comp[hg, f] != self.comp[h, self.comp[g, f]]:
                        report.append(f"associativity fails at ({h!r},{g!r},{f!r})")
                        return report
        return report

    @staticmethod
    def one_object(G: FiniteGrp, obj="*") -> "FiniteGroupoid":
        morphs = [(obj, x) for x in G.elements]
        return FiniteGroupoid(
            [obj], morphs,
            {m: obj for m in morphs}, {m: obj for m in morphs},
            {((obj, a), (obj, b)): (obj, G.mul(a, b)) for a in G.elements for b in G.elements},
            {obj: (obj, G.identity)})

    @staticmethod
    def discrete(objects) -> "FiniteGroupoid":
        morphs = [("id", p) for p in objects]
        return FiniteGroupoid(
            objects, morphs,
            {m: m[1] for m in morphs}, {m: m[1] for m in morphs},
            {(m, m): m for m in morphs},
            {p: ("id", p) for p in objects})


class FreeGroupoid:
    """Free groupoid on a finite quiver; morphisms are reduced edge words.

    A word is a tuple of signed 1-based edge indices read left to right in
    travel order.
    """

    def __init__(self, objects, edges):
        self.objects = tuple(objects)
        self.edges = tuple(edges)  # (name, src, tgt)

    def edge_ends(self, signed):
        name, s, t = self.edges[abs(signed) - 1]
        return (s, t) if signed > 0 else (t, s)

    def word_src(self, word, at=None):
        if not word:
            return at
        return self.edge_ends(word[0])[0]

    def word_tgt(self, word, at=None):
        if not word:
            return at
        return self.edge_ends(word[-1])[1]

    def reduce_word(self, word):
        out = []
        for c in word:
            if out and out[-1] == -c:
                out.pop()
            else:
                out.append(c)
        return tuple(out)

    def compose(self, g, f):
        # g o f = travel f then g
        return self.reduce_word(tuple(f) + tuple(g))

    def inv(self, word):
        return tuple(-c for c in reversed(word))


@dataclass(frozen=True)
class PairsGroupoid:
    """The groupoid |A0| x |A1| of a chain complex, kept symbolic.

    The morphism (p, l) runs from p to p + d(l); composition adds the A1
    coordinates.
    """

    A: ChainComplex

    def components_group(self) -> FGAbelianGroup:
        A = self.A
        return cokernel_invariants(
            A.gen_count(0),
            IntMatrix.from_columns(
                A.diff(1).columns() + A.rel(0).columns(), A.gen_count(0)))

    def vertex_group(self) -> FGAbelianGroup:
        from .chain import cycle_generators
        from .intlinalg import lattice_of_columns, subquotient_invariant_diagonal

        A = self.A
        g1 = A.gen_count(1)
        if g1 == 0:
            return FGAbelianGroup(0)
        gens = cycle_generators(A, 1)
        num = lattice_of_columns(gens, g1)
        rank, torsion = subquotient_invariant_diagonal(num, A.rel(1).columns())
        return FGAbelianGroup(rank, tuple(torsion))


# the crossed complex


class CrossedComplex:
    """Groupoid C1 over C0 with group bundles C_n (n >= 2), boundary and action.

    ``fibers[n][p]`` is the group at object p in dimension n; ``delta2[p]``
    maps fiber elements to vertex automorphisms (None = trivial boundary);
    ``deltas[n][p]`` is a bundle hom C_n(p) -> C_{n-1}(p) for n >= 3;
    ``phi[n][m]`` is the action hom of the morphism m in dimension n.
    """

    def __init__(self, groupoid, top=1, fibers=None, delta2=None, deltas=None, phi=None):
        self.groupoid = groupoid
        self.top = top
        self.fibers = fibers or {}
        self.delta2 = delta2
        self.deltas = deltas or {}
        self.phi = phi or {}

    def fiber(self, n: int, p):
        if n < 2 or n > self.top:
            return AbGrp(0)
        return self.fibers[n][p]

    def boundary2(self, p, x):
        """delta: C_2(p) -> Aut(p), identity when delta2 is None."""
        if self.delta2 is None:
            return self.groupoid.identity(p)
        return self.delta2[p][x]

    def boundary(self, n: int, p, x):
        """delta: C_n(p) -> C_{n-1}(p) for n >= 3 (zero beyond top)."""
        if n > self.top:
            return self.fiber(n - 1, p).identity
        h = self.deltas.get(n, {}).get(p)
        if h is None:
            return self.fiber(n - 1, p).identity
        return hom_apply(h, self.fiber(n - 1, p), x)

    def act(self, n: int, m, x):
        """phi_m: C_n(src m) -> C_n(tgt m)."""
        h = self.phi.get(n, {}).get(m)
        if h is None:
            return x  # trivial action
        return hom_apply(h, self.fiber(n, self.groupoid.tgt[m]), x)

    def is_one_reduced(self) -> bool:
        g = self.groupoid
        return isinstance(g, FiniteGroupoid) and len(g.objects) == 1 and len(g.morphisms) == 1

    def levels(self):
        return range(2, self.top + 1)


def level1(G: FiniteGrp) -> CrossedComplex:
    return CrossedComplex(FiniteGroupoid.one_object(G))


def one_reduced(fibers: dict, deltas: dict | None = None) -> CrossedComplex:
    """Crossed complex with trivial C0 and C1: fibers maps n -> group,
    deltas maps n -> MatrixHom/TableHom into level n-1 (n >= 3)."""
    gpd = FiniteGroupoid.one_object(FiniteGrp(("e",), {("e", "e"): "e"}, "e"))
    obj = "*"
    top = max(fibers) if fibers else 1
    fib = {n: {obj: fibers[n]} for n in fibers}
    dl = {n: {obj: h} for n, h in (deltas or {}).items()}
    phi = {n: {gpd.identity(obj): identity_hom(fibers[n])} for n in fibers}
    return CrossedComplex(gpd, top, fib, None, dl, phi)


def identity_crossed_module(G: FiniteGrp) -> CrossedComplex:
    """C1 = C2 = G with delta the identity and phi conjugation."""
    gpd = FiniteGroupoid.one_object(G)
    obj = "*"
    fib = {2: {obj: G}}
    delta2 = {obj: {x: (obj, x) for x in G.elements}}
    phi = {2: {(obj, g): TableHom.of({x: G.mul(G.mul(g, x), G.inv(g)) for x in G.elements})
               for g in G.elements}}
    return CrossedComplex(gpd, 2, fib, delta2, {}, phi)


def inclusion_crossed_module(G: FiniteGrp, normal_elements) -> CrossedComplex:
    """C2 = a normal subgroup of C1 = G, delta the inclusion, phi conjugation."""
    sub = tuple(normal_elements)
    N = FiniteGrp(sub, {(a, b): G.mul(a, b) for a in sub for b in sub}, G.identity)
    gpd = FiniteGroupoid.one_object(G)
    obj = "*"
    fib = {2: {obj: N}}
    delta2 = {obj: {x: (obj, x) for x in sub}}
    phi = {2: {(obj, g): TableHom.of({x: G.mul(G.mul(g, x), G.inv(g)) for x in sub})
               for g in G.elements}}
    return CrossedComplex(gpd, 2, fib, delta2, {}, phi)


def validate_crossed_complex(C: CrossedComplex) -> list:
    """All crossed-complex axioms, exhaustively on finite backends.

    Checked: groupoid axioms; fiber group axioms; functoriality of the
    action; the conjugation axiom for boundaries of dimension-2 elements
    (and triviality of their action above); delta^2 = 0; equivariance of
    delta (needed for the nerve to be well defined).
    """
    report = []
    g = C.groupoid
    if isinstance(g, FiniteGroupoid):
        report.extend(g.validate())
    if report:
        return report
    for n in C.levels():
        for p in g.objects:
            G = C.fiber(n, p)
            if isinstance(G, FiniteGrp):
                if n > 2 and not G.is_abelian():
                    report.append(f"fiber C_{n}({p!r}) must be abelian above dimension 2")
                report.extend(f"C_{n}({p!r}): {msg}" for msg in G.validate())
    if report:
        return report

    def gen_elems(n, p):
        """Enough elements to separate homomorphisms: all of a table fiber,
        canonical unit vectors of a presented abelian fiber."""
        fiber = C.fiber(n, p)
        if isinstance(fiber, FiniteGrp):
            return list(fiber.elements)
        return [fiber.reduce(v) for v in _fiber_generators(fiber)]

    # homomorphism well-definedness of the structure maps
    def check_hom(h, src, tgt, what):
        if isinstance(h, MatrixHom):
            lat = Lattice(tgt.rel) if isinstance(tgt, AbGrp) else None
            for col in src.rel.columns():
                img = h.mat.apply(col)
                if lat is None or not lat.contains(img):
                    report.append(f"{what} does not respect source relations")
                    return
        elif isinstance(h, TableHom) and isinstance(src, FiniteGrp):
            for x in src.elements:
                for y in src.elements:
                    if h.apply(src.mul(x, y)) != tgt.mul(h.apply(x), h.apply(y)):
                        report.append(f"{what} is not a homomorphism")
                        return

    for n in C.levels():
        for p in g.objects:
            if n >= 3:
                h = C.deltas.get(n, {}).get(p)
                if h is not None:
                    check_hom(h, C.fiber(n, p), C.fiber(n - 1, p), f"delta_{n} at {p!r}")
        for m in g.morphisms:
            h = C.phi.get(n, {}).get(m)
            if h is not None:
                check_hom(h, C.fiber(n, g.src[m]), C.fiber(n, g.tgt[m]), f"phi_{m!r} in dim {n}")
    if C.delta2 is not None and 2 in C.levels():
        for p in g.objects:
            G2 = C.fiber(2, p)
            table = C.delta2[p]
            for x in fiber_elements(G2):
                for y in fiber_elements(G2):
                    if table[G2.mul(x, y)] != g.compose(table[x], table[y]):
                        report.append(f"delta_2 at {p!r} is not a homomorphism")
                        break
    if report:
        return report

    # identity action and functoriality (both sides are homs: generator
    # checks suffice)
    for n in C.levels():
        for p in g.objects:
            e = g.identity(p)
            if any(C.act(n, e, x) != x for x in gen_elems(n, p)):
                report.append(f"phi of the identity at {p!r} is not the identity in dim {n}")
        for g2, g1 in g.composable_pairs():
            c = g.compose(g2, g1)
            p = g.src[g1]
            for x in gen_elems(n, p):
                if C.act(n, c, x) != C.act(n, g2, C.act(n, g1, x)):
                    report.append(
                        f"functoriality fails in dim {n} on pair ({g2!r}, {g1!r})")
                    break
    # dimension-2 boundary axioms: quantified over all elements, so they need
    # an enumerable fiber; a trivial boundary satisfies them outright
    if 2 in C.levels() and C.delta2 is not None:
        for p in g.objects:
            G2 = C.fiber(2, p)
            for a in fiber_elements(G2):
                m = C.boundary2(p, a)
                if g.src[m] != g.tgt[m] or g.src[m] != p:
                    report.append(f"delta({a!r}) at {p!r} is not a vertex automorphism")
                    continue
                for b in fiber_elements(G2):
                    if C.act(2, m, b) != G2.mul(G2.mul(a, b), G2.inv(a)):
                        report.append(
                            f"delta({a!r}) does not act by conjugation by {a!r} at {p!r}")
                        break
                for n in C.levels():
                    if n <= 2:
                        continue
                    if any(C.act(n, m, x) != x for x in gen_elems(n, p)):
                        report.append(
                            f"delta({a!r}) acts nontrivially in dimension {n} at {p!r}")
    # delta^2 = 0 and equivariance of delta (homs again: generators suffice)
    for n in C.levels():
        if n < 3:
            continue
        for p in g.objects:
            for x in gen_elems(n, p):
                y = C.boundary(n, p, x)
                if n - 1 == 2:
                    m = C.boundary2(p, y)
                    if m != g.identity(p):
                        report.append(f"delta^2 != 0 on {x!r} in dim {n} at {p!r}")
                else:
                    if C.boundary(n - 1, p, y) != C.fiber(n - 2, p).identity:
                        report.append(f"delta^2 != 0 on {x!r} in dim {n} at {p!r}")
        for m in g.morphisms:
            p, q = g.src[m], g.tgt[m]
            for x in gen_elems(n, p):
                if C.boundary(n, q, C.act(n, m, x)) != C.act(n - 1, m, C.boundary(n, p, x)):
                    report.append(f"delta does not commute with phi_{m!r} in dim {n}")
                    break
    if 2 in C.levels() and C.delta2 is not None:
        for m in g.morphisms:
            p, q = g.src[m], g.tgt[m]
            for a in fiber_elements(C.fiber(2, p)):
                lhs = C.boundary2(q, C.act(2, m, a))
                rhs = g.compose(g.compose(m, C.boundary2(p, a)), g.inv(m))
                if lhs != rhs:
                    report.append(f"delta_2 not equivariant along {m!r}")
                    break
    return report


# homology of crossed complexes


@dataclass
class CrHomology:
    """pi0 as component list (or invariants when symbolic), pi1 presentations
    per basepoint, H_n per (n, basepoint)."""

    pi0: list | None
    pi0_group: FGAbelianGroup | None
    pi1: dict
    hn: dict

    def pi0_count(self):
        if self.pi0 is not None:
            return len(self.pi0)
        return self.pi0_group.order()


def presentation_of_fg_abelian(g: FGAbelianGroup) -> GroupPresentation:
    names = tuple(f"k{i}" for i in range(g.rank + len(g.torsion)))
    relators = []
    for j, d in enumerate(g.torsion):
        relators.append(tuple([g.rank + j + 1] * d))
    ng = len(names)
    for a in range(1, ng + 1):
        for b in range(a + 1, ng + 1):
            relators.append((a, b, -a, -b))
    return GroupPresentation(names, tuple(relators))


def _vertex_group_presentation(C: CrossedComplex, p) -> GroupPresentation:
    g = C.groupoid
    aut = sorted(g.aut(p))
    e = g.identity(p)
    gens = [m for m in aut if m != e]
    idx = {m: i + 1 for i, m in enumerate(gens)}
    relators = []
    for x in gens:
        for y in gens:
            if g.src[x] != g.tgt[y]:
                continue
            z = g.compose(x, y)
            w = (idx[x], idx[y]) if z == e else (idx[x], idx[y], -idx[z])
            relators.append(w)
    if 2 <= C.top:
        fiber = C.fiber(2, p)
        if C.delta2 is not None:
            for a in fiber_elements(fiber):
                m = C.boundary2(p, a)
                if m != e:
                    relators.append((idx[m] * -1,))
    return GroupPresentation(tuple(str(m) for m in gens), tuple(relators))


def _hn_at(C: CrossedComplex, n: int, p) -> FGAbelianGroup:
    fiber = C.fiber(n, p)
    if fiber_is_enumerable(fiber):
        if n == 2:
            kernel = [a for a in fiber_elements(fiber)
                      if C.boundary2(p, a) == C.groupoid.identity(p)]
        else:
            low = C.fiber(n - 1, p)
            kernel = [a for a in fiber_elements(fiber)
                      if C.boundary(n, p, a) == low.identity]
        if n + 1 > C.top:
            image = []
        else:
            image = [C.boundary(n + 1, p, y) for y in fiber_elements(C.fiber(n + 1, p))]
        idx = {x: i for i, x in enumerate(kernel)}
        cols = []
        for x in kernel:
            for y in kernel:
                col = [0] * len(kernel)
                col[idx[x]] += 1
                col[idx[y]] += 1
                col[idx[fiber.mul(x, y)]] -= 1
                cols.append(col)
        for i in image:
            col = [0] * len(kernel)
            col[idx[i]] += 1
            cols.append(col)
        return cokernel_invariants(len(kernel), IntMatrix.from_columns(cols, len(kernel)))
    # abelian matrix route (requires trivial delta2 when n = 2)
    if not isinstance(fiber, AbGrp):
        raise EnumerabilityError("cannot compute H_n on this backend")
    from .chain import cycle_generators
    from .intlinalg import lattice_of_columns, subquotient_invariant_diagonal

    gn = fiber.ngens
    if n == 2:
        if C.delta2 is not None:
            raise EnumerabilityError("nontrivial delta_2 on a non-enumerable fiber")
        kernel_gens = [tuple(1 if i == j else 0 for i in range(gn)) for j in range(gn)]
    else:
        h = C.deltas.get(n, {}).get(p)
        dm = h.mat if isinstance(h, MatrixHom) else IntMatrix.zero(C.fiber(n - 1, p).ngens, gn)
        mini = ChainComplex([C.fiber(n - 1, p).ngens, gn],
                            [C.fiber(n - 1, p).rel, fiber.rel], [dm])
        kernel_gens = cycle_generators(mini, 1)
    if n + 1 > C.top:
        img_cols = []
    else:
        h = C.deltas.get(n + 1, {}).get(p)
        up = C.fiber(n + 1, p)
        img_cols = h.mat.columns() if isinstance(h, MatrixHom) else []
        if not isinstance(h, MatrixHom) and fiber_is_enumerable(up):
            img_cols = [C.boundary(n + 1, p, y) for y in fiber_elements(up)]
    num = lattice_of_columns(list(kernel_gens) + fiber.rel.columns(), gn)
    rank, torsion = subquotient_invariant_diagonal(num, img_cols + fiber.rel.columns())
    return FGAbelianGroup(rank, tuple(torsion))


def cr_homology(C) -> CrHomology:
    """pi0 of the groupoid, vertex group modulo boundaries, ker/im above."""
    if isinstance(C, SymbolicUcr):
        from .chain import homology as chain_homology

        A = C.A
        pg = PairsGroupoid(A)
        pi1 = presentation_of_fg_abelian(chain_homology(A, 1) if A.top >= 1
                                         else FGAbelianGroup(0))
        hn = {(n, "*"): chain_homology(A, n) for n in range(2, A.top + 1)}
        return CrHomology(None, pg.components_group(), {"*": pi1}, hn)
    comps = C.groupoid.components()
    pi1 = {}
    hn = {}
    for comp in comps:
        p = comp[0]
        pi1[p] = _vertex_group_presentation(C, p)
        for n in C.levels():
            hn[(n, p)] = _hn_at(C, n, p)
    return CrHomology(comps, None, pi1, hn)


# the adjunction Ab_Cr -| U_Cr


@dataclass
class AbCrIndex:
    """Generator layout of ab_cr(C): where each object, morphism and fiber
    element lands in the presentation."""

    objects: list
    object_pos: dict
    morphisms: list
    morphism_pos: dict
    level_layout: dict   # n -> (ordered objects, {obj: (offset, kind, data)})
    gen_counts: dict     # n -> generator count

    def element_column(self, C, n, p, x):
        """Integer column representing a fiber element in degree n."""
        offset, kind, data = self.level_layout[n][1][p]
        col = [0] * self.gen_counts[n]
        if kind == "table":
            col[offset + data[x]] = 1
        else:
            for j, a in enumerate(x):
                col[offset + j] = a
        return tuple(col)


def ab_cr_with_index(C: CrossedComplex, reduced: bool = False):
    """Abelianized crossed complex as a presented chain complex, with layout.

    Degree 0 is Z on the objects; degree 1 is Z on the morphisms modulo
    composition additivity; degree n >= 2 is the direct sum of the fibers
    modulo the action of every morphism.  The reduced variant kills the
    first object in degree 0.
    """
    g = C.groupoid
    if isinstance(g, FreeGroupoid):
        raise RepresentabilityError("ab_cr needs a finite composition table")
    objects = sorted(g.objects, key=str)
    obj_pos = {p: i for i, p in enumerate(objects)}
    morphisms = sorted(g.morphisms, key=str)
    mor_pos = {m: i for i, m in enumerate(morphisms)}

    gens = [len(objects), len(morphisms)]
    labels = [tuple(str(p) for p in objects), tuple(str(m) for m in morphisms)]
    rel_cols = {0: [], 1: []}
    if reduced and objects:
        col = [0] * len(objects)
        col[0] = 1
        rel_cols[0].append(col)
    for g2, g1 in g.composable_pairs():
        col = [0] * len(morphisms)
        col[mor_pos[g.compose(g2, g1)]] += 1
        col[mor_pos[g2]] -= 1
        col[mor_pos[g1]] -= 1
        rel_cols[1].append(col)
    d1_cols = []
    for m in morphisms:
        col = [0] * len(objects)
        col[obj_pos[g.tgt[m]]] += 1
        col[obj_pos[g.src[m]]] -= 1
        d1_cols.append(col)
    diffs = [IntMatrix.from_columns(d1_cols, len(objects))]

    level_layout = {}
    gen_counts = {0: len(objects), 1: len(morphisms)}
    for n in C.levels():
        offset = 0
        layout = {}
        level_labels = []
        for p in objects:
            fiber = C.fiber(n, p)
            if isinstance(fiber, FiniteGrp):
                data = {x: i for i, x in enumerate(fiber.elements)}
                layout[p] = (offset, "table", data)
                level_labels.extend(f"{p}:{x}" for x in fiber.elements)
                offset += len(fiber.elements)
            else:
                layout[p] = (offset, "matrix", fiber.ngens)
                level_labels.extend(f"{p}:g{j}" for j in range(fiber.ngens))
                offset += fiber.ngens
        level_layout[n] = (objects, layout)
        gen_counts[n] = offset
        gens.append(offset)
        labels.append(tuple(level_labels))
        rel_cols[n] = []
        index_stub = AbCrIndex(objects, obj_pos, morphisms, mor_pos, level_layout, gen_counts)
        for p in objects:
            fiber = C.fiber(n, p)
            off, kind, data = layout[p]
            if kind == "table":
                for x in fiber.elements:
                    for y in fiber.elements:
                        col = [0] * offset
                        col[off + data[x]] += 1
                        col[off + data[y]] += 1
                        col[off + data[fiber.mul(x, y)]] -= 1
                        rel_cols[n].append(col)
            else:
                for j in range(fiber.rel.cols):
                    col = [0] * offset
                    for i in range(fiber.rel.rows):
                        col[off + i] = fiber.rel[i, j]
                    rel_cols[n].append(col)
        for m in morphisms:
            p, q = g.src[m], g.tgt[m]
            fiber = C.fiber(n, p)
            for x in _fiber_generators(fiber):
                acted = C.act(n, m, x)
                cx = index_stub.element_column(C, n, p, x)
                cy = index_stub.element_column(C, n, q, acted)
                rel_cols[n].append([a - b for a, b in zip(cy, cx)])

    index = AbCrIndex(objects, obj_pos, morphisms, mor_pos, level_layout, gen_counts)

    for n in C.levels():
        cols = []
        _, layout = level_layout[n]
        for p in objects:
            fiber = C.fiber(n, p)
            off, kind, data = layout[p]
            for x in _fiber_generators(fiber):
                if n == 2:
                    m = C.boundary2(p, x)
                    col = [0] * len(morphisms)
                    col[mor_pos[m]] += 1
                else:
                    y = C.boundary(n, p, x)
                    col = list(index.element_column(C, n - 1, p, y))
                cols.append(col)
        diffs.append(IntMatrix.from_columns(cols, gen_counts[n - 1]))

    rels = [IntMatrix.from_columns(rel_cols[n], gens[n]) if rel_cols[n]
            else IntMatrix.zero(gens[n], 0)
            for n in range(C.top + 1)]
    return ChainComplex(gens, rels, diffs, labels=labels), index


def _fiber_generators(fiber):
    """Generators used for columns: all elements (table) or unit vectors."""
    if isinstance(fiber, FiniteGrp):
        return list(fiber.elements)
    return [tuple(1 if i == j else 0 for i in range(fiber.ngens))
            for j in range(fiber.ngens)]


def ab_cr(C: CrossedComplex, reduced: bool = False) -> ChainComplex:
    return ab_cr_with_index(C, reduced)[0]


@dataclass
class SymbolicUcr:
    """U_Cr of a chain complex whose degree-0 or degree-1 group is infinite.

    Only the homological interface is available; enumeration-backed
    operations must materialize, which this backend cannot do.
    """

    A: ChainComplex


def u_cr(A: ChainComplex):
    """The crossed complex |A0| x |A1| with trivial action.

    Falls back to the symbolic backend when the bottom two groups cannot be
    enumerated.
    """
    A0g = AbGrp(A.gen_count(0), A.rel(0))
    A1g = AbGrp(A.gen_count(1), A.rel(1))
    try:
        objs = A0g.elements()
        ells = A1g.elements()
    except EnumerabilityError:
        return SymbolicUcr(A)
    d1 = A.diff(1)
    morphs = [(p, l) for p in objs for l in ells]
    src = {m: m[0] for m in morphs}
    tgt = {m: A0g.reduce(tuple(a + b for a, b in zip(m[0], d1.apply(m[1])))) for m in morphs}
    comp = {}
    for g2 in morphs:
        for f in morphs:
            if src[g2] == tgt[f]:
                comp[g2, f] = (f[0], A1g.mul(g2[1], f[1]))
    gpd = FiniteGroupoid(objs, morphs, src, tgt, comp, {p: (p, A1g.identity) for p in objs})
    top = max(A.top, 1)
    fibers = {}
    deltas = {}
    phi = {}
    delta2 = None
    for n in range(2, top + 1):
        fib = AbGrp(A.gen_count(n), A.rel(n))
        fibers[n] = {p: fib for p in objs}
        phi[n] = {m: MatrixHom(IntMatrix.identity(fib.ngens)) for m in morphs}
        if n >= 3:
            deltas[n] = {p: MatrixHom(A.diff(n)) for p in objs}
    if top >= 2:
        d2 = A.diff(2)
        boundary_trivial = len(ells) == 1 or all(
            not any(A1g.reduce(d2.column(j))) for j in range(d2.cols))
        if not boundary_trivial:
            fib = fibers[2][objs[0]]
            delta2 = {p: {x: (p, A1g.reduce(d2.apply(x))) for x in fib.elements()}
                      for p in objs}
    return CrossedComplex(gpd, top, fibers, delta2, deltas, phi)


# homs C -> U_Cr(A) held by value data (the target is never materialized)


@dataclass(frozen=True)
class LevelValues:
    """Values of one fiber under a hom into U_Cr(A): a finished table for
    table fibers, a matrix on generators for presented abelian fibers."""

    kind: str      # "table" or "matrix"
    data: object   # tuple of (elem, vec) pairs, or IntMatrix

    def value(self, An: AbGrp, x):
        if self.kind == "table":
            return dict(self.data)[x]
        return An.reduce(self.data.apply(x))

    @staticmethod
    def table(d: dict) -> "LevelValues":
        return LevelValues("table", tuple(sorted(d.items())))

    @staticmethod
    def matrix(m: IntMatrix) -> "LevelValues":
        return LevelValues("matrix", m)


@dataclass
class UcrHom:
    obj_map: dict       # object -> A0 vec
    mor_map: dict       # morphism -> (A0 vec, A1 vec)
    level_maps: dict    # n -> obj -> LevelValues


def _hom_gen_elems(fiber):
    if isinstance(fiber, FiniteGrp):
        return list(fiber.elements)
    return [fiber.reduce(v) for v in _fiber_generators(fiber)]


def is_ucr_hom(C: CrossedComplex, A: ChainComplex, h: UcrHom) -> bool:
    """Check the hom laws against the pairs-groupoid structure of U_Cr(A)."""
    g = C.groupoid
    A0 = AbGrp(A.gen_count(0), A.rel(0))
    A1 = AbGrp(A.gen_count(1), A.rel(1))
    d1 = A.diff(1)
    for m in g.morphisms:
        p, l = h.mor_map[m]
        if p != h.obj_map[g.src[m]]:
            return False
        if A0.reduce(tuple(a + b for a, b in zip(p, d1.apply(l)))) != h.obj_map[g.tgt[m]]:
            return False
    for g2, g1 in g.composable_pairs():
        c = g.compose(g2, g1)
        if h.mor_map[c] != (h.mor_map[g1][0], A1.mul(h.mor_map[g2][1], h.mor_map[g1][1])):
            return False
    for n in C.levels():
        An = AbGrp(A.gen_count(n), A.rel(n))
        Alow = AbGrp(A.gen_count(n - 1), A.rel(n - 1))
        dn = A.diff(n)
        for p in g.objects:
            fiber = C.fiber(n, p)
            lv = h.level_maps[n][p]
            if lv.kind == "table":
                # additivity must be checked elementwise on tables
                for x in fiber_elements(fiber):
                    for y in fiber_elements(fiber):
                        if lv.value(An, fiber.mul(x, y)) != \
                                An.mul(lv.value(An, x), lv.value(An, y)):
                            return False
            else:
                # matrices are additive; they must carry relations to zero
                for col in fiber.rel.columns():
                    if any(An.reduce(lv.data.apply(col))):
                        return False
            for x in _hom_gen_elems(fiber):
                if n == 2:
                    m = C.boundary2(p, x)
                    expected = (h.obj_map[p], A1.reduce(A.diff(2).apply(lv.value(An, x))))
                    if h.mor_map[m] != expected:
                        return False
                else:
                    low = h.level_maps[n - 1][p]
                    if low.value(Alow, C.boundary(n, p, x)) != \
                            Alow.reduce(dn.apply(lv.value(An, x))):
                        return False
        for m in g.morphisms:
            p, q = g.src[m], g.tgt[m]
            for x in _hom_gen_elems(C.fiber(n, p)):
                if h.level_maps[n][q].value(An, C.act(n, m, x)) != \
                        h.level_maps[n][p].value(An, x):
                    return False
    return True


def transpose_chain_to_ucr(C: CrossedComplex, A: ChainComplex, f: ChainMap) -> UcrHom:
    """Given f: Ab_Cr(C) -> A, the adjoint hom C -> U_Cr(A)."""
    B, index = ab_cr_with_index(C)
    A0 = AbGrp(A.gen_count(0), A.rel(0))
    A1 = AbGrp(A.gen_count(1), A.rel(1))
    f0, f1 = f.mats[0], f.mats[1]
    obj_map = {p: A0.reduce(f0.column(index.object_pos[p])) for p in C.groupoid.objects}
    mor_map = {}
    for m in C.groupoid.morphisms:
        mor_map[m] = (obj_map[C.groupoid.src[m]],
                      A1.reduce(f1.column(index.morphism_pos[m])))
    level_maps = {}
    for n in C.levels():
        An = AbGrp(A.gen_count(n), A.rel(n))
        fn = f.mats[n]
        level_maps[n] = {}
        for p in C.groupoid.objects:
            fiber = C.fiber(n, p)
            if isinstance(fiber, FiniteGrp):
                table = {x: An.reduce(fn.apply(index.element_column(C, n, p, x)))
                         for x in fiber.elements}
                level_maps[n][p] = LevelValues.table(table)
            else:
                cols = [fn.apply(index.element_column(C, n, p, gv))
                        for gv in _fiber_generators(fiber)]
                level_maps[n][p] = LevelValues.matrix(
                    IntMatrix.from_columns(cols, A.gen_count(n)))
    return UcrHom(obj_map, mor_map, level_maps)


def transpose_ucr_to_chain(C: CrossedComplex, A: ChainComplex, h: UcrHom) -> ChainMap:
    """Given h: C -> U_Cr(A), the adjoint chain map Ab_Cr(C) -> A."""
    B, index = ab_cr_with_index(C)
    mats = [IntMatrix.from_columns([h.obj_map[p] for p in index.objects],
                                   A.gen_count(0)),
            IntMatrix.from_columns([h.mor_map[m][1] for m in index.morphisms],
                                   A.gen_count(1))]
    for n in C.levels():
        An = AbGrp(A.gen_count(n), A.rel(n))
        cols = []
        for p in index.objects:
            fiber = C.fiber(n, p)
            lv = h.level_maps[n][p]
            if isinstance(fiber, FiniteGrp):
                cols.extend(lv.value(An, x) for x in fiber.elements)
            else:
                cols.extend(lv.value(An, fiber.reduce(gv))
                            for gv in _fiber_generators(fiber))
        mats.append(IntMatrix.from_columns(cols, A.gen_count(n)))
    return ChainMap(tuple(mats))


def ucr_homs_equal(C: CrossedComplex, A: ChainComplex, h1: UcrHom, h2: UcrHom) -> bool:
    if h1.obj_map != h2.obj_map or h1.mor_map != h2.mor_map:
        return False
    for n in C.levels():
        An = AbGrp(A.gen_count(n), A.rel(n))
        for p in C.groupoid.objects:
            for x in _hom_gen_elems(C.fiber(n, p)):
                if h1.level_maps[n][p].value(An, x) != h2.level_maps[n][p].value(An, x):
                    return False
    return True


def chain_maps_equal(A_src: ChainComplex, A_dst: ChainComplex, f: ChainMap, g: ChainMap) -> bool:
    top = max(len(f.mats), len(g.mats)) - 1
    for n in range(top + 1):
        fm = f.mat(n, A_src, A_dst)
        gm = g.mat(n, A_src, A_dst)
        lat = A_dst.rel_lattice(n)
        for j in range(A_src.gen_count(n)):
            if lat.reduce(fm.column(j)) != lat.reduce(gm.column(j)):
                return False
    return True


def identity_ucr_hom(C: CrossedComplex, A: ChainComplex) -> UcrHom:
    """The identity on U_Cr(A) viewed as a hom u_cr(A) -> U_Cr(A); C must be
    the materialized u_cr(A)."""
    obj_map = {p: p for p in C.groupoid.objects}
    mor_map = {m: m for m in C.groupoid.morphisms}
    level_maps = {n: {p: LevelValues.matrix(IntMatrix.identity(C.fiber(n, p).ngens))
                      for p in C.groupoid.objects} for n in C.levels()}
    return UcrHom(obj_map, mor_map, level_maps)


def counit(A: ChainComplex) -> ChainMap:
    """Ab_Cr(U_Cr(A)) -> A, computed by transposing the identity."""
    X = u_cr(A)
    if isinstance(X, SymbolicUcr):
        raise RepresentabilityError("counit needs an enumerable U_Cr(A)")
    return transpose_ucr_to_chain(X, A, identity_ucr_hom(X, A))


def unit(C: CrossedComplex) -> UcrHom:
    """C -> U_Cr(Ab_Cr(C)), computed by transposing the identity."""
    B = ab_cr(C)
    mats = [IntMatrix.identity(B.gen_count(n)) for n in range(B.top + 1)]
    return transpose_chain_to_ucr(C, B, ChainMap(tuple(mats)))


def apply_chain_map_to_ucr_hom(f: ChainMap, A_src: ChainComplex, A_dst: ChainComplex,
                               h: UcrHom) -> UcrHom:
    """Postcompose a hom into U_Cr(A_src) with U_Cr(f): U_Cr values map by f."""
    A0 = AbGrp(A_dst.gen_count(0), A_dst.rel(0))
    A1 = AbGrp(A_dst.gen_count(1), A_dst.rel(1))
    obj_map = {p: A0.reduce(f.mats[0].apply(v)) for p, v in h.obj_map.items()}
    mor_map = {}
    for m, (pv, lv) in h.mor_map.items():
        mor_map[m] = (A0.reduce(f.mats[0].apply(pv)), A1.reduce(f.mats[1].apply(lv)))
    level_maps = {}
    for n, per_obj in h.level_maps.items():
        An = AbGrp(A_dst.gen_count(n), A_dst.rel(n))
        out = {}
        for p, lv in per_obj.items():
            if lv.kind == "table":
                out[p] = LevelValues.table(
                    {x: An.reduce(f.mats[n].apply(v)) for x, v in dict(lv.data).items()})
            else:
                out[p] = LevelValues.matrix(f.mats[n] @ lv.data)
        level_maps[n] = out
    return UcrHom(obj_map, mor_map, level_maps)


# the 1-reduced unit isomorphism


def reduced_ab_cr(C: CrossedComplex) -> ChainComplex:
    return ab_cr(C, reduced=True)


def unit_1reduced_data(C: CrossedComplex):
    """Levelwise matrices of the natural map C -> U_Cr(reduced Ab_Cr(C)).

    Returns a dict degree -> (map matrix, source relations, target relations);
    degrees 0 and 1 compare single-element sets against the reduced groups.
    """
    if not C.is_one_reduced():
        raise ValueError("unit comparison needs a 1-reduced crossed complex")
    Ared, index = ab_cr_with_index(C, reduced=True)
    p = C.groupoid.objects[0]
    data = {}
    zero_gens = IntMatrix.zero(0, 0)
    # degrees 0 and 1: both sides are singletons iff the reduced groups vanish
    data[0] = (IntMatrix.zero(Ared.gen_count(0), 0), zero_gens, Ared.rel(0))
    data[1] = (IntMatrix.zero(Ared.gen_count(1), 0), zero_gens, Ared.rel(1))
    for n in C.levels():
        fiber = C.fiber(n, p)
        if isinstance(fiber, FiniteGrp):
            idx, src_rels = table_ab_presentation(fiber)
            cols = [index.element_column(C, n, p, x) for x in fiber.elements]
            f = IntMatrix.from_columns(cols, Ared.gen_count(n))
        else:
            src_rels = fiber.rel
            cols = [index.element_column(C, n, p, g) for g in _fiber_generators(fiber)]
            f = IntMatrix.from_columns(cols, Ared.gen_count(n))
        data[n] = (f, src_rels, Ared.rel(n))
    return data


def unit_data_is_iso(data) -> bool:
    from .chain import presented_quotient_is_iso

    for n, (f, src_rels, dst_rels) in sorted(data.items()):
        if n <= 1:
            if not cokernel_invariants(dst_rels.rows, dst_rels).is_trivial():
                return False
        else:
            if not presented_quotient_is_iso(f, src_rels, dst_rels):
                return False
    return True


def unit_1reduced_iso_check(C: CrossedComplex) -> bool:
    """Whether C -> U_Cr(reduced Ab_Cr(C)) is a levelwise bijection."""
    return unit_data_is_iso(unit_1reduced_data(C))
