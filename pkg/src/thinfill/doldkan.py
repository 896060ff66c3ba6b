"""The abelian Dold-Kan dictionary.

A simplicial abelian group is represented by its normalized chain complex A;
its n-simplices are handled through two interchangeable encodings:

* coordinates: a formal sum of (order-preserving surjection [n] ->> [k],
  element of A_k) pairs, the direct-sum decomposition of the simplex group;
* chain maps: maps from the normalized chains of the standard n-simplex to
  A, i.e. an element of A_{|S|-1} for every nonempty vertex subset S,
  compatible with boundaries.

Faces and degeneracies act on coordinates through epi-mono factorization:
a component (sigma, a) precomposed with a monotone map either moves to the
relabelled surjection, picks up one differential (when exactly the bottom
vertex class disappears), or dies.  Degenerate-as-a-simplex and "top chain
component zero" are different notions: the second one (thinness) is the span
of the first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from .chain import ChainComplex, FGAbelianGroup, cokernel_invariants
from .errors import EnumerabilityError
from .intlinalg import IntMatrix, Lattice, block_diag, hstack, smith_normal_form, solve
from .sset import DegenerateExpr, SimplicialSet


@dataclass(frozen=True, order=True)
class Surjection:
    """Order-preserving surjection [n] ->> [k], stored by its value list."""

    values: tuple

    def __post_init__(self):
        vs = self.values
        if not vs or vs[0] != 0:
            raise ValueError("surjection must start at 0")
        for a, b in zip(vs, vs[1:]):
            if b - a not in (0, 1):
                raise ValueError("not a monotone surjection")

    @property
    def source(self) -> int:
        return len(self.values) - 1

    @property
    def target(self) -> int:
        return self.values[-1]

    def is_identity(self) -> bool:
        return self.source == self.target


def identity_surjection(n: int) -> Surjection:
    return Surjection(tuple(range(n + 1)))


def surjections(n: int, k: int) -> list:
    """All order-preserving surjections [n] ->> [k]; there are C(n, k)."""
    if k < 0 or n < 0 or k > n:
        return []
    out = []
    for jumps in combinations(range(1, n + 1), k):
        vals = [0]
        for i in range(1, n + 1):
            vals.append(vals[-1] + (1 if i in jumps else 0))
        out.append(Surjection(tuple(vals)))
    return out


def all_surjections(n: int) -> list:
    return [s for k in range(n + 1) for s in surjections(n, k)]


@dataclass(frozen=True, order=True)
class GammaSimplex:
    """Formal sum of (surjection, coefficient vector) components."""

    n: int
    comps: tuple  # sorted tuple of (Surjection, vec) with canonical nonzero vecs

    def component(self, sigma: Surjection) -> tuple | None:
        for s, v in self.comps:
            if s == sigma:
                return v
        return None

    def is_zero(self) -> bool:
        return not self.comps


class GammaRep:
    """Gamma of a chain complex, materialized lazily degree by degree."""

    def __init__(self, A: ChainComplex):
        self.A = A
        self._lattices = {}
        self._elements = {}

    # element arithmetic in presented degrees

    def _lattice(self, k: int) -> Lattice:
        if k not in self._lattices:
            self._lattices[k] = Lattice(self.A.rel(k))
        return self._lattices[k]

    def reduce(self, k: int, vec) -> tuple:
        vec = tuple(vec)
        if self.A.rel(k).cols == 0:
            return vec
        return self._lattice(k).reduce(vec)

    def zero_vec(self, k: int) -> tuple:
        return (0,) * self.A.gen_count(k)

    def d_vec(self, k: int, vec) -> tuple:
        return self.reduce(k - 1, self.A.diff(k).apply(vec))

    def elements(self, k: int) -> list:
        """All canonical representatives of the degree-k group (finite only)."""
        if k not in self._elements:
            g = self.A.gen_count(k)
            if g == 0:
                self._elements[k] = [()]
            else:
                S = smith_normal_form(self.A.rel(k))
                diag = [d for d in S.D.diagonal() if d != 0]
                if len(diag) < g:
                    raise EnumerabilityError(
                        f"degree-{k} group has positive rank; cannot enumerate")
                elems = []
                for ys in product(*[range(d) for d in diag]):
                    elems.append(self.reduce(k, S.Uinv.apply(ys)))
                elems = sorted(set(elems))
                self._elements[k] = elems
        return self._elements[k]

    # simplices

    def simplex(self, n: int, comps) -> GammaSimplex:
        """Canonical simplex from a components mapping."""
        cleaned = []
        for sigma, vec in comps.items():
            if sigma.source != n:
                raise ValueError("component with wrong source")
            v = self.reduce(sigma.target, vec)
            if any(v):
                cleaned.append((sigma, v))
        return GammaSimplex(n, tuple(sorted(cleaned)))

    def zero_simplex(self, n: int) -> GammaSimplex:
        return GammaSimplex(n, ())

    def generator_simplex(self, n: int, vec) -> GammaSimplex:
        return self.simplex(n, {identity_surjection(n): vec})

    def add(self, x: GammaSimplex, y: GammaSimplex) -> GammaSimplex:
        if x.n != y.n:
            raise ValueError("degree mismatch")
        comps = {}
        for s, v in x.comps + y.comps:
            if s in comps:
                comps[s] = tuple(a + b for a, b in zip(comps[s], v))
            else:
                comps[s] = v
        return self.simplex(x.n, comps)

    def neg(self, x: GammaSimplex) -> GammaSimplex:
        return self.simplex(x.n, {s: tuple(-a for a in v) for s, v in x.comps})

    def top(self, x: GammaSimplex) -> tuple:
        v = x.component(identity_surjection(x.n))
        return v if v is not None else self.zero_vec(x.n)

    def is_thin(self, x: GammaSimplex) -> bool:
        """Thin = degenerate-spanned = top chain component zero."""
        return not any(self.top(x))

    def apply_monotone(self, x: GammaSimplex, alpha: tuple) -> GammaSimplex:
        """Precompose with the monotone map [m] -> [n] given by its values.

        For each component (sigma, a): factor sigma o alpha = delta' o sigma'.
        If delta' is the identity the component moves to sigma'; if it is the
        inclusion of {1..k} the component moves with one differential applied;
        anything else kills the component.
        """
        m = len(alpha) - 1
        comps = {}

        def accumulate(sigma, vec):
            if sigma in comps:
                comps[sigma] = tuple(a + b for a, b in zip(comps[sigma], vec))
            else:
                comps[sigma] = tuple(vec)

        for sigma, vec in x.comps:
            comp = tuple(sigma.values[a] for a in alpha)
            k = sigma.target
            img = set(comp)
            if len(img) == k + 1:
                accumulate(Surjection(comp), vec)
            elif img == set(range(1, k + 1)):
                accumulate(Surjection(tuple(c - 1 for c in comp)), self.d_vec(k, vec))
        return self.simplex(m, comps)

    def face(self, x: GammaSimplex, i: int) -> GammaSimplex:
        if not 0 <= i <= x.n:
            raise IndexError("face index out of range")
        alpha = tuple(range(i)) + tuple(range(i + 1, x.n + 1))
        return self.apply_monotone(x, alpha)

    def degeneracy(self, x: GammaSimplex, j: int) -> GammaSimplex:
        if not 0 <= j <= x.n:
            raise IndexError("degeneracy index out of range")
        alpha = tuple(range(j + 1)) + tuple(range(j, x.n + 1))
        return self.apply_monotone(x, alpha)

    def alternating_face_sum(self, x: GammaSimplex) -> GammaSimplex:
        out = self.zero_simplex(x.n - 1)
        for i in range(x.n + 1):
            f = self.face(x, i)
            out = self.add(out, f if i % 2 == 0 else self.neg(f))
        return out

    # the Gamma groups

    def simplex_group(self, n: int) -> FGAbelianGroup:
        """Direct sum over surjections [n] ->> [k] of the degree-k groups."""
        gens = 0
        blocks = []
        for sigma in all_surjections(n):
            k = sigma.target
            gens += self.A.gen_count(k)
            blocks.append(self.A.rel(k))
        return cokernel_invariants(gens, block_diag(blocks))

    def all_simplices(self, n: int) -> list:
        """Every n-simplex (finite coefficient groups only)."""
        sigmas = all_surjections(n)
        pools = [self.elements(s.target) for s in sigmas]
        out = []
        for choice in product(*pools):
            out.append(self.simplex(n, dict(zip(sigmas, choice))))
        return sorted(set(out))

    # the chain-map dictionary (Lemma-style bijection with maps out of
    # normalized chains of the standard simplex)

    def chain_map_of(self, x: GammaSimplex) -> dict:
        """Values on nonempty vertex subsets of the standard n-simplex."""
        n = x.n
        F = {}
        for size in range(1, n + 2):
            for S in combinations(range(n + 1), size):
                acc = list(self.zero_vec(size - 1))
                for sigma, vec in x.comps:
                    k = sigma.target
                    img = sorted({sigma.values[s] for s in S})
                    if len(img) != size:
                        continue
                    if img == list(range(k + 1)):
                        for t, a in enumerate(vec):
                            acc[t] += a
                    elif img == list(range(1, k + 1)):
                        dv = self.d_vec(k, vec)
                        for t, a in enumerate(dv):
                            acc[t] += a
                v = self.reduce(size - 1, acc)
                if any(v):
                    F[S] = v
        return F

    def chain_map_is_valid(self, n: int, F: dict) -> bool:
        for size in range(2, n + 2):
            for S in combinations(range(n + 1), size):
                lhs = self.d_vec(size - 1, F.get(S, self.zero_vec(size - 1)))
                acc = list(self.zero_vec(size - 2))
                for i in range(size):
                    sub = S[:i] + S[i + 1:]
                    v = F.get(sub, self.zero_vec(size - 2))
                    sign = 1 if i % 2 == 0 else -1
                    for t, a in enumerate(v):
                        acc[t] += sign * a
                if lhs != self.reduce(size - 2, acc):
                    return False
        return True

    def simplex_of_chain_map(self, n: int, F: dict) -> GammaSimplex:
        """Invert the dictionary by one exact integer solve."""
        sigmas = all_surjections(n)
        subsets = [S for size in range(1, n + 2) for S in combinations(range(n + 1), size)]
        row_of = {}
        rows = 0
        for S in subsets:
            row_of[S] = rows
            rows += self.A.gen_count(len(S) - 1)
        cols = []
        for sigma in sigmas:
            k = sigma.target
            gk = self.A.gen_count(k)
            block = [[0] * gk for _ in range(rows)]
            dmat = self.A.diff(k)
            for S in subsets:
                img = sorted({sigma.values[s] for s in S})
                if len(img) != len(S):
                    continue
                r0 = row_of[S]
                if img == list(range(k + 1)):
                    for t in range(gk):
                        block[r0 + t][t] += 1
                elif img == list(range(1, k + 1)):
                    for t in range(self.A.gen_count(k - 1)):
                        for u in range(gk):
                            block[r0 + t][u] += dmat[t, u]
            cols.append(IntMatrix.from_rows(block, cols=gk))
        # relation slack per subset equation
        for S in subsets:
            relS = self.A.rel(len(S) - 1)
            block = [[0] * relS.cols for _ in range(rows)]
            r0 = row_of[S]
            for t in range(relS.rows):
                for u in range(relS.cols):
                    block[r0 + t][u] = relS[t, u]
            cols.append(IntMatrix.from_rows(block, cols=relS.cols))
        system = hstack(cols, rows=rows)
        rhs = [0] * rows
        for S, vec in F.items():
            S = tuple(sorted(S))
            r0 = row_of[S]
            for t, a in enumerate(vec):
                rhs[r0 + t] = a
        x = solve(system, rhs)
        if x is None:
            raise ValueError("values do not assemble into a simplex")
        comps = {}
        pos = 0
        for sigma in sigmas:
            gk = self.A.gen_count(sigma.target)
            comps[sigma] = tuple(x[pos:pos + gk])
            pos += gk
        result = self.simplex(n, comps)
        if self.chain_map_of(result) != {tuple(sorted(S)): self.reduce(len(S) - 1, v)
                                         for S, v in F.items()
                                         if any(self.reduce(len(S) - 1, v))}:
            raise ValueError("values do not assemble into a simplex")
        return result

    # normal forms and materialization

    def degenerate_direction(self, x: GammaSimplex) -> int | None:
        for i in range(x.n):
            if all(s.values[i] == s.values[i + 1] for s, _ in x.comps):
                return i
        return None

    def strip_degeneracy(self, x: GammaSimplex, i: int) -> GammaSimplex:
        comps = {}
        for sigma, vec in x.comps:
            vals = sigma.values[:i + 1] + sigma.values[i + 2:]
            comps[Surjection(vals)] = vec
        return self.simplex(x.n - 1, comps)

    def normal_form(self, x: GammaSimplex):
        """Eilenberg-Zilber form: (strictly decreasing word, nondegenerate base)."""
        word = ()
        while True:
            i = self.degenerate_direction(x)
            if i is None or x.n == 0:
                return word, x
            pre = tuple(w + 1 for w in word if w >= i)
            post = tuple(w for w in word if w < i)
            word = pre + (i,) + post
            x = self.strip_degeneracy(x, i)


@dataclass
class Materialization:
    """Explicit cells of Gamma(A) through a dimension bound."""

    rep: GammaRep
    nmax: int
    sset: SimplicialSet
    thin: frozenset
    cell_to_simplex: dict
    simplex_to_cell: dict

    def expr_of(self, x: GammaSimplex) -> DegenerateExpr:
        word, base = self.rep.normal_form(x)
        return DegenerateExpr(word, self.simplex_to_cell[base])

    def simplex_of(self, expr: DegenerateExpr) -> GammaSimplex:
        x = self.cell_to_simplex[expr.base]
        for w in reversed(expr.word):
            x = self.rep.degeneracy(x, w)
        return x

    def thin_expr(self, expr: DegenerateExpr) -> bool:
        return bool(expr.word) or expr.base in self.thin


def materialize(rep: GammaRep, nmax: int) -> Materialization:
    cells = {}
    faces = {}
    cell_to_simplex = {}
    simplex_to_cell = {}
    thin = set()
    for n in range(nmax + 1):
        nondeg = [x for x in rep.all_simplices(n) if rep.degenerate_direction(x) is None or n == 0]
        if n == 0:
            nondeg = rep.all_simplices(0)
        names = []
        for idx, x in enumerate(nondeg):
            name = f"g{n}c{idx}"
            names.append(name)
            cell_to_simplex[name] = x
            simplex_to_cell[x] = name
            if n >= 1 and rep.is_thin(x):
                thin.add(name)
        cells[n] = names
        if n == 0:
            continue
        for name in names:
            x = cell_to_simplex[name]
            fs = []
            for i in range(n + 1):
                y = rep.face(x, i)
                word, base = rep.normal_form(y)
                fs.append(DegenerateExpr(word, simplex_to_cell[base]))
            faces[name] = tuple(fs)
    ss = SimplicialSet(cells, faces, dim_bound=nmax, truncated=True)
    return Materialization(rep, nmax, ss, frozenset(thin), cell_to_simplex, simplex_to_cell)


# spec-level operations


def gamma_simplex_group(A: ChainComplex, n: int) -> FGAbelianGroup:
    return GammaRep(A).simplex_group(n)


def simplex_as_chain_map(A: ChainComplex, x: GammaSimplex) -> dict:
    return GammaRep(A).chain_map_of(x)


def chain_map_as_simplex(A: ChainComplex, n: int, F: dict) -> GammaSimplex:
    return GammaRep(A).simplex_of_chain_map(n, F)


def thin_filler_abelian(rep: GammaRep, n: int, k: int, faces: dict) -> GammaSimplex:
    """The unique filler of a horn whose top chain component is zero.

    ``faces`` maps each index i != k to an (n-1)-simplex.  The missing
    facet's top value is forced by the zero top component; everything else is
    read off the horn.
    """
    if set(faces) != {i for i in range(n + 1) if i != k}:
        raise ValueError("horn faces must cover every index except k")
    F = {}
    for i, y in sorted(faces.items()):
        if y.n != n - 1:
            raise ValueError("face of wrong dimension")
        Fy = rep.chain_map_of(y)
        embed = tuple(v for v in range(n + 1) if v != i)
        for S, vec in Fy.items():
            T = tuple(sorted(embed[s] for s in S))
            if T in F and F[T] != vec:
                raise ValueError("incompatible horn")
            F[T] = vec
    acc = list(rep.zero_vec(n - 1))
    for i, y in faces.items():
        sign = 1 if i % 2 == 0 else -1
        for t, a in enumerate(rep.top(y)):
            acc[t] += sign * a
    sign_k = 1 if (k + 1) % 2 == 0 else -1
    missing = tuple(sorted(set(range(n + 1)) - {k}))
    vec = rep.reduce(n - 1, tuple(sign_k * a for a in acc))
    if any(vec):
        F[missing] = vec
    elif missing in F:
        del F[missing]
    if not rep.chain_map_is_valid(n, F):
        raise ValueError("incompatible horn")
    z = rep.simplex_of_chain_map(n, F)
    for i, y in faces.items():
        if rep.face(z, i) != y:
            raise ValueError("incompatible horn")
    return z


def nz_of_gamma(rep: GammaRep, up_to: int | None = None) -> ChainComplex:
    """Normalized chains of Gamma(A), reconstructed through the simplex
    operators; equals A on the nose (killed degenerate components dropped)."""
    A = rep.A
    top = A.top if up_to is None else up_to
    gens = [A.gen_count(n) for n in range(top + 1)]
    rels = [A.rel(n) for n in range(top + 1)]
    diffs = []
    for n in range(1, top + 1):
        cols = []
        for j in range(gens[n]):
            unit = [0] * gens[n]
            unit[j] = 1
            x = rep.generator_simplex(n, unit)
            cols.append(rep.top(rep.alternating_face_sum(x)))
        diffs.append(IntMatrix.from_columns(cols, gens[n - 1]))
    return ChainComplex(gens, rels, diffs)


def gamma_is_coskeletal(A: ChainComplex, m: int, dmax: int):
    """Unique sphere extensions in Gamma(A) above level m, by linear algebra.

    A boundary sphere in dimension n is a chain map off the boundary of the
    standard simplex; extensions correspond to solutions of d(alpha) = c with
    c the sphere's cycle.  Uniqueness for every sphere is ker(d_n) = 0 in the
    presented group; existence is surjectivity of d_n onto the (n-1)-cycles.
    """
    from .chain import cycle_generators
    from .intlinalg import lattice_of_columns

    for n in range(m + 1, dmax + 1):
        ker_gens = cycle_generators(A, n)
        rel_lat = Lattice(A.rel(n))
        for v in ker_gens:
            if not rel_lat.contains(v):
                return False, f"dimension {n}: nonzero kernel direction {v}"
        gnm1 = A.gen_count(n - 1)
        if gnm1 == 0:
            continue
        if n - 1 == 0:
            cycles = [tuple(1 if i == j else 0 for i in range(gnm1)) for j in range(gnm1)]
        else:
            cycles = cycle_generators(A, n - 1)
        image = lattice_of_columns(A.diff(n).columns() + A.rel(n - 1).columns(), gnm1)
        for c in cycles:
            if not image.contains(c):
                return False, f"dimension {n}: sphere class {c} has no filler"
    return True, None
