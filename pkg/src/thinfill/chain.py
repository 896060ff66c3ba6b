"""Nonnegatively graded chain complexes of finitely presented abelian groups.

Each degree carries a presentation (generator count plus an integer relation
matrix whose columns are relations), not just a free group: abelianized
crossed complexes genuinely produce torsion in low degrees.  Homology is
computed with the relations incorporated and returned in invariant-factor
form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import (
    IntMatrix,
    Lattice,
    block_diag,
    hstack,
    kernel_basis,
    lattice_of_columns,
    smith_normal_form,
    subquotient_invariant_diagonal,
)


@dataclass(frozen=True)
class FGAbelianGroup:
    """Finitely generated abelian group in invariant-factor form.

    ``torsion`` is the divisibility chain d1 | d2 | ... with every entry >= 2.
    """

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion coefficients must form a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def order(self):
        """Group order, or None when infinite."""
        if self.rank > 0:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def cokernel_invariants(ngens: int, relations: IntMatrix) -> FGAbelianGroup:
    """Invariant factors of Z^ngens modulo the column lattice of relations."""
    if relations.rows != ngens:
        raise ValueError("relation matrix has wrong ambient dimension")
    diag = smith_normal_form(relations).D.diagonal()
    nonzero = [d for d in diag if d != 0]
    return FGAbelianGroup(ngens - len(nonzero), tuple(d for d in nonzero if d >= 2))


class ChainComplex:
    """Chain complex of presented abelian groups in degrees 0..top.

    ``gens[n]`` counts degree-n generators, ``rels[n]`` is the relation
    matrix (gens[n] rows, one column per relation), ``diffs[n]`` is the
    differential from degree n to degree n-1 (for n >= 1).  Degrees above
    ``top`` are zero.  ``labels`` optionally names the generators.
    """

    def __init__(self, gens, rels=None, diffs=None, labels=None):
        self.gens = tuple(int(g) for g in gens)
        top = len(self.gens) - 1
        if rels is None:
            rels = [IntMatrix.zero(self.gens[n], 0) for n in range(top + 1)]
        self.rels = tuple(rels)
        if diffs is None:
            diffs = [IntMatrix.zero(self.gens[n - 1], self.gens[n]) for n in range(1, top + 1)]
        self.diffs = tuple(diffs)
        self.labels = None if labels is None else tuple(tuple(l) for l in labels)
        self._check_shapes()

    def _check_shapes(self):
        top = self.top
        if len(self.rels) != top + 1 or len(self.diffs) != top:
            raise ValueError("per-degree data has wrong length")
        for n in range(top + 1):
            if self.rels[n].rows != self.gens[n]:
                raise ValueError(f"relation matrix shape mismatch in degree {n}")
        for n in range(1, top + 1):
            d = self.diffs[n - 1]
            if (d.rows, d.cols) != (self.gens[n - 1], self.gens[n]):
                raise ValueError(f"differential shape mismatch in degree {n}")
        if self.labels is not None:
            for n, lab in enumerate(self.labels):
                if len(lab) != self.gens[n]:
                    raise ValueError(f"label count mismatch in degree {n}")

    @property
    def top(self) -> int:
        return len(self.gens) - 1

    def gen_count(self, n: int) -> int:
        return self.gens[n] if 0 <= n <= self.top else 0

    def rel(self, n: int) -> IntMatrix:
        if 0 <= n <= self.top:
            return self.rels[n]
        return IntMatrix.zero(self.gen_count(n), 0)

    def diff(self, n: int) -> IntMatrix:
        """Differential from degree n to degree n-1 (zero outside range)."""
        if 1 <= n <= self.top:
            return self.diffs[n - 1]
        return IntMatrix.zero(self.gen_count(n - 1), self.gen_count(n))

    def rel_lattice(self, n: int) -> Lattice:
        return Lattice(self.rel(n))

    def group(self, n: int) -> FGAbelianGroup:
        """The degree-n group, relations included."""
        if not 0 <= n <= self.top:
            return FGAbelianGroup(0)
        return cokernel_invariants(self.gens[n], self.rels[n])

    def __eq__(self, other):
        return (isinstance(other, ChainComplex) and self.gens == other.gens
                and self.rels == other.rels and self.diffs == other.diffs)

    def __repr__(self):
        return f"ChainComplex(gens={self.gens})"


def validate_chain(C: ChainComplex) -> list:
    """Report of violated chain axioms (empty iff valid).

    Checks d(d(x)) = 0 modulo relations for every generator, and that every
    relation is carried into the relation lattice one degree down.
    """
    report = []
    for n in range(2, C.top + 1):
        dd = C.diff(n - 1) @ C.diff(n)
        lat = C.rel_lattice(n - 2)
        for j in range(dd.cols):
            if not lat.contains(dd.column(j)):
                report.append(f"d^2 != 0 on degree-{n} generator {j}")
    for n in range(1, C.top + 1):
        img = C.diff(n) @ C.rel(n)
        lat = C.rel_lattice(n - 1)
        for j in range(img.cols):
            if not lat.contains(img.column(j)):
                report.append(f"relation {j} in degree {n} not carried into relations")
    return report


def cycle_generators(C: ChainComplex, n: int) -> list:
    """Generating vectors for ker(d_n) in the presented degree-n group.

    These are vectors x in Z^gens[n] with d_n(x) in the degree-(n-1)
    relation lattice; the relation lattice of degree n itself is included.
    """
    gn = C.gen_count(n)
    if gn == 0:
        return []
    if n == 0:
        return [tuple(1 if i == j else 0 for i in range(gn)) for j in range(gn)]
    blocked = hstack([C.diff(n), C.rel(n - 1)], rows=C.gen_count(n - 1))
    gens = [tuple(v[:gn]) for v in kernel_basis(blocked)]
    gens.extend(C.rel(n).columns())
    return gens


def homology(C: ChainComplex, n: int) -> FGAbelianGroup:
    """H_n(C) = ker(d_n)/im(d_{n+1}) with relations incorporated."""
    gn = C.gen_count(n)
    if gn == 0:
        return FGAbelianGroup(0)
    bad = validate_chain(C)
    if bad:
        raise ValueError("not a chain complex: " + "; ".join(bad[:3]))
    numerator = lattice_of_columns(cycle_generators(C, n), gn)
    denominator = C.diff(n + 1).columns() + C.rel(n).columns()
    rank, torsion = subquotient_invariant_diagonal(numerator, denominator)
    return FGAbelianGroup(rank, tuple(torsion))


def homology_all(C: ChainComplex, up_to: int | None = None) -> list:
    top = C.top if up_to is None else up_to
    return [homology(C, n) for n in range(top + 1)]


def euler_characteristic(C: ChainComplex) -> int:
    """Alternating sum of the free ranks of the chain groups."""
    chi = 0
    for n in range(C.top + 1):
        chi += (-1) ** n * C.group(n).rank
    return chi


# Builders


def zero_complex(top: int = 0) -> ChainComplex:
    return ChainComplex([0] * (top + 1))


def concentrated(group: FGAbelianGroup, degree: int) -> ChainComplex:
    """The complex with one presented group in a single degree."""
    g = group.rank + len(group.torsion)
    gens = [0] * degree + [g]
    rels = [IntMatrix.zero(0, 0)] * degree
    cols = [[0] * g for _ in group.torsion]
    for j, d in enumerate(group.torsion):
        cols[j][group.rank + j] = d
    rels.append(IntMatrix.from_columns(cols, g) if cols else IntMatrix.zero(g, 0))
    return ChainComplex(gens, rels)


def direct_sum(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    top = max(A.top, B.top)
    gens = [A.gen_count(n) + B.gen_count(n) for n in range(top + 1)]
    rels = [block_diag([A.rel(n), B.rel(n)]) for n in range(top + 1)]
    diffs = [block_diag([A.diff(n), B.diff(n)]) for n in range(1, top + 1)]
    return ChainComplex(gens, rels, diffs)


def two_term(mult: int, lower_degree: int) -> ChainComplex:
    """Z --mult--> Z placed in degrees (lower_degree+1, lower_degree)."""
    top = lower_degree + 1
    gens = [0] * lower_degree + [1, 1]
    diffs = [IntMatrix.from_rows([[mult]]) if n == top else IntMatrix.zero(gens[n - 1], gens[n])
             for n in range(1, top + 1)]
    return ChainComplex(gens, diffs=diffs)


def canonicalize_diffs(C: ChainComplex) -> ChainComplex:
    """Reduce every differential column modulo the target relation lattice.

    This is a normal form for presented complexes; the represented complex is
    unchanged.
    """
    diffs = []
    for n in range(1, C.top + 1):
        lat = C.rel_lattice(n - 1)
        cols = [lat.reduce(C.diff(n).column(j)) for j in range(C.gen_count(n))]
        diffs.append(IntMatrix.from_columns(cols, C.gen_count(n - 1)))
    return ChainComplex(C.gens, C.rels, diffs, labels=C.labels)


def normalized_chains(X, reduced: bool = False, basepoint: str | None = None) -> ChainComplex:
    """Normalized chains of a simplicial set.

    Degree-n generators are the nondegenerate n-cells; the differential is
    the alternating sum of faces with degenerate faces contributing zero.
    The reduced variant adds the relation [basepoint] = 0 in degree 0.
    """
    dims = sorted(X.cells.keys())
    top = max(dims) if dims else 0
    labels = [tuple(X.cells.get(n, ())) for n in range(top + 1)]
    index = [{name: i for i, name in enumerate(lab)} for lab in labels]
    gens = [len(lab) for lab in labels]
    diffs = []
    for n in range(1, top + 1):
        rows = [[0] * gens[n] for _ in range(gens[n - 1])]
        for j, cell in enumerate(labels[n]):
            for i in range(n + 1):
                f = X.face_of_cell(cell, i)
                if not f.word:
                    rows[index[n - 1][f.base]][j] += (-1) ** i
        diffs.append(IntMatrix.from_rows(rows, cols=gens[n]))
    rels = [IntMatrix.zero(g, 0) for g in gens]
    if reduced:
        if gens[0] == 0:
            raise ValueError("reduced chains need at least one vertex")
        if basepoint is None:
            basepoint = min(labels[0])
        col = [0] * gens[0]
        col[index[0][basepoint]] = 1
        rels[0] = IntMatrix.from_columns([col], gens[0])
    return ChainComplex(gens, rels, diffs, labels=labels)


@dataclass(frozen=True)
class ChainMap:
    """Degreewise matrices of a map between chain complexes."""

    mats: tuple

    def mat(self, n: int, src: ChainComplex, dst: ChainComplex) -> IntMatrix:
        if 0 <= n < len(self.mats):
            return self.mats[n]
        return IntMatrix.zero(dst.gen_count(n), src.gen_count(n))


def is_chain_map(src: ChainComplex, dst: ChainComplex, f: ChainMap) -> bool:
    """Check commutation with differentials and relation preservation, both
    modulo the target relations."""
    top = max(src.top, len(f.mats) - 1)
    for n in range(top + 1):
        fn = f.mat(n, src, dst)
        if (fn.rows, fn.cols) != (dst.gen_count(n), src.gen_count(n)):
            return False
        lat = dst.rel_lattice(n)
        img = fn @ src.rel(n)
        if any(not lat.contains(img.column(j)) for j in range(img.cols)):
            return False
        if n >= 1:
            lhs = dst.diff(n) @ fn
            rhs = f.mat(n - 1, src, dst) @ src.diff(n)
            low = dst.rel_lattice(n - 1)
            diff = lhs + (-rhs)
            if any(not low.contains(diff.column(j)) for j in range(diff.cols)):
                return False
    return True


def presented_quotient_is_iso(f: IntMatrix, src_rels: IntMatrix, dst_rels: IntMatrix) -> bool:
    """Whether the map induced by f between presented groups is bijective.

    Surjectivity: image columns plus target relations span the full lattice.
    Injectivity: the preimage of the target relation lattice is contained in
    the source relation lattice.
    """
    dst_lat = Lattice(dst_rels)
    img = [f.column(j) for j in range(f.cols)]
    full = lattice_of_columns(img + dst_rels.columns(), f.rows)
    unit = [tuple(1 if i == j else 0 for i in range(f.rows)) for j in range(f.rows)]
    if not all(full.contains(u) for u in unit):
        return False
    # x with f(x) in dst relations: kernel of [f | dst_rels] projected to x
    blocked = hstack([f, dst_rels], rows=f.rows)
    src_lat = Lattice(src_rels)
    for v in kernel_basis(blocked):
        if not src_lat.contains(v[:f.cols]):
            return False
    return True
