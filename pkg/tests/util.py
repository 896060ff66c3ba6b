"""Shared builders for randomized test inputs."""

import random

from thinfill.chain import (
    ChainComplex,
    FGAbelianGroup,
    concentrated,
    direct_sum,
    two_term,
    zero_complex,
)
from thinfill.intlinalg import IntMatrix
from thinfill.sset import simplicial_complex


def random_presented_complex(rng: random.Random, top: int = 6) -> ChainComplex:
    """A random valid presented chain complex: a sum of elementary blocks
    (torsion concentrations and two-term multiplication complexes) followed
    by a random unimodular change of basis in every degree."""
    C = zero_complex(top)
    for _ in range(rng.randint(1, 4)):
        deg = rng.randint(0, top)
        kind = rng.random()
        if kind < 0.4:
            d = rng.choice([2, 3, 4, 6])
            C = direct_sum(C, concentrated(FGAbelianGroup(0, (d,)), deg))
        elif kind < 0.7:
            C = direct_sum(C, concentrated(FGAbelianGroup(rng.randint(1, 2)), deg))
        else:
            if deg < top:
                C = direct_sum(C, two_term(rng.choice([0, 1, 2, 3]), deg))
            else:
                C = direct_sum(C, concentrated(FGAbelianGroup(1), deg))
    from thinfill.chain import canonicalize_diffs

    return canonicalize_diffs(change_basis_randomly(C, rng))


def random_unimodular(n: int, rng: random.Random) -> IntMatrix:
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            M[i][k] += c * M[j][k]
    return IntMatrix.from_rows(M, cols=n)


def invert_unimodular(M: IntMatrix) -> IntMatrix:
    from thinfill.intlinalg import smith_normal_form

    S = smith_normal_form(M)
    # D = U M V with D = I for unimodular M, so M^{-1} = V U
    assert all(d == 1 for d in S.D.diagonal())
    return S.V @ S.U


def change_basis_randomly(C: ChainComplex, rng: random.Random) -> ChainComplex:
    """Conjugate every degree by a random unimodular matrix (preserves validity)."""
    ps = [random_unimodular(C.gen_count(n), rng) for n in range(C.top + 1)]
    inv = [invert_unimodular(p) for p in ps]
    gens = list(C.gens)
    rels = [ps[n] @ C.rel(n) for n in range(C.top + 1)]
    diffs = [ps[n - 1] @ C.diff(n) @ inv[n] for n in range(1, C.top + 1)]
    return ChainComplex(gens, rels, diffs)


def random_ordered_complex(rng: random.Random, nverts: int = 5):
    """A random small ordered simplicial complex as a simplicial set."""
    verts = list(range(nverts))
    facets = [(v,) for v in verts]
    for _ in range(rng.randint(2, 6)):
        size = rng.choice([2, 2, 3, 3, 4])
        chosen = tuple(sorted(rng.sample(verts, min(size, nverts))))
        facets.append(chosen)
    return simplicial_complex(facets)
