import itertools

import pytest

from thinfill.chain import (
    ChainComplex,
    FGAbelianGroup,
    concentrated,
    direct_sum,
    homology,
    homology_all,
    validate_chain,
    zero_complex,
)
from thinfill.crossed import (
    FiniteGrp,
    ab_cr,
    identity_crossed_module,
    level1,
    one_reduced,
    u_cr,
    AbGrp,
    MatrixHom,
)
from thinfill.doldkan import gamma_simplex_group
from thinfill.errors import EnumerabilityError
from thinfill.intlinalg import IntMatrix, lattice_of_columns
from thinfill.sset import Horn, cell, enumerate_horns, validate_sset
from thinfill.tcomplex import (
    MarkedFilledComplex,
    NdkSimplex,
    TComplex,
    ab_st,
    compose_horn,
    cothin_pairs,
    eta_iso,
    marked_from_tcomplex,
    ndk_build,
    tcomplex_validate,
    thin_closure,
    thin_fillers_of,
    u_st,
)

ZMOD = lambda d, k: concentrated(FGAbelianGroup(0, (d,)), k)


def edge_expr(X, a):
    """Expression of the 1-simplex of a one-object nerve given by element a."""
    reg = X.ndk
    g = reg.C.groupoid
    m = ("*", a)
    sid = reg.index[1][NdkSimplex(1, (0, 0), m)]
    return reg.normal[1][sid]


def triangle_expr(X, f, g_elt):
    """Expression of the thin triangle with short edges f then g."""
    reg = X.ndk
    G = reg.C.groupoid
    m2, m0 = ("*", f), ("*", g_elt)
    m1 = G.compose(m0, m2)
    e = {m: reg.index[1][NdkSimplex(1, (0, 0), m)] for m in (m0, m1, m2)}
    p0 = reg.simplices[0][0].alpha
    alpha = reg.C.fiber(2, p0).identity
    sid = reg.index[2][NdkSimplex(2, (e[m0], e[m1], e[m2]), alpha)]
    return reg.normal[2][sid]


def test_nerve_z2_structure():
    X = ndk_build(level1(FiniteGrp.cyclic(2)), 3)
    ss = X.sset
    assert validate_sset(ss) == []
    # one nondegenerate cell per dimension (the all-g string)
    for n in range(4):
        assert len(ss.cells.get(n, ())) == 1
    # total 2-simplices, degenerate ones included
    assert len(ss.simplices(2)) == 4
    assert tcomplex_validate(X, 3) == []


def test_nerve_z3_counts_and_validation():
    X = ndk_build(level1(FiniteGrp.cyclic(3)), 3)
    assert validate_sset(X.sset) == []
    for n in range(4):
        assert len(X.sset.simplices(n)) == 3 ** n
    assert tcomplex_validate(X, 3) == []


def test_nerve_of_trivial_complex_is_point():
    X = ndk_build(one_reduced({}), 4)
    for n in range(5):
        assert len(X.sset.simplices(n)) == 1


def test_one_reduced_z2_at_2_has_two_2cells():
    C = one_reduced({2: AbGrp.from_invariants(FGAbelianGroup(0, (2,)))})
    X = ndk_build(C, 3)
    sims = [s for s in X.ndk.simplices[2]]
    assert len(sims) == 2
    thin = [s for s in sims if s.alpha == (0,)]
    assert len(thin) == 1
    assert tcomplex_validate(X, 3) == []


def test_nerve_nonabelian_identity_module():
    X = ndk_build(identity_crossed_module(FiniteGrp.cyclic(2)), 3)
    assert validate_sset(X.sset) == []
    assert tcomplex_validate(X, 3) == []


def test_nerve_s3_identities_dim3():
    X = ndk_build(level1(FiniteGrp.symmetric(3)), 3)
    assert validate_sset(X.sset) == []
    assert len(X.sset.simplices(2)) == 36
    assert len(X.sset.simplices(3)) == 216


def test_compose_horn_reproduces_group_table():
    for G, order in ((FiniteGrp.cyclic(6), 6), (FiniteGrp.symmetric(3), 6)):
        X = ndk_build(level1(G), 2)
        for f in G.elements:
            for g_elt in G.elements:
                h = Horn(2, 1, (edge_expr(X, g_elt), edge_expr(X, f)))
                comp = compose_horn(X, h)
                assert comp == edge_expr(X, G.mul(g_elt, f))


def test_compose_horn_unit_law():
    G = FiniteGrp.cyclic(6)
    X = ndk_build(level1(G), 2)
    e = edge_expr(X, 0)          # degenerate edge at the vertex
    assert e.word == (0,)
    for a in G.elements:
        h = Horn(2, 1, (e, edge_expr(X, a)))
        assert compose_horn(X, h) == edge_expr(X, a)


def test_compose_outer_horns():
    G = FiniteGrp.symmetric(3)
    X = ndk_build(level1(G), 2)
    for f in G.elements:
        for g_elt in G.elements:
            # k = 0: d1 = g.f known, d2 = f: solve d0 = g
            h = Horn(2, 0, (edge_expr(X, G.mul(g_elt, f)), edge_expr(X, f)))
            assert compose_horn(X, h) == edge_expr(X, g_elt)
            # k = 2: d0 = g, d1 = g.f: solve d2 = f
            h = Horn(2, 2, (edge_expr(X, g_elt), edge_expr(X, G.mul(g_elt, f))))
            assert compose_horn(X, h) == edge_expr(X, f)


def lambda3_associativity(X, G, f, g_elt, h_elt):
    """Build the third-dimensional horn of the associativity argument and
    read the long edge of its composition."""
    gf = G.mul(g_elt, f)
    hg = G.mul(h_elt, g_elt)
    d0 = triangle_expr(X, g_elt, h_elt)
    d2 = triangle_expr(X, f, hg)
    d3 = triangle_expr(X, f, g_elt)
    horn = Horn(3, 1, (d0, d2, d3))
    comp = compose_horn(X, horn)  # the triangle on (gf, h)
    assert comp == triangle_expr(X, gf, h_elt)
    # its long edge is both (hg)f and h(gf)
    long_edge = X.sset.face_of(comp, 1)
    assert long_edge == edge_expr(X, G.mul(hg, f))
    assert long_edge == edge_expr(X, G.mul(h_elt, gf))


def test_lambda3_associativity_s3_sample():
    G = FiniteGrp.symmetric(3)
    X = ndk_build(level1(G), 3)
    elems = G.elements
    for f, g_elt, h_elt in itertools.islice(itertools.product(elems, repeat=3), 40):
        lambda3_associativity(X, G, f, g_elt, h_elt)


def test_ust_validation_small():
    for A in (ZMOD(2, 1), ZMOD(3, 1), ZMOD(2, 2)):
        X = u_st(A, 3)
        assert validate_sset(X.sset) == []
        assert tcomplex_validate(X, 3) == []


def test_ust_symbolic_when_infinite():
    X = u_st(concentrated(FGAbelianGroup(1), 2), 3)
    assert X.sset is None
    with pytest.raises(EnumerabilityError):
        X.require_cells()
    assert X.chain_backend is not None


def test_planted_double_thin_filler_detected():
    X = u_st(ZMOD(2, 2), 3)
    # mark one genuinely nonthin 2-cell as thin: its horns now have two
    # thin fillers
    nonthin = [c for c in X.sset.cells[2] if c not in X.thin]
    broken = TComplex(sset=X.sset, thin=X.thin | {nonthin[0]}, gamma=X.gamma,
                      chain_backend=X.chain_backend)
    report = tcomplex_validate(broken, 2)
    assert any(v.axiom == 2 and "2 thin fillers" in v.detail for v in report)
    assert all(isinstance(v.horn, Horn) for v in report)


def test_eta_certificates():
    cases = [
        (ZMOD(2, 1), 3),
        (ZMOD(3, 1), 3),
        (ZMOD(2, 2), 4),
    ]
    for A, dmax in cases:
        cert = eta_iso(A, dmax)
        assert cert.ok, cert.failures
        assert all(a == b for a, b in cert.sizes)


def test_eta_with_nonzero_differential():
    # Z/2 in degrees 2 and 3 with d3 the identity
    A = ChainComplex([0, 0, 1, 1],
                     rels=[IntMatrix.zero(0, 0), IntMatrix.zero(0, 0),
                           IntMatrix.from_columns([(2,)], 1), IntMatrix.from_columns([(2,)], 1)],
                     diffs=[IntMatrix.zero(0, 0), IntMatrix.zero(0, 1),
                            IntMatrix.from_rows([[1]])])
    assert validate_chain(A) == []
    cert = eta_iso(A, 4)
    assert cert.ok, cert.failures


def test_eta_zero_complex():
    cert = eta_iso(zero_complex(0), 3)
    assert cert.ok
    assert all(a == b == 1 for a, b in cert.sizes)


def test_ab_st_point():
    X = u_st(zero_complex(0), 3)
    B = ab_st(X, 2)
    assert str(B.group(0)) == "Z"
    assert B.group(1).is_trivial() and B.group(2).is_trivial()


def test_ab_st_nerve_z2_matches_ab_cr():
    C = level1(FiniteGrp.cyclic(2))
    X = ndk_build(C, 4)
    B = ab_st(X, 3)
    A = ab_cr(C)
    assert validate_chain(B) == []
    for n in range(4):
        assert B.group(n) == A.group(n)
        assert gamma_simplex_group(B, n) == gamma_simplex_group(A, n)
    for n in range(3):
        assert homology(B, n) == homology(A, n)


def test_ab_st_counit_is_degreewise_surjective():
    for A in (ZMOD(2, 1), ZMOD(2, 2)):
        X = u_st(A, 3)
        B = ab_st(X, 2)
        # counit: generator cell -> its top chain component
        for n in range(3):
            cols = [X.gamma.rep.top(X.gamma.cell_to_simplex[c])
                    for c in B.labels[n]]
            cols += A.rel(n).columns()
            lat = lattice_of_columns(cols, A.gen_count(n))
            units = [tuple(1 if i == j else 0 for i in range(A.gen_count(n)))
                     for j in range(A.gen_count(n))]
            assert all(lat.contains(u) for u in units)


def test_thin_closure_recovers_tcomplex_thinness():
    X = u_st(ZMOD(2, 1), 3)
    M = marked_from_tcomplex(X, 3)
    closure = thin_closure(M)
    assert closure == X.thin
    assert cothin_pairs(M) == []


def test_thin_closure_point():
    X = u_st(zero_complex(0), 3)
    M = marked_from_tcomplex(X, 3)
    assert thin_closure(M) == frozenset()
    assert cothin_pairs(M) == []


def test_cothin_pair_reported_for_planted_fillers():
    # a toy complex: two distinct 2-cells with the same boundary, both chosen
    # as fillers of horns of that shared boundary
    from thinfill.sset import SimplicialSet, standard_simplex

    base = standard_simplex(2)
    cells = {d: list(v) for d, v in base.cells.items()}
    cells[2] = ["t1", "t2"]
    faces = dict(base.faces)
    tri = faces.pop("012")
    faces["t1"] = tri
    faces["t2"] = tri
    ss = SimplicialSet(cells, faces)
    h1 = (2, 1, (ss.face_of(cell("t1"), 0), ss.face_of(cell("t1"), 2)))
    h0 = (2, 0, (ss.face_of(cell("t1"), 1), ss.face_of(cell("t1"), 2)))
    M = MarkedFilledComplex(ss, 2, {h1: cell("t1"), h0: cell("t2")})
    pairs = cothin_pairs(M)
    assert (cell("t1"), cell("t2")) in pairs
