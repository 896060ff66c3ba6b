import random

import pytest

from thinfill.chain import (
    ChainComplex,
    ChainMap,
    FGAbelianGroup,
    concentrated,
    homology,
    two_term,
    validate_chain,
    zero_complex,
)
from thinfill.errors import RepresentabilityError
from thinfill.intlinalg import IntMatrix
from thinfill.presentations import abelianization, group_order_bounded
from thinfill.crossed import (
    AbGrp,
    CrossedComplex,
    FiniteGrp,
    FiniteGroupoid,
    MatrixHom,
    SymbolicUcr,
    TableHom,
    ab_cr,
    apply_chain_map_to_ucr_hom,
    chain_maps_equal,
    counit,
    cr_homology,
    identity_crossed_module,
    identity_ucr_hom,
    inclusion_crossed_module,
    is_ucr_hom,
    level1,
    one_reduced,
    reduced_ab_cr,
    transpose_chain_to_ucr,
    transpose_ucr_to_chain,
    u_cr,
    unit,
    unit_1reduced_data,
    unit_1reduced_iso_check,
    unit_data_is_iso,
    ucr_homs_equal,
    validate_crossed_complex,
)


def mk_one_reduced(c2=None, c3=None, d3_cols=None):
    """1-reduced crossed complex with abelian fibers and optional boundary."""
    fibers = {}
    deltas = {}
    if c2 is not None:
        fibers[2] = AbGrp.from_invariants(c2)
    if c3 is not None:
        fibers[3] = AbGrp.from_invariants(c3)
        if d3_cols is not None:
            deltas[3] = MatrixHom(IntMatrix.from_columns(d3_cols, fibers[2].ngens))
    return one_reduced(fibers, deltas)


def random_one_reduced(rng: random.Random) -> CrossedComplex:
    """Random 1-reduced crossed complex with mixed torsion and valid boundary.

    The image of a source generator of finite order d must be killed by d,
    so torsion coordinates are sampled from the d-torsion of the target.
    """
    from math import gcd

    tor = []
    for d in sorted(rng.sample([2, 3, 4, 6], rng.randint(0, 2))):
        if not tor or d % tor[-1] == 0:
            tor.append(d)
    inv2 = FGAbelianGroup(rng.randint(0, 1), tuple(tor))
    inv3 = FGAbelianGroup(rng.randint(0, 1), (rng.choice([2, 4]),) if rng.random() < 0.7 else ())
    G2 = AbGrp.from_invariants(inv2)
    G3 = AbGrp.from_invariants(inv3)
    cols = []
    for j in range(G3.ngens):
        order = None if j < inv3.rank else inv3.torsion[j - inv3.rank]
        vec = [0] * G2.ngens
        for i in range(G2.ngens):
            if i < inv2.rank:
                vec[i] = rng.randint(-2, 2) if order is None else 0
            else:
                t = inv2.torsion[i - inv2.rank]
                if order is None:
                    vec[i] = rng.randint(0, t - 1)
                else:
                    step = t // gcd(t, order)
                    vec[i] = step * rng.randint(0, gcd(t, order) - 1)
        cols.append(tuple(vec))
    deltas = {3: MatrixHom(IntMatrix.from_columns(cols, G2.ngens))} if G3.ngens else {}
    fibers = {2: G2, 3: G3}
    if rng.random() < 0.5:
        fibers[4] = AbGrp.from_invariants(FGAbelianGroup(0, (2,)))
        deltas[4] = MatrixHom(IntMatrix.zero(G3.ngens, 1))
    return one_reduced(fibers, deltas)


def test_finite_groups():
    Z4 = FiniteGrp.cyclic(4)
    assert Z4.validate() == []
    assert Z4.is_abelian()
    S3 = FiniteGrp.symmetric(3)
    assert S3.validate() == []
    assert not S3.is_abelian()
    assert len(S3.elements) == 6


def test_level1_valid():
    C = level1(FiniteGrp.cyclic(2))
    assert validate_crossed_complex(C) == []


def test_identity_crossed_module_valid():
    for G in (FiniteGrp.cyclic(2), FiniteGrp.cyclic(3), FiniteGrp.symmetric(3)):
        C = identity_crossed_module(G)
        assert validate_crossed_complex(C) == []


def test_inclusion_crossed_module_valid():
    S3 = FiniteGrp.symmetric(3)
    a3 = [p for p in S3.elements if _sign(p) == 1]
    C = inclusion_crossed_module(S3, a3)
    assert validate_crossed_complex(C) == []


def _sign(perm):
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def test_validate_names_functoriality_violation():
    # plant a violation: identity crossed module of Z/3 with one action
    # table corrupted
    G = FiniteGrp.cyclic(3)
    C = identity_crossed_module(G)
    bad_phi = dict(C.phi[2])
    m = ("*", 1)
    bad_phi[m] = TableHom.of({0: 0, 1: 2, 2: 1})  # not the conjugation action
    bad = CrossedComplex(C.groupoid, C.top, C.fibers, C.delta2, C.deltas, {2: bad_phi})
    report = validate_crossed_complex(bad)
    assert report
    assert any("functoriality" in v or "conjugation" in v or "equivariant" in v
               for v in report)


def test_one_reduced_z4_z_delta_times_two():
    # C2 = Z/4, C3 = Z/2 with delta = multiplication by 2: valid
    C = mk_one_reduced(FGAbelianGroup(0, (4,)), FGAbelianGroup(0, (2,)), [(2,)])
    assert validate_crossed_complex(C) == []


def test_cr_homology_level1():
    C = level1(FiniteGrp.cyclic(2))
    H = cr_homology(C)
    assert H.pi0_count() == 1
    p = list(H.pi1)[0]
    assert group_order_bounded(H.pi1[p], 1000) == 2
    assert all(g.is_trivial() for g in H.hn.values())


def test_cr_homology_one_reduced_free_c2():
    C = mk_one_reduced(FGAbelianGroup(1))  # C2 = Z, no boundary
    H = cr_homology(C)
    assert H.hn[(2, "*")] == FGAbelianGroup(1)


def test_cr_homology_identity_module_is_trivial():
    # delta iso: ker = 0, and pi1 dies
    C = identity_crossed_module(FiniteGrp.cyclic(3))
    H = cr_homology(C)
    p = list(H.pi1)[0]
    assert group_order_bounded(H.pi1[p], 1000) == 1
    assert H.hn[(2, p)].is_trivial()


def test_cr_homology_inclusion_module():
    # A3 inside S3: pi1 = S3/A3 = Z/2, H2 = 0
    S3 = FiniteGrp.symmetric(3)
    C = inclusion_crossed_module(S3, [p for p in S3.elements if _sign(p) == 1])
    H = cr_homology(C)
    p = list(H.pi1)[0]
    assert group_order_bounded(H.pi1[p], 10_000) == 2
    assert H.hn[(2, p)].is_trivial()


def test_cr_homology_symbolic_ucr():
    # U_Cr of Z --id--> Z: one component, trivial vertex group
    A = two_term(1, 0)
    X = u_cr(A)
    assert isinstance(X, SymbolicUcr)
    H = cr_homology(X)
    assert H.pi0_count() == 1
    assert abelianization(H.pi1["*"]).is_trivial()


def test_ab_cr_of_z2_at_level1():
    C = level1(FiniteGrp.cyclic(2))
    B = ab_cr(C)
    assert validate_chain(B) == []
    assert str(B.group(0)) == "Z"
    assert str(B.group(1)) == "Z/2"
    assert str(homology(B, 1)) == "Z/2"
    assert str(homology(B, 0)) == "Z"


def test_ab_cr_one_reduced_shape():
    # degree 0 = Z, degree 1 = 0, degree n = C_n above
    C = mk_one_reduced(FGAbelianGroup(0, (4,)), FGAbelianGroup(1), [(2,)])
    B = ab_cr(C)
    assert validate_chain(B) == []
    assert str(B.group(0)) == "Z"
    assert B.group(1).is_trivial()
    assert str(B.group(2)) == "Z/4"
    assert str(B.group(3)) == "Z"
    red = reduced_ab_cr(C)
    assert red.group(0).is_trivial()


def test_ab_cr_empty():
    C = CrossedComplex(FiniteGroupoid([], [], {}, {}, {}, {}))
    B = ab_cr(C)
    assert all(B.group(n).is_trivial() for n in range(B.top + 1))


def test_ab_cr_action_coinvariants():
    # inclusion module S3 <- A3: degree 2 is A3 = Z/3 modulo conjugation;
    # a transposition inverts, so x ~ -x forces 2x = 0, and with 3x = 0 the
    # coinvariants vanish
    S3 = FiniteGrp.symmetric(3)
    C = inclusion_crossed_module(S3, [p for p in S3.elements if _sign(p) == 1])
    B = ab_cr(C)
    assert B.group(2).is_trivial()


def test_u_cr_finite_materialization():
    A = concentrated(FGAbelianGroup(0, (2,)), 0)
    X = u_cr(A)
    assert isinstance(X, CrossedComplex)
    assert len(X.groupoid.objects) == 2
    assert all(X.groupoid.src[m] == X.groupoid.tgt[m] for m in X.groupoid.morphisms)
    assert validate_crossed_complex(X) == []


def test_u_cr_one_reduced_with_c2():
    A = concentrated(FGAbelianGroup(1), 2)  # Z in degree 2
    X = u_cr(A)
    assert isinstance(X, CrossedComplex)
    assert X.is_one_reduced()
    assert X.fiber(2, X.groupoid.objects[0]).ngens == 1
    assert validate_crossed_complex(X) == []


def test_u_cr_nerve_structure():
    # A = Z/2 in degrees 0 and 1 with d = 0: groupoid Z/2 x Z/2
    from thinfill.chain import direct_sum
    A = direct_sum(concentrated(FGAbelianGroup(0, (2,)), 0),
                   concentrated(FGAbelianGroup(0, (2,)), 1))
    X = u_cr(A)
    assert isinstance(X, CrossedComplex)
    assert validate_crossed_complex(X) == []
    assert len(X.groupoid.morphisms) == 4


def test_transpose_roundtrip_unit_based():
    rng = random.Random(3)
    count = 0
    for _ in range(20):
        C = random_one_reduced(rng)
        assert validate_crossed_complex(C) == []
        B = ab_cr(C)
        k = rng.choice([1, 2, 3, -1])
        mats = tuple(IntMatrix.identity(B.gen_count(n)).scale(k)
                     for n in range(B.top + 1))
        f = ChainMap(mats)
        h = transpose_chain_to_ucr(C, B, f)
        assert is_ucr_hom(C, B, h)
        back = transpose_ucr_to_chain(C, B, h)
        assert chain_maps_equal(B, B, f, back)
        count += 1
    assert count == 20


def test_transpose_zero_hom():
    C = level1(FiniteGrp.cyclic(2))
    B = ab_cr(C)
    zero = ChainMap(tuple(IntMatrix.zero(B.gen_count(n), B.gen_count(n))
                          for n in range(B.top + 1)))
    h = transpose_chain_to_ucr(C, B, zero)
    # constant basepoint: every object goes to 0, every morphism to (0, 0)
    assert all(not any(v) for v in h.obj_map.values())
    assert all(not any(v[1]) for v in h.mor_map.values())


def test_unit_and_triangle_identity():
    # U-side triangle: U_Cr(counit) o unit = identity on u_cr(A)
    for A in (concentrated(FGAbelianGroup(0, (2,)), 0),
              concentrated(FGAbelianGroup(0, (3,)), 2)):
        X = u_cr(A)
        B = ab_cr(X)
        eps = counit(A)
        assert is_chain_map_on(B, A, eps)
        eta = unit(X)
        assert is_ucr_hom(X, B, eta)
        comp = apply_chain_map_to_ucr_hom(eps, B, A, eta)
        ident = identity_ucr_hom(X, A)
        assert ucr_homs_equal(X, A, comp, ident)


def is_chain_map_on(src, dst, f):
    from thinfill.chain import is_chain_map
    return is_chain_map(src, dst, f)


def test_unit_1reduced_iso():
    C = mk_one_reduced(FGAbelianGroup(0, (4,)), FGAbelianGroup(1), [(2,)])
    assert unit_1reduced_iso_check(C)


def test_unit_1reduced_iso_random():
    rng = random.Random(12)
    for _ in range(10):
        C = random_one_reduced(rng)
        assert unit_1reduced_iso_check(C)


def test_unit_1reduced_mutation_fails():
    C = mk_one_reduced(FGAbelianGroup(0, (4,)), FGAbelianGroup(1), [(2,)])
    data = unit_1reduced_data(C)
    f, src_rels, dst_rels = data[2]
    rows = [list(r) for r in f.entries]
    rows[0][0] += 1  # off-by-one on one generator image
    data[2] = (IntMatrix.from_rows(rows, cols=f.cols), src_rels, dst_rels)
    assert not unit_data_is_iso(data)


def test_unit_1reduced_requires_1reduced():
    with pytest.raises(ValueError):
        unit_1reduced_data(level1(FiniteGrp.cyclic(2)))


def test_lagrange_sanity_for_delta_image():
    # |delta(C2)| divides |Aut(p)| for finite crossed modules
    S3 = FiniteGrp.symmetric(3)
    for C in (identity_crossed_module(S3),
              inclusion_crossed_module(S3, [p for p in S3.elements if _sign(p) == 1])):
        p = C.groupoid.objects[0]
        fiber = C.fiber(2, p)
        image = {C.boundary2(p, a) for a in fiber.elements}
        assert len(C.groupoid.aut(p)) % len(image) == 0
