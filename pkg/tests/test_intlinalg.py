import random

from hypothesis import given, settings
import hypothesis.strategies as st

from thinfill.intlinalg import (
    IntMatrix,
    Lattice,
    determinant,
    hstack,
    kernel_basis,
    lattice_of_columns,
    smith_normal_form,
    solve,
    subquotient_invariant_diagonal,
)


def snf_checks(M):
    S = smith_normal_form(M)
    assert S.D == S.U @ M @ S.V
    assert determinant(S.U) in (1, -1)
    assert determinant(S.V) in (1, -1)
    assert S.Uinv @ S.U == IntMatrix.identity(M.rows)
    diag = S.D.diagonal()
    for i in range(M.rows):
        for j in range(M.cols):
            if i != j:
                assert S.D[i, j] == 0
    nz = [d for d in diag if d != 0]
    assert all(d > 0 for d in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    return S


def test_snf_hand_example():
    # by hand: d1 = gcd of entries = 2, d1*d2 = |det| = |20 - 24| = 4, so (2, 2)
    M = IntMatrix.from_rows([[2, 4], [6, 10]])
    S = snf_checks(M)
    assert S.D.diagonal() == (2, 2)


def test_snf_zero_matrix():
    M = IntMatrix.zero(3, 2)
    S = snf_checks(M)
    assert S.D == M
    assert S.U == IntMatrix.identity(3)
    assert S.V == IntMatrix.identity(2)


def test_snf_identity():
    M = IntMatrix.identity(3)
    S = snf_checks(M)
    assert S.D == M


def test_snf_empty_shapes():
    snf_checks(IntMatrix.zero(0, 3))
    snf_checks(IntMatrix.zero(3, 0))
    snf_checks(IntMatrix.zero(0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_random(m, n, data):
    rows = [[data.draw(st.integers(-9, 9)) for _ in range(n)] for _ in range(m)]
    snf_checks(IntMatrix.from_rows(rows, cols=n))


def test_kernel_and_solve():
    M = IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    ker = kernel_basis(M)
    assert len(ker) == 2
    for v in ker:
        assert M.apply(v) == (0, 0)
    assert solve(M, (1, 2)) is not None
    assert solve(M, (1, 1)) is None
    x = solve(M, (6, 12))
    assert M.apply(x) == (6, 12)


def test_solve_divisibility():
    M = IntMatrix.from_rows([[2]])
    assert solve(M, (3,)) is None
    assert solve(M, (4,)) == (2,)


def test_lattice_reduce_canonical():
    L = Lattice(IntMatrix.from_columns([(2, 0), (0, 3)], 2))
    assert L.reduce((5, 7)) == L.reduce((1, 1))
    assert L.reduce((2, 3)) == (0, 0)
    assert L.contains((4, -3))
    assert not L.contains((1, 0))
    rng = random.Random(0)
    for _ in range(50):
        v = (rng.randint(-20, 20), rng.randint(-20, 20))
        w = (v[0] + 2 * rng.randint(-5, 5), v[1] + 3 * rng.randint(-5, 5))
        assert L.reduce(v) == L.reduce(w)


def test_lattice_basis_spans():
    M = IntMatrix.from_columns([(2, 2), (4, 0), (0, 8)], 2)
    L = Lattice(M)
    B = lattice_of_columns(L.basis(), 2)
    assert L == B


def test_subquotient_invariants():
    # Z^2 / <(2,0),(0,3)> = Z/2 + Z/3 = Z/6
    num = lattice_of_columns([(1, 0), (0, 1)], 2)
    rank, torsion = subquotient_invariant_diagonal(num, [(2, 0), (0, 3)])
    assert rank == 0 and torsion == [6]
    # <(2,0),(0,1)> / <(4,0),(0,1)> = Z/2
    num = lattice_of_columns([(2, 0), (0, 1)], 2)
    rank, torsion = subquotient_invariant_diagonal(num, [(4, 0), (0, 1)])
    assert rank == 0 and torsion == [2]


def test_hstack_and_blocks():
    A = IntMatrix.identity(2)
    B = IntMatrix.zero(2, 1)
    H = hstack([A, B])
    assert (H.rows, H.cols) == (2, 3)
    assert H.column(2) == (0, 0)
