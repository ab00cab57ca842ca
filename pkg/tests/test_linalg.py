"""Exact linear algebra: hand-elimination oracles and randomized properties."""

import random
from fractions import Fraction
from math import comb

from opkoszul.linalg import (Echelon, Matrix, Permutation, Subspace,
                             all_permutations, kernel_basis,
                             orthogonal_complement, rank, shuffles)


def test_kernel_zero_map():
    m = Matrix(1, 1)
    k = kernel_basis(m)
    assert k.dim == 1


def test_kernel_identity():
    assert kernel_basis(Matrix.identity(3)).dim == 0


def test_kernel_hand_elimination():
    # [[1,1],[2,2]] -> kernel spanned by (1,-1)
    m = Matrix.from_rows([[1, 1], [2, 2]])
    k = kernel_basis(m)
    assert k.dim == 1
    assert k.basis[0] == {0: Fraction(1), 1: Fraction(-1)}


def test_rank_examples():
    assert rank(Matrix(3, 4)) == 0
    assert rank(Matrix.identity(5)) == 5
    assert rank(Matrix.from_rows([[1, 2], [2, 4]])) == 1


def test_rank_nullity_random():
    rng = random.Random(0)
    for _ in range(40):
        rows = rng.randrange(1, 6)
        cols = rng.randrange(1, 6)
        m = Matrix(rows, cols,
                   {(r, c): Fraction(rng.randrange(-3, 4))
                    for r in range(rows) for c in range(cols)})
        assert rank(m) + kernel_basis(m).dim == cols


def test_orthogonal_complement_examples():
    pairing = Matrix.identity(2)
    full = Subspace(2, [{0: Fraction(1)}, {1: Fraction(1)}])
    zero = Subspace(2, [])
    assert orthogonal_complement(full, pairing).dim == 0
    assert orthogonal_complement(zero, pairing).dim == 2
    # span(e1+e2) under the identity pairing -> span(e1-e2)
    s = Subspace(2, [{0: Fraction(1), 1: Fraction(1)}])
    c = orthogonal_complement(s, pairing)
    assert c.dim == 1
    assert c.basis[0] == {0: Fraction(1), 1: Fraction(-1)}


def test_orthogonal_complement_involutive():
    rng = random.Random(1)
    for _ in range(20):
        n = rng.randrange(1, 6)
        # random nondegenerate pairing: start from identity, add noise until invertible
        while True:
            p = Matrix(n, n, {(r, c): Fraction(rng.randrange(-2, 3))
                              for r in range(n) for c in range(n)})
            if rank(p) == n:
                break
        rows = [{c: Fraction(rng.randrange(-2, 3)) for c in range(n)}
                for _ in range(rng.randrange(0, n + 1))]
        ech = Echelon(n)
        for row in rows:
            ech.add(row)
        s = ech.subspace()
        c = orthogonal_complement(s, p)
        assert s.dim + c.dim == n
        back = orthogonal_complement(c, p.transpose())
        assert back == s


def test_orthogonal_complement_dimension_mismatch():
    s = Subspace(3, [])
    try:
        orthogonal_complement(s, Matrix.identity(2))
    except ValueError:
        pass
    else:
        assert False, "expected dimension mismatch error"


def test_shuffles_trivial():
    assert [p.images for p in shuffles(0, 3)] == [(1, 2, 3)]
    assert len(shuffles(1, 2)) == 3


def test_shuffles_against_filter_oracle():
    # oracle: filter all permutations by the two-block monotonicity predicate
    for p, q in [(2, 2), (1, 3), (3, 2), (2, 3)]:
        n = p + q
        def monotone(perm):
            im = perm.images
            return (all(im[i] < im[i + 1] for i in range(p - 1))
                    and all(im[i] < im[i + 1] for i in range(p, n - 1)))
        expect = {s.images for s in all_permutations(n) if monotone(s)}
        got = {s.images for s in shuffles(p, q)}
        assert got == expect
        assert len(got) == comb(n, p)


def test_shuffle_counts_up_to_8():
    for n in range(0, 9):
        for p in range(0, n + 1):
            assert len(shuffles(p, n - p)) == comb(n, p)


def test_permutation_algebra():
    rng = random.Random(2)
    for _ in range(50):
        n = rng.randrange(1, 7)
        perms = all_permutations(n)
        a, b, c = (rng.choice(perms) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == Permutation.identity(n)
        assert a.sign() * b.sign() == (a * b).sign()
        # (p * q)(i) = q(p(i))
        i = rng.randrange(1, n + 1)
        assert (a * b)(i) == b(a(i))


def test_transposition_sign():
    assert Permutation((2, 1, 3)).sign() == -1
    assert Permutation((2, 3, 1)).sign() == 1
    assert Permutation.identity(4).sign() == 1


def test_echelon_reduce_and_subspace_equality():
    ech = Echelon(3)
    ech.add({0: Fraction(2), 1: Fraction(2)})
    ech.add({1: Fraction(1), 2: Fraction(1)})
    ech.add({0: Fraction(1), 2: Fraction(-1)})  # dependent
    assert ech.rank == 2
    s1 = ech.subspace()
    ech2 = Echelon(3)
    ech2.add({0: Fraction(1), 2: Fraction(-1)})
    ech2.add({1: Fraction(3), 2: Fraction(3)})
    assert ech2.subspace() == s1
