import itertools
import random
from fractions import Fraction
from math import gcd, prod

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from semichar.engine import build_relations
from semichar.zlattice import (
    IntMatrix,
    det_bareiss,
    determinant_divisors,
    mat_mul_int,
    nullspace_mod_p,
    quotient_group_generators,
    rank_mod_p,
    smith_normal_form,
)
from semichar.oracle import brute_force_semichars

from conftest import family

small_matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def snf(rows, **kw):
    return smith_normal_form(IntMatrix.from_dense(rows), **kw)


def test_diag_2_3():
    assert snf([[2, 0], [0, 3]]).invariant_factors == [1, 6]


def test_zero_matrix():
    sf = snf([[0] * 3] * 3)
    assert sf.invariant_factors == [] and sf.rank == 0


def test_two_by_two_example():
    assert snf([[2, 4], [6, 8]]).invariant_factors == [2, 4]


def test_empty_matrix():
    assert smith_normal_form(IntMatrix(0, 3, [])).invariant_factors == []


def test_quotient_order():
    assert snf([[2, 0], [0, 3]]).quotient_order() == 6
    assert snf([[2, 0]]).quotient_order() is None


@given(small_matrices)
def test_snf_matches_determinant_divisors(rows):
    sf = snf(rows)
    dd = determinant_divisors(rows)
    assert len(sf.invariant_factors) == len(dd)
    for k in range(len(dd)):
        assert prod(sf.invariant_factors[: k + 1]) == dd[k]
    d = sf.invariant_factors
    assert all(x > 0 for x in d) and all(b % a == 0 for a, b in zip(d, d[1:]))


@given(small_matrices)
def test_snf_agrees_with_sympy(rows):
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf
    D = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]
    assert sorted(snf(rows).invariant_factors) == sorted(diag)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_against_sympy(rows):
    assert det_bareiss(rows) == int(sympy.Matrix(rows).det())


@given(small_matrices, st.randoms(use_true_random=False))
def test_snf_invariant_under_permutation_and_zero_rows(rows, rnd):
    base = snf(rows).invariant_factors
    r = rows[:]
    rnd.shuffle(r)
    perm = list(range(len(rows[0])))
    rnd.shuffle(perm)
    r = [[row[j] for j in perm] for row in r] + [[0] * len(perm)]
    assert snf(r).invariant_factors == base


@given(small_matrices, st.randoms(use_true_random=False))
def test_snf_invariant_under_unimodular_row_ops(rows, rnd):
    base = snf(rows).invariant_factors
    r = [row[:] for row in rows]
    if len(r) > 1:
        for _ in range(5):
            i, j = rnd.sample(range(len(r)), 2)
            c = rnd.randint(-3, 3)
            r[i] = [a + c * b for a, b in zip(r[i], r[j])]
    assert snf(r).invariant_factors == base


def _random_sparse(rnd, m, n, density=0.15):
    return [[rnd.randint(-5, 5) if rnd.random() < density else 0 for _ in range(n)] for _ in range(m)]


@pytest.mark.parametrize("seed", range(5))
def test_transforms_diagonalize(seed):
    rnd = random.Random(seed)
    rows = _random_sparse(rnd, 20, 20)
    sf = snf(rows, want_transforms=True)
    D = mat_mul_int(mat_mul_int(sf.U, rows), sf.V)
    for i in range(20):
        for j in range(20):
            expect = sf.invariant_factors[i] if i == j and i < sf.rank else 0
            assert D[i][j] == expect
    assert abs(det_bareiss(sf.U)) == 1 and abs(det_bareiss(sf.V)) == 1


def test_column_only_transform():
    sf = snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], want_transforms=True, want_left=False)
    assert sf.U is None and sf.V is not None
    assert sf.invariant_factors == [2, 6, 12]


def test_nullspace_examples():
    assert nullspace_mod_p(IntMatrix.from_dense([[1, 0], [0, 1]]), 7)[0] == 0
    dim, vecs = nullspace_mod_p(IntMatrix.from_dense([[1, 1, 1]]), 2)
    assert dim == 2
    for v in vecs:
        assert sum(v) % 2 == 0


def test_nullspace_of_s3_relations_mod_2():
    M = build_relations(family("s3")).matrix()
    assert nullspace_mod_p(M, 2)[0] == 3


@given(small_matrices, st.sampled_from([2, 3, 5]))
def test_nullspace_vectors_and_dimension(rows, l):
    M = IntMatrix.from_dense(rows)
    dim, vecs = nullspace_mod_p(M, l)
    # independent count: every vector of (Z/l)^cols that rows annihilate
    count = sum(1 for v in itertools.product(range(l), repeat=M.cols)
                if all(sum(a * b for a, b in zip(row, v)) % l == 0 for row in rows))
    assert count == l**dim
    assert len(vecs) == dim
    for v in vecs:
        for row in rows:
            assert sum(a * b for a, b in zip(row, v)) % l == 0
    if vecs:
        assert rank_mod_p(vecs, l) == dim
    assert rank_mod_p(rows, l) == M.cols - dim


@pytest.mark.parametrize("spec", ["c4", "c6", "ab2x2", "s3", "q8", "d4", "a4", "dic3"])
@pytest.mark.parametrize("l", [2, 3])
def test_nullspace_dim_matches_brute_force_count(spec, l):
    G = family(spec)
    dim, _ = nullspace_mod_p(build_relations(G).matrix(), l, basis=False)
    count = sum(1 for f in brute_force_semichars(G) if all((x * l) % 1 == 0 for x in f))
    assert count == l**dim


def test_quotient_generators_examples():
    M = IntMatrix.from_dense([[2]])
    gens = quotient_group_generators(M, smith_normal_form(M, want_transforms=True))
    assert gens == [([Fraction(1, 2)], 2)]
    M = IntMatrix.from_dense([[1, 0], [0, 1]])
    assert quotient_group_generators(M, smith_normal_form(M, want_transforms=True)) == []
    with pytest.raises(ValueError):
        quotient_group_generators(M, smith_normal_form(M))


def test_quotient_generator_of_c6():
    M = build_relations(family("c6")).matrix()
    gens = quotient_group_generators(M, smith_normal_form(M, want_transforms=True))
    assert len(gens) == 1
    vec, d = gens[0]
    assert d == 6 and all((6 * x).denominator == 1 for x in vec)
    assert all(x == 0 for x in M.matvec_mod1(vec))
    assert len({tuple((k * x) % 1 for x in vec) for k in range(6)}) == 6


@pytest.mark.parametrize("spec", ["s3", "q8", "a4", "d6", "ab2x6"])
def test_quotient_generators_annihilate_rows(spec):
    M = build_relations(family(spec)).matrix()
    sf = smith_normal_form(M, want_transforms=True, want_left=False)
    gens = quotient_group_generators(M, sf)
    assert prod(d for _, d in gens) == sf.quotient_order()
    for vec, d in gens:
        assert all(x == 0 for x in M.matvec_mod1(vec))
        assert all((d * x).denominator == 1 for x in vec)
