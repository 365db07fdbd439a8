import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semichar.algebra import (
    MatrixFq,
    Permutation,
    cycle_type,
    cycles_of_length,
    field_embedding,
    field_make,
    is_irreducible,
    mat_det,
    mat_inv,
    mat_mul,
    mat_trace,
    perm_parse,
    perm_print,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2)]


def test_prime_field_modulus_is_x():
    assert field_make(3, 1).modulus == (0, 1)


def test_gf4_modulus():
    assert field_make(2, 2).modulus == (1, 1, 1)


def test_gf9_modulus_is_smallest_irreducible():
    # oracle: scan monic quadratics c0 + c1 x + x^2 in lexicographic (low-to-high) order
    expected = None
    for poly in sorted((c0, c1, 1) for c0 in range(3) for c1 in range(3)):
        # a quadratic is irreducible iff it has no root
        if all((poly[0] + poly[1] * x + x * x) % 3 for x in range(3)):
            expected = poly
            break
    assert field_make(3, 2).modulus == expected


def test_field_rejects_composite_and_large_degree():
    with pytest.raises(ValueError):
        field_make(4, 1)
    with pytest.raises(ValueError):
        field_make(2, 5)


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, e):
    F = field_make(p, e)
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        assert F.mul(a, 1) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in els:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2)])
def test_frobenius_and_fermat(p, e):
    F = field_make(p, e)
    for a in F.elements():
        assert F.pow(a, F.q) == a
        for b in (1, F.q - 1, (a * 7 + 3) % F.q):
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


def test_trace_lands_in_prime_field_and_is_onto():
    F = field_make(3, 2)
    traces = {F.trace(a) for a in F.elements()}
    assert traces == {0, 1, 2}


def test_primitive_element_has_full_order():
    F = field_make(2, 3)
    assert F.element_order(F.primitive_element) == 7


def test_field_embedding_is_ring_hom():
    small, big = field_make(3, 1), field_make(3, 2)
    img = field_embedding(small, big)
    for a in small.elements():
        for b in small.elements():
            assert img[small.mul(a, b)] == big.mul(img[a], img[b])
            assert img[small.add(a, b)] == big.add(img[a], img[b])
    small, big = field_make(2, 2), field_make(2, 4)
    img = field_embedding(small, big)
    assert len(set(img)) == 4
    for a in small.elements():
        for b in small.elements():
            assert img[small.mul(a, b)] == big.mul(img[a], img[b])


def test_is_irreducible():
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)  # (x+1)^2


# matrices


def test_identity_times_matrix():
    F = field_make(5)
    M = MatrixFq.from_rows(F, [[1, 2], [3, 4]])
    assert mat_mul(MatrixFq.identity(F, 2), M) == M
    assert mat_mul(M, MatrixFq.identity(F, 2)) == M


def test_det_of_diagonal():
    F = field_make(7)
    assert mat_det(MatrixFq.from_rows(F, [[3, 0], [0, 5]])) == 15 % 7


def test_det_over_f3():
    F = field_make(3)
    assert mat_det(MatrixFq.from_rows(F, [[1, 1], [1, 2]])) == 1


def test_trace():
    F = field_make(5)
    assert mat_trace(MatrixFq.from_rows(F, [[4, 1], [0, 3]])) == 2


def test_inverse_and_singular():
    F = field_make(2, 2)
    M = MatrixFq.from_rows(F, [[1, 2], [3, 1]])
    if mat_det(M):
        assert mat_mul(M, mat_inv(M)) == MatrixFq.identity(F, 2)
    with pytest.raises((ValueError, ZeroDivisionError, ArithmeticError)):
        mat_inv(MatrixFq.from_rows(F, [[1, 1], [1, 1]]))


@given(st.lists(st.integers(0, 8), min_size=18, max_size=18))
def test_det_multiplicative_gf9(xs):
    F = field_make(3, 2)
    A = MatrixFq.from_rows(F, [xs[0:3], xs[3:6], xs[6:9]])
    B = MatrixFq.from_rows(F, [xs[9:12], xs[12:15], xs[15:18]])
    assert mat_det(mat_mul(A, B)) == F.mul(mat_det(A), mat_det(B))


# permutations


def test_parse_transposition_with_degree():
    assert perm_parse("(1 2)", 3).images == (1, 0, 2)


def test_parse_empty_is_identity():
    p = perm_parse("()")
    assert p == Permutation.identity(p.degree)


def test_left_to_right_composition():
    # apply (1 2) first, then (2 3): 1 -> 2 -> 3, 3 -> 2, 2 -> 1 -> 1
    p = perm_parse("(1 2)(2 3)")
    assert p.images == (2, 0, 1)
    assert p == perm_parse("(1 2)", 3) * perm_parse("(2 3)", 3)


def test_comma_separated_points():
    assert perm_parse("(1,2,3)") == perm_parse("(1 2 3)")


@pytest.mark.parametrize("bad", ["(1 2", "1 2)", "(1 1 2)", "(0 1)", "(a b)"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        perm_parse(bad)


def test_cycle_types():
    assert sorted(cycle_type(Permutation.identity(4))) == [1, 1, 1, 1]
    assert sorted(cycle_type(perm_parse("(1 2 3)(4 5)")), reverse=True) == [3, 2]
    assert cycles_of_length(perm_parse("(1 2)(3 4)"), 2) == [(0, 1), (2, 3)]


def test_cycles_start_at_minimum():
    assert cycles_of_length(perm_parse("(3 1 2)"), 3) == [(0, 1, 2)]


@given(st.permutations(list(range(7))))
def test_print_parse_roundtrip(images):
    p = Permutation(tuple(images))
    assert perm_parse(perm_print(p), 7) == p
    assert sum(cycle_type(p)) == 7


@given(st.permutations(list(range(6))), st.permutations(list(range(6))))
def test_sign_and_order_are_consistent(a, b):
    p, q = Permutation(tuple(a)), Permutation(tuple(b))
    assert (p * q).sign() == p.sign() * q.sign()
    assert p ** p.order() == Permutation.identity(6)
