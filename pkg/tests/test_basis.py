import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixcara.basis import MonomialBasis, eval_jacobian, eval_point

GAP = MonomialBasis.univariate([0, 2, 3, 5, 6])


def test_eval_zero_point_constant_convention():
    basis = MonomialBasis.full_degree(2)
    np.testing.assert_array_equal(eval_point(basis, 0.0), [1.0, 0.0, 0.0])


def test_eval_all_powers_of_one():
    np.testing.assert_array_equal(eval_point(GAP, 1.0), np.ones(5))


def test_eval_gap_basis_at_two():
    # oracle: direct exponentiation, independent of the vectorized path
    expected = [2.0 ** e for e in (0, 2, 3, 5, 6)]
    np.testing.assert_allclose(eval_point(GAP, 2.0), expected, rtol=0, atol=0)


def test_jacobian_quadratic_column():
    basis = MonomialBasis.full_degree(2)
    np.testing.assert_array_equal(eval_jacobian(basis, 3.0).ravel(), [0.0, 1.0, 6.0])


def test_jacobian_gap_basis_matches_finite_differences():
    h = 1e-6
    fd = (eval_point(GAP, 1.0 + h) - eval_point(GAP, 1.0 - h)) / (2 * h)
    np.testing.assert_allclose(eval_jacobian(GAP, 1.0).ravel(), fd, rtol=1e-6)
    np.testing.assert_array_equal(eval_jacobian(GAP, 1.0).ravel(), [0, 2, 3, 5, 6])


def test_jacobian_two_variables_degree_one():
    basis = MonomialBasis.full_degree(1, n=2)
    assert basis.exponents == ((0, 0), (1, 0), (0, 1))
    rows = eval_jacobian(basis, [1.0, 1.0])
    np.testing.assert_array_equal(rows, [[0, 0], [1, 0], [0, 1]])


@pytest.mark.parametrize("n,d", [(1, 6), (2, 3), (3, 2)])
def test_jacobian_matches_central_differences_randomly(n, d):
    basis = MonomialBasis.full_degree(d, n=n)
    rng = np.random.default_rng(12345)
    h = 1e-6
    for _ in range(1000 // (n * 2)):
        x = rng.uniform(-2, 2, size=n)
        jac = eval_jacobian(basis, x)
        for j in range(n):
            xp, xm = x.copy(), x.copy()
            xp[j] += h
            xm[j] -= h
            fd = (eval_point(basis, xp) - eval_point(basis, xm)) / (2 * h)
            np.testing.assert_allclose(jac[:, j], fd, rtol=1e-6, atol=1e-6)


@given(st.permutations([(0,), (2,), (3,), (5,), (6,)]))
def test_sorting_invariance(perm):
    assert MonomialBasis(n=1, exponents=tuple(perm)) == GAP


def test_duplicates_rejected():
    with pytest.raises(ValueError):
        MonomialBasis(n=1, exponents=((0,), (2,), (2,)))


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        MonomialBasis(n=1, exponents=((0,), (-1,)))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        MonomialBasis(n=2, exponents=((0,), (1,)))
    with pytest.raises(ValueError):
        eval_point(GAP, [1.0, 2.0])
    with pytest.raises(ValueError):
        eval_jacobian(GAP, [1.0, 2.0])


def test_empty_basis_rejected():
    with pytest.raises(ValueError):
        MonomialBasis(n=1, exponents=())


def test_json_literal_roundtrip():
    data = {"n": 1, "exponents": [[0], [2], [3], [5], [6]]}
    basis = MonomialBasis.from_json(data)
    assert basis == GAP
    assert basis.to_json() == data
    assert basis.max_degree == 6
    assert basis.m == 5


def test_full_degree_helpers():
    b = MonomialBasis.full_degree(5)
    assert b.is_full_degree()
    assert b.univariate_degrees() == (0, 1, 2, 3, 4, 5)
    assert not GAP.is_full_degree()
    b2 = MonomialBasis.full_degree(2, n=2)
    assert b2.m == 6
