from fractions import Fraction as F

import pytest

from starmop.constructors import rodrigues
from starmop.errors import ParameterError
from starmop.measures import CharlierParams, MeixnerParams
from starmop.numeric import GaussianRational as G, get_context, to_scalar
from starmop.polynomials import MultiIndex, multi_indices
from starmop.recurrence import (
    b_from_coefficients,
    charlier_coeffs,
    closed_form_residual_max,
    coeffs,
    d_via_integral,
    meixner_coeffs,
    recurrence_residual,
)

from conftest import small_grid

ctx = get_context(256)


def test_charlier_examples():
    a = (G(1), G(2))
    params = CharlierParams(a)
    row = charlier_coeffs(params, (0, 0), 1)
    assert row.b == 2 and row.d == (0, 0)
    row = charlier_coeffs(params, (1, 1), 0)
    assert row.b == 3 and row.d == (1, 2)
    row = charlier_coeffs(CharlierParams((F(2, 3),)), (4,), 0)
    assert row.b == F(2, 3) + 4 and row.d == (F(8, 3),)


def test_charlier_row_invariants():
    params = CharlierParams((G(1, 1), G(F(1, 2)), G(3)))
    for n in multi_indices(3, 3):
        for k in range(3):
            row = charlier_coeffs(params, n, k)
            assert row.b - params.a[k] == n.total
            assert all(d / a == nj for d, a, nj in zip(row.d, params.a, n))


def test_meixner_examples():
    c, beta = G(F(1, 3)), G(F(5, 2))
    row = meixner_coeffs(MeixnerParams((c,), beta), (0,), 0)
    assert row.b == beta * c / (1 - c) and row.d == (0,)
    params = MeixnerParams((G(F(1, 4)), G(F(1, 2))), G(F(1, 2)))
    for n in multi_indices(2, 4):
        row = meixner_coeffs(params, n, 0)
        for cj, nj, d in zip(params.c, n, row.d):
            if nj:
                assert d * (cj - 1) ** 2 / (cj * nj) == params.beta + n.total - 1
    with pytest.raises(ParameterError):
        meixner_coeffs(MeixnerParams((1,), 2), (1,), 0)


def test_residual_examples():
    params = CharlierParams((G(F(2, 7)), G(-3, 1)))
    assert recurrence_residual(params, (1, 0), 1).is_zero()
    for p in (params, MeixnerParams((G(F(1, 4)), G(F(1, 3))), G(2))):
        for k in range(2):
            assert recurrence_residual(p, (0, 0), k).is_zero()


@pytest.mark.parametrize("params", small_grid())
def test_residual_is_exactly_zero(params):
    for n in multi_indices(params.r, 4):
        for k in range(params.r):
            assert recurrence_residual(params, n, k).is_zero()


@pytest.mark.parametrize("params", small_grid() + [
    CharlierParams((G(1, 1), G(2, -1))),
    MeixnerParams((G(F(1, 3), F(1, 4)), G(F(-1, 2))), G(F(3, 2), 1)),
])
def test_b_matches_coefficient_difference(params):
    for n in multi_indices(params.r, 4):
        for k in range(params.r):
            assert coeffs(params, n, k).b == b_from_coefficients(params, n, k)


def test_residual_independent_of_builder():
    params = MeixnerParams((G(F(1, 4)), G(F(1, 2))), G(3))
    for n in multi_indices(2, 3):
        assert recurrence_residual(params, n, 1, builder=rodrigues).is_zero()


def test_wrong_sign_is_detected():
    # flipping the Meixner b sign must break the identity
    params = MeixnerParams((G(F(1, 4)), G(F(1, 2))), G(F(1, 2)))
    n = MultiIndex((1, 1))
    row = meixner_coeffs(params, n, 0)
    from starmop.constructors import cached_explicit
    p = cached_explicit(params, n)
    res = p.times_t() + p * row.b - cached_explicit(params, n.raised(0))
    for j in range(2):
        res = res - cached_explicit(params, n.lowered(j)) * row.d[j]
    assert not res.is_zero()


def test_closed_form_residual_max_is_zero():
    assert closed_form_residual_max(CharlierParams((1, 2)), (2, 1), 0) == 0


def test_d_via_integral_examples():
    tol = ctx.mpf(10) ** -40
    v = d_via_integral(CharlierParams((1, 2)), (1, 1), 0, tol)
    assert abs(v - 1) <= 1000 * tol
    a = F(7, 3)
    v = d_via_integral(CharlierParams((a,)), (1,), 0, tol)
    assert abs(v - to_scalar(a)) <= 1000 * tol
    params = MeixnerParams((F(1, 3),), F(5, 2))
    v, bound = d_via_integral(params, (1,), 0, tol, return_bound=True)
    assert bound <= tol
    assert abs(v - to_scalar(meixner_coeffs(params, (1,), 0).d[0])) <= 1000 * tol


def test_d_via_integral_needs_positive_entry():
    with pytest.raises(ParameterError):
        d_via_integral(CharlierParams((1, 2)), (0, 1), 0, F(1, 10 ** 20))


def test_r1_classical_reduction():
    a = F(3, 2)
    for n in range(11):
        row = charlier_coeffs(CharlierParams((a,)), (n,), 0)
        assert row.b == a + n and row.d == (a * n,)
    c, beta = F(1, 3), F(1, 2)
    for n in range(11):
        row = meixner_coeffs(MeixnerParams((c,), beta), (n,), 0)
        assert row.b == (n + (n + beta) * c) / (1 - c)
        assert row.d == (n * (n + beta - 1) * c / (1 - c) ** 2,)
