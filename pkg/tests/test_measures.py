from fractions import Fraction as F

import pytest

from starmop.errors import ParameterError
from starmop.measures import (
    CharlierParams,
    MassPointGrid,
    MeixnerParams,
    MomentTable,
    contraction_target,
    lattice_sum,
    moment,
    perfectness_check,
    weight_charlier,
    weight_meixner,
)
from starmop.numeric import GaussianRational as G, get_context, to_scalar
from starmop.polynomials import Poly

BITS = 256
ctx = get_context(BITS)


def test_weight_charlier_examples():
    p = CharlierParams((2, G(0, 1)))
    assert weight_charlier(p, 0, 0) == 1
    assert weight_charlier(p, 0, 3) == F(4, 3)
    assert weight_charlier(p, 1, 2) == F(-1, 2)


def test_weight_meixner_examples():
    assert weight_meixner(MeixnerParams((F(1, 2),), F(7, 3)), 0, 0) == 1
    assert weight_meixner(MeixnerParams((F(1, 2),), 2), 0, 1) == 1
    c = F(2, 5)
    p = MeixnerParams((c,), 1)
    for k in range(6):
        assert weight_meixner(p, 0, k) == c ** k


def test_weight_meixner_rejects_bad_beta():
    with pytest.raises(ParameterError):
        weight_meixner(MeixnerParams((F(1, 2),), -1), 0, 1)


@pytest.mark.parametrize("a", [1, F(1, 2), 3, G(1, 1)])
def test_charlier_moment_closed_forms(a):
    params = CharlierParams((a,))
    tol = ctx.mpf(10) ** -70
    av = to_scalar(a, BITS)
    m0 = moment(params, 0, 0, tol, BITS)
    m1 = moment(params, 0, 1, tol, BITS)
    assert abs(m0.value - ctx.exp(av)) <= m0.tail_bound + ctx.mpf(2) ** -240
    assert abs(m1.value - av * ctx.exp(av)) <= m1.tail_bound + ctx.mpf(2) ** -240
    assert 0 <= m0.tail_bound < tol


@pytest.mark.parametrize("c, beta", [(F(1, 4), F(1, 2)), (F(1, 2), 3), (F(-1, 3), 1), (F(9, 10), F(5, 2))])
def test_meixner_moment_closed_form(c, beta):
    params = MeixnerParams((c,), beta)
    m0 = moment(params, 0, 0, ctx.mpf(10) ** -70, BITS)
    expected = ctx.power(1 - ctx.mpf(c.numerator) / c.denominator,
                         -ctx.mpf(F(beta).numerator) / F(beta).denominator)
    rel = abs(m0.value - expected) / abs(expected)
    assert rel <= ctx.mpf(10) ** -int(BITS * 0.25)


def test_meixner_moment_complex_c():
    c = G(F(1, 3), F(1, 4))
    m0 = moment(MeixnerParams((c,), F(3, 2)), 0, 0, ctx.mpf(10) ** -60, BITS)
    expected = ctx.power(1 - to_scalar(c, BITS), -ctx.mpf(1.5))
    assert abs(m0.value - expected) < ctx.mpf(10) ** -55


def test_divergent_meixner_rejected():
    with pytest.raises(ParameterError):
        moment(MeixnerParams((F(3, 2),), 1), 0, 0, F(1, 10 ** 20))


@pytest.mark.parametrize("params", [
    CharlierParams((F(1, 2), 3)),
    MeixnerParams((F(1, 4), F(1, 2)), F(1, 2)),
])
def test_doubling_truncation_stays_within_tail_bound(params):
    tol = ctx.mpf(10) ** -50
    p = Poly((3, -2, 0, 1, F(1, 2)))
    for ell in range(params.r):
        s = lattice_sum(params, ell, p, tol, BITS)
        longer = lattice_sum(params, ell, p, tol, BITS, k_min=2 * s.k_used)
        assert longer.k_used >= 2 * s.k_used
        assert abs(longer.value - s.value) <= s.tail_bound
        assert s.ratio_bound <= contraction_target(params)


def test_meixner_empirical_ratio_below_target():
    params = MeixnerParams((F(1, 2),), 3)
    s = moment(params, 0, 4, ctx.mpf(10) ** -40, BITS)
    k = s.k_used - 1
    term = lambda j: ctx.mpf(j) ** 4 * to_scalar(weight_meixner(params, 0, j), BITS)
    assert term(k + 1) / term(k) < contraction_target(params)


def test_moment_table_shape_and_bounds():
    params = CharlierParams((1, 2, 3))
    tol = ctx.mpf(10) ** -40
    table = MomentTable.build(params, 5, tol, BITS)
    assert len(table.moments) == 3 and all(len(row) == 6 for row in table.moments)
    assert all(0 <= b < tol for row in table.tail_bounds for b in row)
    assert table.k_used > 0


def test_mass_point_grid():
    grid = MassPointGrid(3, 5)
    assert len(list(grid.lattice())) == 15
    for j, k in grid.lattice():
        z = grid.point(j, k)
        assert abs(ctx.power(z, 3) - k) < ctx.mpf(2) ** -240


def test_perfectness_examples():
    assert perfectness_check(CharlierParams((1, 2))).passed
    bad = perfectness_check(CharlierParams((1, 1)))
    assert not bad.passed and bad.violating_pairs == [(0, 1)]
    report = perfectness_check(MeixnerParams((F(1, 2), F(1, 3)), -1))
    assert not report.passed
    assert any("beta" in msg for msg in report.problems)


def test_perfectness_flags_divergence_and_zero():
    assert not perfectness_check(MeixnerParams((F(1, 2), 2), 1)).passed
    assert not perfectness_check(CharlierParams((0, 1))).passed


def test_parameters_parse_strings():
    assert CharlierParams(("1+2i", "0.5")).a == (G(1, 2), G(F(1, 2)))
