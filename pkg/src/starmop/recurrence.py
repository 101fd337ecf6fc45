"""Nearest-neighbour recurrence coefficients and their verification.

For every raised leg k,

    (t - b_{n,k}) P_n - P_{n+e_k} = sum_j d_{n,j} P_{n-e_j}.

Terms with ``n_j = 0`` are absent (both closed forms give ``d_j = 0`` there),
so no polynomial with a negative index is ever built.

Meixner sign convention: ``b = (|n|+beta) c_k/(1-c_k) + sum_j n_j/(1-c_j)``.
This is the value forced by ``b = alpha^n_{|n|-1} - alpha^{n+e_k}_{|n|}`` and
it reduces to the classical monic Meixner recurrence at r = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .constructors import cached_explicit
from .errors import DegenerateDenominatorError, ParameterError
from .measures import CHARLIER, CharlierParams, MeixnerParams, Params, lattice_sum
from .numeric import DEFAULT_BITS, GaussianRational, get_context, to_scalar
from .polynomials import MultiIndex, Poly, T, neg_pochhammer_monomial


@dataclass(frozen=True)
class RecurrenceRow:
    n: MultiIndex
    k: int
    b: object
    d: tuple


def _index(params: Params, n, k: int) -> MultiIndex:
    n = MultiIndex(n)
    if n.r != params.r:
        raise ParameterError(f"multi-index has {n.r} entries but there are {params.r} rays")
    if not 0 <= k < n.r:
        raise ParameterError(f"leg {k} out of range for r = {n.r}")
    return n


def charlier_coeffs(params: CharlierParams, n, k: int) -> RecurrenceRow:
    n = _index(params, n, k)
    b = params.a[k] + n.total
    d = tuple(a * nj for a, nj in zip(params.a, n))
    return RecurrenceRow(n, k, b, d)


def meixner_coeffs(params: MeixnerParams, n, k: int) -> RecurrenceRow:
    n = _index(params, n, k)
    for ell, c in enumerate(params.c):
        if c == 1:
            raise ParameterError(f"c[{ell}] must differ from 1")
    total, beta = n.total, params.beta
    one = GaussianRational(1) if isinstance(beta, GaussianRational) else 1
    ck = params.c[k]
    b = (beta + total) * ck / (one - ck)
    for c, nj in zip(params.c, n):
        if nj:
            b = b + nj * one / (one - c)
    d = tuple(c * nj * (beta + total - 1) / (c - 1) ** 2 if nj else c * 0
              for c, nj in zip(params.c, n))
    return RecurrenceRow(n, k, b, d)


def coeffs(params: Params, n, k: int) -> RecurrenceRow:
    if params.family == CHARLIER:
        return charlier_coeffs(params, n, k)
    return meixner_coeffs(params, n, k)


def recurrence_residual(params: Params, n, k: int, builder=cached_explicit) -> Poly:
    """``(t - b) P_n - P_{n+e_k} - sum_j d_j P_{n-e_j}``; zero on success."""
    row = coeffs(params, n, k)
    n = row.n
    p = builder(params, n)
    out = p.times_t() - p * row.b - builder(params, n.raised(k))
    for j, nj in enumerate(n):
        if nj:
            out = out - builder(params, n.lowered(j)) * row.d[j]
    return out


def b_from_coefficients(params: Params, n, k: int, builder=cached_explicit):
    """``alpha^n_{|n|-1} - alpha^{n+e_k}_{|n|}`` read off constructed polynomials."""
    n = _index(params, n, k)
    return builder(params, n)[n.total - 1] - builder(params, n.raised(k))[n.total]


def _ratio_error(num, den):
    """Bound on |N/D - N_hat/D_hat| given the two certified sums."""
    q = abs(num.value / den.value)
    slack = abs(den.value) - den.tail_bound
    if slack <= 0:
        return None
    return (num.tail_bound + q * den.tail_bound) / slack


def d_via_integral(params: Params, n, ell: int, tol, bits: int = DEFAULT_BITS,
                   builder=cached_explicit, return_bound: bool = False):
    """``d_{n,ell}`` as a ratio of two lattice sums on ray ``ell``.

    Numerator ``sum_k k P_n(k) (-k)_{n_ell-1} w(k)``, denominator
    ``sum_k P_{n-e_ell}(k) (-k)_{n_ell-1} w(k)``.  The inner truncation is
    tightened until the propagated error of the ratio is below ``tol``.
    """
    n = _index(params, n, ell)
    if n[ell] < 1:
        raise ParameterError("d via integral needs n_ell >= 1")
    ctx = get_context(bits)
    tol = to_scalar(tol, bits)
    poch = neg_pochhammer_monomial(n[ell] - 1)
    num_poly = T * builder(params, n) * poch
    den_poly = builder(params, n.lowered(ell)) * poch
    inner = tol
    for _ in range(12):
        num = lattice_sum(params, ell, num_poly, inner, bits)
        den = lattice_sum(params, ell, den_poly, inner, bits)
        if abs(den.value) <= max(den.tail_bound, tol):
            raise DegenerateDenominatorError(
                f"denominator of d[{ell}] for {tuple(n)} vanishes within tolerance")
        bound = _ratio_error(num, den)
        if bound is not None and bound <= tol:
            value = num.value / den.value
            return (value, bound) if return_bound else value
        inner = inner * ctx.mpf(2) ** -20
    raise DegenerateDenominatorError(
        f"could not certify d[{ell}] for {tuple(n)} to {ctx.nstr(tol, 5)}")


def closed_form_residual_max(params: Params, n, k: int, bits: int = DEFAULT_BITS):
    """Largest coefficient modulus of the recurrence residual."""
    res = recurrence_residual(params, n, k)
    if res.is_zero():
        return get_context(bits).mpf(0)
    return max(abs(to_scalar(c, bits)) for c in res.coeffs)
