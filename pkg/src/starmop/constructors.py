"""Three independent constructions of the monic type II polynomials.

* explicit   -- closed-form Pochhammer expansion, basis-converted to t**m
* rodrigues  -- repeated raising steps starting from the constant 1
* determinant -- linear solve of the moment system for the lower coefficients

The first two are pure ring operations and stay exact for exact parameters.
The third always runs in floating point because moments are series sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import NonNormalIndexError, ParameterError
from .measures import CHARLIER, CharlierParams, MeixnerParams, MomentTable, Params
from .numeric import DEFAULT_BITS, GaussianRational, get_context, is_exact, to_scalar
from .polynomials import (
    MultiIndex,
    PochhammerPoly,
    Poly,
    neg_pochhammer_monomial,
    pochhammer_to_monomial,
    rising_shifted,
    shift_arg,
)

EXPLICIT = "explicit"
RODRIGUES = "rodrigues"
DETERMINANT = "determinant"
PATHWAYS = (EXPLICIT, RODRIGUES, DETERMINANT)

GUARD_BITS = 64


@dataclass(frozen=True)
class ConstructionReport:
    pathway: str
    polynomial: Poly
    condition_estimate: object = None
    exact: bool = False


def _check_index(params: Params, n) -> MultiIndex:
    n = MultiIndex(n)
    if n.r != params.r:
        raise ParameterError(f"multi-index has {n.r} entries but there are {params.r} rays")
    return n


def _one(x):
    return GaussianRational(1) if isinstance(x, GaussianRational) else 1


def _convolve(u, v):
    out = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] = out[i + j] + x * y
    return out


def charlier_explicit(params: CharlierParams, n) -> Poly:
    """Explicit Charlier expansion grouped by ``s = |k|``.

    The group sums ``g_s = sum_{|k|=s} prod_l C(n_l, k_l) (-a_l)**(n_l-k_l)``
    are the coefficients of ``prod_l (x - a_l)**n_l``, built one leg at a time.
    """
    params.validate()
    n = _check_index(params, n)
    groups = [_one(params.a[0])]
    for a, nl in zip(params.a, n):
        leg = [comb(nl, k) * (-a) ** (nl - k) for k in range(nl + 1)]
        groups = _convolve(groups, leg)
    basis = PochhammerPoly(tuple(g if s % 2 == 0 else -g for s, g in enumerate(groups)))
    return pochhammer_to_monomial(basis)


def meixner_explicit(params: MeixnerParams, n) -> Poly:
    """Explicit Meixner expansion ``sum_s g_s (-t)_s (t+beta)_{|n|-s}``."""
    params.validate(convergent=False)
    n = _check_index(params, n)
    groups = [_one(params.c[0])]
    for c, nl in zip(params.c, n):
        scale = _one(c) / (c - 1) ** nl
        leg = [comb(nl, k) * c ** (nl - k) * scale for k in range(nl + 1)]
        groups = _convolve(groups, leg)
    total = n.total
    out = Poly()
    for s, g in enumerate(groups):
        term = neg_pochhammer_monomial(s) * rising_shifted(params.beta, total - s)
        out = out + term * g
    return out


def raising_charlier_step(p: Poly, params: CharlierParams, ell: int) -> Poly:
    """``t p(t-1) - a_l p(t)``: raises leg ``ell`` by one."""
    return shift_arg(p).times_t() - p * params.a[ell]


def raising_meixner_step(p: Poly, params: MeixnerParams, ell: int, beta_current) -> Poly:
    """``c/(c-1) [(t + beta - 1) p(t) - (t/c) p(t-1)]`` with ``beta = beta_current``.

    Maps the polynomial at ``beta_current`` to the one at ``beta_current - 1``
    with leg ``ell`` raised.
    """
    c = params.c[ell]
    if c == 1:
        raise ParameterError(f"c[{ell}] must differ from 1")
    lhs = p.times_t() + p * (beta_current - 1)
    rhs = shift_arg(p).times_t() * (_one(c) / c)
    return (lhs - rhs) * (c / (c - 1))


def _leg_schedule(n: MultiIndex, order=None):
    order = range(n.r) if order is None else order
    if sorted(order) != list(range(n.r)):
        raise ValueError(f"order must be a permutation of 0..{n.r - 1}")
    for ell in order:
        for _ in range(n[ell]):
            yield ell


def rodrigues_charlier(params: CharlierParams, n, order=None) -> Poly:
    """Apply the raising step ``n_l`` times per leg, legs ascending by default."""
    params.validate()
    n = _check_index(params, n)
    p = Poly.constant(_one(params.a[0]))
    for ell in _leg_schedule(n, order):
        p = raising_charlier_step(p, params, ell)
    return p


def rodrigues_meixner(params: MeixnerParams, n, order=None) -> Poly:
    """Start from 1 at ``beta + |n|`` and lower beta by one per raising step."""
    params.validate(convergent=False)
    n = _check_index(params, n)
    beta = params.beta + n.total
    p = Poly.constant(_one(params.c[0]))
    for ell in _leg_schedule(n, order):
        p = raising_meixner_step(p, params, ell, beta)
        beta = beta - 1
    return p


def explicit(params: Params, n) -> Poly:
    if params.family == CHARLIER:
        return charlier_explicit(params, n)
    return meixner_explicit(params, n)


def rodrigues(params: Params, n, order=None) -> Poly:
    if params.family == CHARLIER:
        return rodrigues_charlier(params, n, order)
    return rodrigues_meixner(params, n, order)


def moment_system(params: Params, n, tol, bits: int):
    """Matrix of the orthogonality system without the leading column.

    Row ``(ell, j)`` holds ``m^(ell)_{j+i}`` for ``i < |n|``; the right-hand
    side is ``-m^(ell)_{j+|n|}`` (the monic leading coefficient moved over).
    """
    ctx = get_context(bits)
    total = n.total
    table = MomentTable.build(params, 0, tol, bits,
                              powers_per_ray=[max(nl - 1 + total, 0) for nl in n])
    a = ctx.matrix(total, total)
    b = ctx.matrix(total, 1)
    row = 0
    for ell, nl in enumerate(n):
        m = table.moments[ell]
        for j in range(nl):
            for i in range(total):
                a[row, i] = m[j + i]
            b[row] = -m[j + total]
            row += 1
    return a, b, table


def determinant_construct(params: Params, n, tol=None, bits: int = DEFAULT_BITS) -> ConstructionReport:
    """Solve the moment system for the non-leading coefficients.

    Runs with ``GUARD_BITS`` extra bits and rounds the result to ``bits``.
    ``condition_estimate`` is the 1-norm condition number of the system.
    Raises NonNormalIndexError when the system is singular or its condition
    exceeds ``2**(bits/2)``.
    """
    params.validate()
    n = _check_index(params, n)
    ctx = get_context(bits)
    total = n.total
    if total == 0:
        return ConstructionReport(DETERMINANT, Poly.constant(ctx.mpf(1)), ctx.mpf(1))
    wbits = bits + GUARD_BITS
    wctx = get_context(wbits)
    if tol is None:
        tol = wctx.mpf(2) ** (-wbits)
    a, b, _ = moment_system(params, n, tol, wbits)
    limit = wctx.mpf(2) ** (bits // 2)
    try:
        inv = wctx.inverse(a)
    except ZeroDivisionError as exc:
        raise NonNormalIndexError(f"moment system for {tuple(n)} is singular") from exc
    cond = wctx.mnorm(a, 1) * wctx.mnorm(inv, 1)
    if not cond < limit:
        raise NonNormalIndexError(
            f"moment system for {tuple(n)} is numerically singular (cond ~ {wctx.nstr(cond, 5)})")
    x = wctx.lu_solve(a, b)
    residual = wctx.mnorm(a * x - b, 1)
    scale = wctx.mnorm(a, 1) * wctx.mnorm(x, 1) + wctx.mnorm(b, 1)
    if residual > scale * wctx.mpf(2) ** (-(bits // 2)):
        raise NonNormalIndexError(f"residual check failed for {tuple(n)}")
    coeffs = [to_scalar(x[i], bits) for i in range(total)] + [ctx.mpf(1)]
    return ConstructionReport(DETERMINANT, Poly(coeffs), to_scalar(cond, bits))


def construct(params: Params, n, pathway: str = EXPLICIT, bits: int = DEFAULT_BITS) -> ConstructionReport:
    if pathway == EXPLICIT:
        return ConstructionReport(EXPLICIT, explicit(params, n), exact=params.exact)
    if pathway == RODRIGUES:
        return ConstructionReport(RODRIGUES, rodrigues(params, n), exact=params.exact)
    if pathway == DETERMINANT:
        return determinant_construct(params, n, bits=bits)
    raise ValueError(f"unknown pathway {pathway!r}")


def coefficient_distance(p: Poly, q: Poly, bits: int = DEFAULT_BITS):
    """Max-norm distance between coefficient vectors."""
    ctx = get_context(bits)
    n = max(len(p), len(q))
    if n == 0:
        return ctx.mpf(0)
    out = ctx.mpf(0)
    for i in range(n):
        u, v = p[i], q[i]
        if is_exact(u) and is_exact(v):
            d = to_scalar(u - v, bits)
        else:
            d = to_scalar(u, bits) - to_scalar(v, bits)
        out = max(out, abs(d))
    return out


def relative_distance(p: Poly, q: Poly, bits: int = DEFAULT_BITS):
    """Max over coefficients of ``|p_i - q_i| / max(1, |p_i|, |q_i|)``."""
    ctx = get_context(bits)
    worst = ctx.mpf(0)
    for i in range(max(len(p), len(q))):
        u, v = to_scalar(p[i], bits), to_scalar(q[i], bits)
        d = abs(u - v) / max(ctx.mpf(1), abs(u), abs(v))
        worst = max(worst, d)
    return worst


@dataclass
class PathwayAgreement:
    reports: dict
    rodrigues_delta: object
    determinant_delta: object
    determinant_tolerance: object
    equality_tolerance: object

    @property
    def max_delta(self):
        return max(self.rodrigues_delta, self.determinant_delta)

    @property
    def passed(self) -> bool:
        return (self.rodrigues_delta <= self.equality_tolerance
                and self.determinant_delta <= self.determinant_tolerance)


def pathway_agreement(params: Params, n, bits: int = DEFAULT_BITS) -> PathwayAgreement:
    """Build all three pathways and measure how far apart they are.

    Explicit and Rodrigues must coincide (exactly, for exact parameters).
    The determinant result must match within ``10 * cond * 2**-bits`` in the
    hybrid relative/absolute metric of :func:`relative_distance`.
    """
    ctx = get_context(bits)
    ex = construct(params, n, EXPLICIT, bits)
    ro = construct(params, n, RODRIGUES, bits)
    de = determinant_construct(params, n, bits=bits)
    if params.exact:
        gap_er = ctx.mpf(0) if ex.polynomial == ro.polynomial else ctx.inf
        eq_tol = ctx.mpf(0)
    else:
        gap_er = relative_distance(ex.polynomial, ro.polynomial, bits)
        eq_tol = ctx.mpf(2) ** (-(bits // 2))
    gap_ed = relative_distance(ex.polynomial, de.polynomial, bits)
    det_tol = 10 * de.condition_estimate * ctx.mpf(2) ** (-bits)
    reports = {EXPLICIT: ex, RODRIGUES: ro, DETERMINANT: de}
    return PathwayAgreement(reports, gap_er, gap_ed, det_tol, eq_tol)


@lru_cache(maxsize=4096)
def cached_explicit(params: Params, n: MultiIndex) -> Poly:
    """Memoized :func:`explicit`; parameters and indices are hashable values."""
    return explicit(params, n)
