"""Polynomial roots in t.

Real-coefficient polynomials go through a Sturm sequence: exact (Fraction)
when the coefficients are exact rationals, mpf otherwise.  Isolating
intervals are refined by bisection and finished with Newton steps.
Anything Sturm cannot account for (complex roots, multiple roots) falls back
to mpmath's Durand-Kerner ``polyroots`` followed by Newton polishing.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .numeric import DEFAULT_BITS, GaussianRational, get_context, to_scalar
from .polynomials import Poly, evaluate


def _as_real_exact(p: Poly):
    """Fraction coefficients if ``p`` is exact and real, else None."""
    out = []
    for c in p.coeffs:
        if isinstance(c, GaussianRational):
            if c.im:
                return None
            out.append(c.re)
        elif isinstance(c, Rational):
            out.append(Fraction(c))
        else:
            return None
    return out


def is_real_poly(p: Poly) -> bool:
    for c in p.coeffs:
        if isinstance(c, GaussianRational):
            if c.im:
                return False
        elif not isinstance(c, Rational) and c.imag != 0:
            return False
    return True


def _trim(c, eps):
    while c and abs(c[-1]) <= eps:
        c.pop()
    return c


def _rem(a, b, eps):
    """Remainder of a / b, coefficient lists lowest first."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and a:
        q = a[-1] / lead
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - q * bc
        a.pop()
        _trim(a, eps)
    return a


def sturm_sequence(coeffs, eps=0):
    """Standard Sturm chain p, p', -rem(p, p'), ... (lowest-first lists)."""
    p0 = _trim(list(coeffs), eps)
    p1 = _trim([i * c for i, c in enumerate(p0)][1:], eps)
    chain = [p0]
    while p1:
        chain.append(p1)
        r = _rem(chain[-2], p1, eps)
        p1 = [-x for x in r]
    return chain


def _eval(c, x):
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _sign_changes(chain, x) -> int:
    signs = []
    for c in chain:
        v = _eval(c, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_changes_at_infinity(chain, positive: bool) -> int:
    signs = []
    for c in chain:
        lead = c[-1]
        deg = len(c) - 1
        s = lead > 0
        if not positive and deg % 2:
            s = not s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(chain, lo=None, hi=None) -> int:
    """Distinct real roots in ``(lo, hi]``; None means infinity."""
    vlo = _sign_changes_at_infinity(chain, False) if lo is None else _sign_changes(chain, lo)
    vhi = _sign_changes_at_infinity(chain, True) if hi is None else _sign_changes(chain, hi)
    return vlo - vhi


def _isolate(chain, lo, hi, count_lo, count_hi, out, depth=0):
    n = count_lo - count_hi
    if n == 0:
        return
    if n == 1 or depth > 2000:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    if _eval(chain[0], mid) == 0:
        mid = lo + (hi - lo) * 3 / 7
    cm = _sign_changes(chain, mid)
    _isolate(chain, lo, mid, count_lo, cm, out, depth + 1)
    _isolate(chain, mid, hi, cm, count_hi, out, depth + 1)


def _refine(p_mp, dp_mp, lo, hi, ctx, bits):
    """Bisection down to ~bits/2 bits of width, then Newton."""
    lo, hi = to_scalar(lo, bits), to_scalar(hi, bits)
    flo = evaluate(p_mp, lo)
    if flo == 0:
        return lo
    stop = ctx.mpf(2) ** (-(bits // 2)) * (1 + abs(hi))
    while hi - lo > stop:
        mid = (lo + hi) / 2
        fm = evaluate(p_mp, mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = (lo + hi) / 2
    for _ in range(8):
        d = evaluate(dp_mp, x)
        if d == 0:
            break
        step = evaluate(p_mp, x) / d
        x -= step
        if abs(step) <= ctx.mpf(2) ** (-bits) * (1 + abs(x)):
            break
    return x


def real_roots(p: Poly, bits: int = DEFAULT_BITS):
    """Distinct real roots of a real polynomial via Sturm isolation.

    Returns ``(roots, exact_chain)``; ``exact_chain`` tells whether the Sturm
    sequence was computed in exact arithmetic.
    """
    ctx = get_context(bits)
    exact = _as_real_exact(p)
    if exact is not None:
        coeffs, eps = exact, 0
    else:
        coeffs = [to_scalar(c, bits).real for c in p.coeffs]
        scale = max(abs(c) for c in coeffs)
        eps = scale * ctx.mpf(2) ** (-(bits * 3 // 4))
    chain = sturm_sequence(coeffs, eps)
    lead = abs(coeffs[-1])
    bound = 1 + max(abs(c) for c in coeffs[:-1]) / lead if len(coeffs) > 1 else 1
    if exact is not None:
        bound = Fraction(bound).limit_denominator(1) + 1
    lo, hi = -bound, bound
    intervals = []
    _isolate(chain, lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi), intervals)
    p_mp = Poly(to_scalar(c, bits) for c in coeffs)
    dp_mp = p_mp.derivative()
    roots = [_refine(p_mp, dp_mp, a, b, ctx, bits) for a, b in intervals]
    return roots, chain, exact is not None


def complex_roots(p: Poly, bits: int = DEFAULT_BITS):
    """All roots with multiplicity via simultaneous iteration plus Newton polish."""
    ctx = get_context(bits)
    coeffs = [to_scalar(c, bits) for c in reversed(p.coeffs)]
    if len(coeffs) == 2:
        return [-coeffs[1] / coeffs[0]]
    roots = ctx.polyroots(coeffs, maxsteps=400, extraprec=2 * bits)
    ps = p.to_scalar(bits)
    dps = ps.derivative()
    polished = []
    for z in roots:
        for _ in range(6):
            d = evaluate(dps, z)
            if d == 0:
                break
            z = z - evaluate(ps, z) / d
        polished.append(z)
    return polished
