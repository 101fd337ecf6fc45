"""Orthogonality residuals, zeros on the star, symmetry and the Meixner limit."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .constructors import charlier_explicit, coefficient_distance, meixner_explicit
from .errors import ClassificationUnavailableError, ParameterError
from .measures import CharlierParams, MeixnerParams, Params, lattice_sum, perfectness_check
from .numeric import DEFAULT_BITS, GaussianRational, get_context, is_exact, to_scalar
from .polynomials import (
    MultiIndex,
    Poly,
    StarPolynomial,
    evaluate_on_star,
    neg_pochhammer_monomial,
    unit_root,
)
from .roots import complex_roots, count_real_roots, is_real_poly, real_roots


@dataclass
class OrthogonalityReport:
    residuals: list
    tail_bounds: list
    max_residual: object

    def passes(self, threshold) -> bool:
        """Every ``|residual| + tail`` must be at most ``threshold``."""
        threshold = to_scalar(threshold, DEFAULT_BITS)
        return all(abs(v) + t <= threshold
                   for row, trow in zip(self.residuals, self.tail_bounds)
                   for v, t in zip(row, trow))


def orthogonality_check(params: Params, n, p: Poly, tol, bits: int = DEFAULT_BITS) -> OrthogonalityReport:
    """``sum_k p(k) (-k)_j w_l(k)`` for every ray l and ``j < n_l``."""
    n = MultiIndex(n)
    if n.r != params.r:
        raise ParameterError("multi-index length does not match the number of rays")
    ctx = get_context(bits)
    ps = p.to_scalar(bits)
    residuals, tails = [], []
    worst = ctx.mpf(0)
    for ell, nl in enumerate(n):
        row, trow = [], []
        for j in range(nl):
            s = lattice_sum(params, ell, ps * neg_pochhammer_monomial(j), tol, bits)
            row.append(s.value)
            trow.append(s.tail_bound)
            worst = max(worst, abs(s.value) + s.tail_bound)
        residuals.append(row)
        tails.append(trow)
    return OrthogonalityReport(residuals, tails, worst)


@dataclass
class ZeroReport:
    t_roots: list
    multiplicities: list
    all_positive_real_simple: bool
    classified: bool
    min_separation: object = None
    star_zeros: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return sum(self.multiplicities)


def _cluster(roots, ctx, bits):
    """Group numerically coincident roots; returns (representatives, multiplicities)."""
    reps, mult = [], []
    sep = ctx.mpf(2) ** (-(bits // 4))
    for z in roots:
        for i, w in enumerate(reps):
            if abs(z - w) <= sep * (1 + abs(w)):
                mult[i] += 1
                break
        else:
            reps.append(z)
            mult.append(1)
    return reps, mult


def _min_separation(roots, ctx):
    if len(roots) < 2:
        return None
    return min(abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:])


def star_zeros(t_roots, r: int, bits: int = DEFAULT_BITS):
    """``(ray, radius)`` pairs: each positive t-root gives one zero per ray."""
    ctx = get_context(bits)
    out = []
    for t in t_roots:
        if t.imag != 0 or t.real <= 0:
            continue
        radius = ctx.root(t.real, r)
        out.extend((j, radius) for j in range(r))
    return out


def zero_locate(p: Poly, require_classification: bool = True, r: int | None = None,
                bits: int = DEFAULT_BITS) -> ZeroReport:
    """All t-roots of ``p``.

    For real coefficients the Sturm sequence decides whether every root is
    real, simple and positive (exactly, when the coefficients are exact).
    Raises ClassificationUnavailableError for complex coefficients when
    classification is requested; the roots ride along on the exception.
    """
    if p.degree < 1:
        raise ValueError("zero_locate needs degree >= 1")
    ctx = get_context(bits)
    deg = p.degree
    if not is_real_poly(p):
        roots = complex_roots(p, bits)
        reps, mult = _cluster(roots, ctx, bits)
        report = ZeroReport(reps, mult, False, False, _min_separation(reps, ctx))
        if require_classification:
            raise ClassificationUnavailableError(
                "classification needs real coefficients", roots=report)
        return report

    roots, chain, exact_chain = real_roots(p, bits)
    if len(roots) == deg:
        roots.sort()
        positive = count_real_roots(chain, 0, None) == deg and p[0] != 0
        sep = _min_separation(roots, ctx)
        simple = sep is None or all(
            abs(b - a) > ctx.mpf(2) ** (-(bits // 4)) * (1 + abs(a))
            for a, b in zip(roots, roots[1:]))
        report = ZeroReport(roots, [1] * deg, bool(positive and simple), True, sep)
    else:
        allr = complex_roots(p, bits)
        reps, mult = _cluster(allr, ctx, bits)
        reps = [z.real if abs(z.imag) <= ctx.mpf(2) ** (-(bits // 4)) * (1 + abs(z)) else z
                for z in reps]
        report = ZeroReport(reps, mult, False, True, _min_separation(reps, ctx))
    if r is not None:
        report.star_zeros = star_zeros(report.t_roots, r, bits)
    return report


def symmetry_check(sp: StarPolynomial, samples: int, bits: int = DEFAULT_BITS,
                   evaluator=evaluate_on_star, seed: int = 0, tolerance=None) -> bool:
    """``sp(omega**j z) == sp(z)`` on random z, within the equality tolerance.

    The tolerance is applied in the hybrid sense ``tol * max(1, |sp(z)|)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ctx = get_context(bits)
    tol = ctx.mpf(2) ** (-(bits // 2)) if tolerance is None else ctx.mpf(tolerance)
    rng = random.Random(seed)
    for _ in range(samples):
        z = ctx.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
        ref = evaluator(sp, z, bits)
        for j in range(1, sp.r):
            v = evaluator(sp, unit_root(sp.r, j, bits) * z, bits)
            if abs(v - ref) > tol * max(1, abs(ref)):
                return False
    return True


@dataclass
class LimitReport:
    beta_values: list
    coefficient_distances: list
    fitted_rate: float | None
    halving_ratios: list = field(default_factory=list)


def limit_parameters(a, beta):
    """Meixner parameters with ``c_l = a_l / (a_l + beta)``."""
    return MeixnerParams(tuple(x / (x + beta) for x in a), beta)


def fit_rate(betas, distances) -> float | None:
    """Slope of log(distance) against log(beta) over the top half of the grid."""
    half = len(betas) // 2
    xs, ys = [], []
    for b, d in zip(betas[half:], distances[half:]):
        if d > 0:
            xs.append(math.log(float(to_scalar(b, 64).real)))
            ys.append(math.log(float(to_scalar(d, 64).real)))
    if len(xs) < 2:
        return None
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def limit_check(a, n, beta_values, bits: int = DEFAULT_BITS) -> LimitReport:
    """Distance from the Meixner polynomial at ``c = a/(a+beta)`` to Charlier.

    Exact arithmetic is used whenever ``a`` and ``beta`` are exact, so an
    identically vanishing distance comes out as exactly zero.
    """
    charlier = CharlierParams(tuple(a))
    charlier.validate()
    n = MultiIndex(n)
    betas = [GaussianRational.coerce(b) if is_exact(b) else to_scalar(b, bits)
             for b in beta_values]
    if any(b.real <= 0 for b in betas):
        raise ParameterError("beta values must be positive")
    if any(float(y.real) <= float(x.real) for x, y in zip(betas, betas[1:])):
        raise ParameterError("beta values must be strictly increasing")
    target = charlier_explicit(charlier, n)
    distances = []
    for beta in betas:
        mp = limit_parameters(charlier.a, beta)
        check = perfectness_check(mp)
        if not check.passed:
            raise ParameterError("; ".join(check.problems))
        distances.append(coefficient_distance(meixner_explicit(mp, n), target, bits))
    half = len(betas) // 2
    ratios = [distances[i + 1] / distances[i] if distances[i] else None
              for i in range(half, len(betas) - 1)]
    return LimitReport(betas, distances, fit_rate(betas, distances), ratios)
