"""Charlier and Meixner (first kind) measure systems on the r-star.

Every ray carries the same lattice ``t = z**r = k``, ``k = 0, 1, ...``; only
the weight differs between rays.  All series are summed in the t-lattice
form so radicals never enter an orthogonality sum.

Truncation is certified with a majorant: for a summand ``p(k) w(k)`` put
``B(k) = (sum_i |p_i| k**i) |w(k)|``.  Then ``B(k+1)/B(k) <= R(k)`` with

    R(k) = ((k+1)/k)**deg(p) * weight_ratio_bound(k),

which is nonincreasing in k.  Once ``R(K) <= rho`` the remaining tail is at
most ``B(K) rho / (1 - rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Rational
from typing import NamedTuple

from .errors import ParameterError
from .numeric import (
    DEFAULT_BITS,
    GaussianRational,
    get_context,
    is_exact,
    to_scalar,
)
from .polynomials import Poly, unit_root

CHARLIER = "charlier"
MEIXNER = "meixner"


def coerce_param(x):
    """Exact inputs become GaussianRational; mpmath values pass through."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussianRational(x)
    if isinstance(x, str):
        from .numeric import parse_complex
        return parse_complex(x)
    if isinstance(x, (float, complex)):
        return GaussianRational.coerce(x)
    return x


def _abs_float(x) -> float:
    return float(abs(to_scalar(x, 64)))


def _is_nonpositive_integer(x) -> bool:
    if isinstance(x, GaussianRational):
        return x.im == 0 and x.re.denominator == 1 and x.re <= 0
    if x.imag != 0:
        return False
    re = x.real
    return re <= 0 and re == int(re)


def _equal(u, v) -> bool:
    if is_exact(u) and is_exact(v):
        return GaussianRational.coerce(u) == GaussianRational.coerce(v)
    return to_scalar(u) == to_scalar(v)


@dataclass(frozen=True)
class CharlierParams:
    """Poisson-type weights ``a_l**k / k!`` on ray l."""

    a: tuple
    family = CHARLIER

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(coerce_param(x) for x in self.a))
        if not self.a:
            raise ParameterError("at least one ray is required")

    @property
    def r(self) -> int:
        return len(self.a)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, GaussianRational) for x in self.a)

    def validate(self) -> None:
        for ell, x in enumerate(self.a):
            if x == 0:
                raise ParameterError(f"a[{ell}] must be non-zero")

    def ray_key(self, ell: int):
        return (CHARLIER, self.a[ell])

    def to_scalar(self, bits: int) -> "CharlierParams":
        return CharlierParams(tuple(to_scalar(x, bits) for x in self.a))


@dataclass(frozen=True)
class MeixnerParams:
    """Negative-binomial weights ``(beta)_k c_l**k / k!`` on ray l.

    The common factor Gamma(beta) is dropped everywhere; it scales whole
    rows of the moment system and cancels in every orthogonality relation.
    """

    c: tuple
    beta: object
    c_bar: float = field(default=None, compare=False)
    family = MEIXNER

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(coerce_param(x) for x in self.c))
        object.__setattr__(self, "beta", coerce_param(self.beta))
        if not self.c:
            raise ParameterError("at least one ray is required")
        if self.c_bar is None:
            object.__setattr__(self, "c_bar", max(_abs_float(x) for x in self.c))

    @property
    def r(self) -> int:
        return len(self.c)

    @property
    def exact(self) -> bool:
        return isinstance(self.beta, GaussianRational) and all(
            isinstance(x, GaussianRational) for x in self.c)

    def validate(self, convergent: bool = True) -> None:
        """Raise ParameterError unless the weights are well defined.

        ``convergent=False`` skips the ``|c| < 1`` requirement, which only
        the moment series need; the polynomial pathways do not.
        """
        if _is_nonpositive_integer(self.beta):
            raise ParameterError(f"beta must avoid 0, -1, -2, ...; got {self.beta}")
        for ell, x in enumerate(self.c):
            if x == 0:
                raise ParameterError(f"c[{ell}] must be non-zero")
            if x == 1:
                raise ParameterError(f"c[{ell}] must differ from 1")
        if convergent and not self.c_bar < 1:
            raise ParameterError(
                f"moment series diverge unless max |c| < 1 (got {self.c_bar})")

    def ray_key(self, ell: int):
        return (MEIXNER, self.c[ell], self.beta)

    def to_scalar(self, bits: int) -> "MeixnerParams":
        return MeixnerParams(tuple(to_scalar(x, bits) for x in self.c),
                             to_scalar(self.beta, bits), c_bar=self.c_bar)

    def with_beta(self, beta) -> "MeixnerParams":
        return MeixnerParams(self.c, beta)


Params = CharlierParams | MeixnerParams


def weight_charlier(params: CharlierParams, ell: int, k: int):
    """``a_l**k / k!`` by running product; exact for exact ``a``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = params.a[ell]
    w = GaussianRational(1) if isinstance(a, GaussianRational) else 1
    for i in range(1, k + 1):
        w = w * a / i
    return w


def weight_meixner(params: MeixnerParams, ell: int, k: int):
    """Normalized weight ``(beta)_k c_l**k / k!`` by running product."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    params.validate(convergent=False)
    c, beta = params.c[ell], params.beta
    w = GaussianRational(1) if isinstance(c, GaussianRational) else 1
    for i in range(k):
        w = w * c * (beta + i) / (i + 1)
    return w


def weight(params: Params, ell: int, k: int):
    if params.family == CHARLIER:
        return weight_charlier(params, ell, k)
    return weight_meixner(params, ell, k)


class _WeightSequence:
    """Lazily extended list of weights on one ray at one precision."""

    def __init__(self, params: Params, ell: int, bits: int):
        self.ctx = get_context(bits)
        self.family = params.family
        if params.family == CHARLIER:
            self.a = to_scalar(params.a[ell], bits)
            self.abs_a = abs(self.a)
        else:
            self.c = to_scalar(params.c[ell], bits)
            self.beta = to_scalar(params.beta, bits)
            self.abs_c = abs(self.c)
            self.beta_slack = abs(self.beta - 1)
        self.values = [self.ctx.mpf(1)]

    def get(self, k: int):
        vals = self.values
        while len(vals) <= k:
            i = len(vals) - 1
            if self.family == CHARLIER:
                vals.append(vals[i] * self.a / (i + 1))
            else:
                vals.append(vals[i] * self.c * (self.beta + i) / (i + 1))
        return vals[k]

    def ratio_bound(self, k: int):
        """Upper bound on |w(k+1)/w(k)|, nonincreasing in k."""
        if self.family == CHARLIER:
            return self.abs_a / (k + 1)
        return self.abs_c * (1 + self.beta_slack / (k + 1))


_weight_cache: dict = {}


def _weights(params: Params, ell: int, bits: int) -> _WeightSequence:
    key = (params.ray_key(ell), bits)
    seq = _weight_cache.get(key)
    if seq is None:
        if len(_weight_cache) > 512:
            _weight_cache.clear()
        seq = _weight_cache[key] = _WeightSequence(params, ell, bits)
    return seq


def contraction_target(params: Params) -> float:
    """Ratio ``rho`` the majorant must reach before truncation is allowed."""
    if params.family == CHARLIER:
        return 0.5
    return (1 + params.c_bar) / 2


class LatticeSum(NamedTuple):
    value: object
    tail_bound: object
    k_used: int
    ratio_bound: object


def lattice_sum(params: Params, ell: int, p: Poly, tol, bits: int = DEFAULT_BITS,
                k_min: int | None = None, k_max: int = 200000) -> LatticeSum:
    """Certified ``sum_{k>=0} p(k) w_l(k)``.

    ``k_used`` is the number of summed terms; ``tail_bound`` bounds the
    modulus of everything left out.  Raises ParameterError for divergent
    Meixner parameters.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    params.validate()
    ctx = get_context(bits)
    tol = to_scalar(tol, bits)
    ps = p.to_scalar(bits)
    deg = max(ps.degree, 0)
    if k_min is None:
        k_min = 8 * (deg + 1)
    majorant = [abs(c) for c in ps.coeffs]
    rho = ctx.mpf(contraction_target(params))
    seq = _weights(params, ell, bits)
    total = ctx.mpf(0)
    k = 0
    while True:
        w = seq.get(k)
        if not ps.is_zero():
            v = ps.coeffs[-1]
            for c in reversed(ps.coeffs[:-1]):
                v = v * k + c
            total += v * w
        if k >= k_min and k >= 1:
            ratio = ((ctx.mpf(k + 1) / k) ** deg) * seq.ratio_bound(k)
            if ratio <= rho:
                q = majorant[-1] if majorant else ctx.mpf(0)
                for c in reversed(majorant[:-1]):
                    q = q * k + c
                tail = q * abs(w) * rho / (1 - rho)
                if tail < tol:
                    return LatticeSum(total, tail, k + 1, ratio)
        k += 1
        if k > k_max:
            raise ParameterError("lattice sum did not reach the requested tolerance")


_moment_cache: dict = {}


def moment(params: Params, ell: int, power: int, tol, bits: int = DEFAULT_BITS) -> LatticeSum:
    """``m_power^(ell) = sum_k k**power w_ell(k)`` with a certified tail.

    Memoized per ray, so parameter vectors sharing an entry share its moments.
    """
    key = (params.ray_key(ell), power, tol, bits)
    hit = _moment_cache.get(key)
    if hit is None:
        if len(_moment_cache) > 20000:
            _moment_cache.clear()
        hit = _moment_cache[key] = lattice_sum(params, ell, Poly.monomial(power), tol, bits)
    return hit


@dataclass
class MomentTable:
    """Moments ``m[ell][j]`` for ``j <= max_power`` with their tail bounds."""

    family: str
    moments: list
    tail_bounds: list
    k_used: int
    tol: object
    bits: int

    @classmethod
    def build(cls, params: Params, max_power: int, tol, bits: int = DEFAULT_BITS,
              powers_per_ray=None) -> "MomentTable":
        r = params.r
        if powers_per_ray is None:
            powers_per_ray = [max_power] * r
        moments, tails, k_used = [], [], 0
        for ell in range(r):
            row, trow = [], []
            for j in range(powers_per_ray[ell] + 1):
                s = moment(params, ell, j, tol, bits)
                row.append(s.value)
                trow.append(s.tail_bound)
                k_used = max(k_used, s.k_used)
            moments.append(row)
            tails.append(trow)
        return cls(params.family, moments, tails, k_used, tol, bits)


@dataclass(frozen=True)
class MassPointGrid:
    """Mass points ``z_{j,k} = k**(1/r) omega**j``, stored as (ray, k)."""

    r: int
    K: int

    def lattice(self):
        for j in range(self.r):
            for k in range(self.K):
                yield j, k

    def point(self, j: int, k: int, bits: int = DEFAULT_BITS):
        ctx = get_context(bits)
        radius = ctx.root(ctx.mpf(k), self.r) if k else ctx.mpf(0)
        return radius * unit_root(self.r, j, bits)


@dataclass
class PerfectnessReport:
    passed: bool
    violating_pairs: list
    problems: list

    def __bool__(self):
        return self.passed


def perfectness_check(params: Params) -> PerfectnessReport:
    """Pairwise-distinct parameters plus family validity.

    Under the principal branch ``ln(a_j/a_l) != 2 pi i k`` for all integers k
    is the same as ``a_j != a_l``.
    """
    entries = params.a if params.family == CHARLIER else params.c
    pairs = [(i, j) for i in range(len(entries)) for j in range(i + 1, len(entries))
             if _equal(entries[i], entries[j])]
    problems = [f"parameters {i} and {j} coincide" for i, j in pairs]
    try:
        params.validate()
    except ParameterError as exc:
        problems.append(str(exc))
    return PerfectnessReport(not problems, pairs, problems)
