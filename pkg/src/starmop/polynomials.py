"""Dense polynomials in the reduced variable ``t = z**r``.

Everything is stored lowest degree first.  Coefficients can be any scalar
closed under ring operations (``GaussianRational``, mpmath values, ints);
the class never inspects their type beyond comparing with zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .numeric import DEFAULT_BITS, GaussianRational, get_context, to_scalar


class MultiIndex(tuple):
    """r-vector of nonnegative integers."""

    def __new__(cls, entries):
        entries = tuple(int(e) for e in entries)
        if not entries:
            raise ValueError("multi-index must have at least one entry")
        if any(e < 0 for e in entries):
            raise ValueError(f"negative entry in multi-index {entries}")
        return super().__new__(cls, entries)

    @property
    def r(self) -> int:
        return len(self)

    @property
    def total(self) -> int:
        return sum(self)

    def raised(self, leg: int) -> "MultiIndex":
        entries = list(self)
        entries[leg] += 1
        return MultiIndex(entries)

    def lowered(self, leg: int) -> "MultiIndex":
        if self[leg] == 0:
            raise ValueError(f"cannot lower leg {leg} of {tuple(self)}")
        entries = list(self)
        entries[leg] -= 1
        return MultiIndex(entries)

    @classmethod
    def zero(cls, r: int) -> "MultiIndex":
        return cls((0,) * r)

    @classmethod
    def unit(cls, r: int, leg: int) -> "MultiIndex":
        return cls.zero(r).raised(leg)

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


def multi_indices(r: int, max_total: int):
    """All multi-indices of length ``r`` with ``|n| <= max_total``, graded."""
    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for k in range(remaining, -1, -1):
            yield from rec(prefix + (k,), remaining - k, slots - 1)

    for s in range(max_total + 1):
        for entries in rec((), s, r):
            yield MultiIndex(entries)


def index_box(bounds):
    """All multi-indices ``n`` with ``0 <= n_l <= bounds_l``."""
    from itertools import product
    for entries in product(*(range(b + 1) for b in bounds)):
        yield MultiIndex(entries)


def _is_zero(c) -> bool:
    return c == 0


class Poly:
    """Immutable dense polynomial in t."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, m: int, c=1) -> "Poly":
        return cls((0,) * m + (c,))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, m: int):
        if 0 <= m < len(self.coeffs):
            return self.coeffs[m]
        return 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.constant(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __rmul__(self, other):
        return Poly(other * c for c in self.coeffs)

    def times_t(self) -> "Poly":
        """Multiply by t."""
        if self.is_zero():
            return self
        return Poly((0,) + self.coeffs)

    def shift(self, h) -> "Poly":
        """Return q with q(t) = p(t + h)."""
        d = self.degree
        if d <= 0:
            return self
        hp = [1]
        for _ in range(d):
            hp.append(hp[-1] * h)
        out = []
        for m in range(d + 1):
            acc = 0
            for i in range(m, d + 1):
                acc = acc + comb(i, m) * hp[i - m] * self.coeffs[i]
            out.append(acc)
        return Poly(out)

    def __call__(self, t):
        return evaluate(self, t)

    def map(self, fn) -> "Poly":
        return Poly(fn(c) for c in self.coeffs)

    def to_scalar(self, bits: int = DEFAULT_BITS) -> "Poly":
        return self.map(lambda c: to_scalar(c, bits))

    def derivative(self) -> "Poly":
        return Poly(m * c for m, c in enumerate(self.coeffs) if m)

    def max_abs_coeff(self, bits: int = DEFAULT_BITS):
        ctx = get_context(bits)
        if self.is_zero():
            return ctx.mpf(0)
        return max(abs(to_scalar(c, bits)) for c in self.coeffs)


T = Poly((0, 1))


def shift_arg(p: Poly) -> Poly:
    """q(t) = p(t - 1), the lattice shift behind the backward difference."""
    return p.shift(-1)


def evaluate(p: Poly, t):
    """Horner evaluation; the zero polynomial evaluates to 0."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * t + c
    return acc


@dataclass(frozen=True)
class PochhammerPoly:
    """Coefficients on the basis ``(-t)_j``, index j."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))


@lru_cache(maxsize=8)
def stirling_table(n_max: int) -> tuple[tuple[int, ...], ...]:
    """Signed Stirling numbers of the first kind ``S[n][m]``, ``0 <= m <= n <= n_max``.

    They are defined by ``(-z)_n = (-1)**n * sum_m S[n][m] z**m``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rows = [(1,)]
    for n in range(n_max):
        prev = rows[-1]
        row = []
        for m in range(n + 2):
            left = prev[m - 1] if m >= 1 else 0
            here = prev[m] if m <= n else 0
            row.append(left - n * here)
        rows.append(tuple(row))
    return tuple(rows)


def neg_pochhammer_monomial(j: int) -> Poly:
    """Monomial coefficients of ``(-t)_j`` (integers)."""
    row = stirling_table(max(j, 0))[j]
    sign = -1 if j % 2 else 1
    return Poly(sign * s for s in row)


def rising_shifted(shift, m: int) -> Poly:
    """Monomial coefficients of ``(t + shift)_m``."""
    p = Poly.constant(1)
    for i in range(m):
        p = p * Poly((shift + i, 1))
    return p


def pochhammer_to_monomial(p: PochhammerPoly) -> Poly:
    n = len(p.coeffs) - 1
    if n < 0:
        return Poly()
    table = stirling_table(n)
    out = [0] * (n + 1)
    for j, c in enumerate(p.coeffs):
        if _is_zero(c):
            continue
        sign = -1 if j % 2 else 1
        for m in range(j + 1):
            s = table[j][m]
            if s:
                out[m] = out[m] + (sign * s) * c
    return Poly(out)


def monomial_to_pochhammer(p: Poly) -> PochhammerPoly:
    n = p.degree
    if n < 0:
        return PochhammerPoly(())
    table = stirling_table(n)
    rest = list(p.coeffs)
    out = [0] * (n + 1)
    # (-t)_j has leading monomial (-1)**j t**j
    for j in range(n, -1, -1):
        sign = -1 if j % 2 else 1
        c = rest[j] * sign
        out[j] = c
        if _is_zero(c):
            continue
        for m in range(j + 1):
            s = table[j][m]
            if s:
                rest[m] = rest[m] - (sign * s) * c
    return PochhammerPoly(tuple(out))


def unit_root(r: int, j: int, bits: int = DEFAULT_BITS):
    """omega**j with omega = exp(2 pi i / r)."""
    ctx = get_context(bits)
    j %= r
    if j == 0:
        return ctx.mpc(1, 0)
    return ctx.expjpi(ctx.mpf(2 * j) / r)


@dataclass(frozen=True)
class StarPolynomial:
    """A polynomial in z that depends on z only through ``z**r``."""

    r: int
    base: Poly

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be positive")

    def evaluate(self, z, bits: int = DEFAULT_BITS):
        return evaluate_on_star(self, z, bits)

    def __call__(self, z, bits: int = DEFAULT_BITS):
        return evaluate_on_star(self, z, bits)


def evaluate_on_star(sp: StarPolynomial, z, bits: int = DEFAULT_BITS):
    if isinstance(z, (GaussianRational, int)):
        return evaluate(sp.base, z ** sp.r)
    z = to_scalar(z, bits)
    ctx = get_context(bits)
    base = sp.base.to_scalar(bits)
    return evaluate(base, ctx.power(z, sp.r))
