"""Scalar regimes: exact Gaussian rationals and fixed-precision complex floats.

Two kinds of coefficients flow through the library:

* :class:`GaussianRational` -- exact ``re + i*im`` with ``Fraction`` parts.
  Used whenever every input is rational and only ring operations occur.
* mpmath values bound to a private context of ``bits`` precision.  Real
  values are kept as ``mpf`` and promoted to ``mpc`` only when an imaginary
  part appears, which roughly triples the speed of long lattice sums.

Each precision gets its own ``MPContext`` so values never depend on the
global ``mpmath.mp`` state.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from mpmath import MPContext

DEFAULT_BITS = 256
MIN_BITS = 64


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def _other(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)):
            return GaussianRational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        if not self.im and not o.im:
            return GaussianRational(self.re / o.re)
        return GaussianRational((self.re * o.re + self.im * o.im) / den,
                                (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussianRational(1) / (self ** (-n))
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


@lru_cache(maxsize=None)
def get_context(bits: int) -> MPContext:
    if bits < MIN_BITS:
        raise ValueError(f"precision must be at least {MIN_BITS} bits, got {bits}")
    ctx = MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class PrecisionConfig:
    bits: int = DEFAULT_BITS
    equality_tolerance: float | None = field(default=None)

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < MIN_BITS:
            raise ValueError(f"bits must be an integer >= {MIN_BITS}")
        if self.equality_tolerance is None:
            object.__setattr__(self, "equality_tolerance", 2.0 ** (-self.bits / 2))
        elif not self.equality_tolerance > 0:
            raise ValueError("equality_tolerance must be positive")

    @property
    def ctx(self) -> MPContext:
        return get_context(self.bits)

    @classmethod
    def from_env(cls, bits: int | None = None) -> "PrecisionConfig":
        """Explicit ``bits`` wins, then ``MOP_PRECISION_BITS``, then the default."""
        if bits is None:
            env = os.environ.get("MOP_PRECISION_BITS")
            bits = int(env) if env else DEFAULT_BITS
        return cls(bits=bits)


def is_exact(x) -> bool:
    return isinstance(x, (GaussianRational, int, Rational))


def to_scalar(x, bits: int = DEFAULT_BITS):
    """Round ``x`` once into the ``bits``-precision context."""
    ctx = get_context(bits)
    if isinstance(x, GaussianRational):
        re = ctx.mpf(x.re.numerator) / x.re.denominator
        if not x.im:
            return re
        return ctx.mpc(re, ctx.mpf(x.im.numerator) / x.im.denominator)
    if isinstance(x, Rational):
        q = Fraction(x)
        return ctx.mpf(q.numerator) / q.denominator
    if isinstance(x, complex):
        return ctx.mpc(x.real, x.imag) if x.imag else ctx.mpf(x.real)
    # mpmath values from another context are re-rounded here
    re = ctx.mpf(x.real)
    im = ctx.mpf(x.imag)
    return ctx.mpc(re, im) if im else re


def scalar_abs(x, bits: int = DEFAULT_BITS):
    """Modulus as an mpf of the given precision (exact input is rounded first)."""
    return abs(to_scalar(x, bits))


def pochhammer_value(x, n: int):
    """Rising factorial ``x (x+1) ... (x+n-1)``; the empty product is 1.

    Works for any scalar type closed under ``+`` and ``*``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = 1
    for i in range(n):
        result = result * (x + i)
    if isinstance(x, GaussianRational) and not isinstance(result, GaussianRational):
        return GaussianRational(result)
    return result


def approx_equal(u, v, tol, bits: int = DEFAULT_BITS) -> bool:
    """Hybrid test ``|u - v| <= tol * max(1, |u|, |v|)``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if is_exact(u) and is_exact(v):
        gu, gv = GaussianRational.coerce(u), GaussianRational.coerce(v)
        if gu == gv:
            return True
    ctx = get_context(bits)
    su, sv = to_scalar(u, bits), to_scalar(v, bits)
    scale = max(ctx.mpf(1), abs(su), abs(sv))
    return abs(su - sv) <= to_scalar(tol, bits) * scale


def parse_complex(text: str) -> GaussianRational:
    """Parse ``"re"``, ``"re+imi"``, ``"imi"`` or ``"1/3-2/5i"`` exactly.

    Decimal strings go through ``Fraction`` so ``"0.1"`` is exactly 1/10.
    """
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise ValueError("empty complex literal")
    if not s.endswith("i"):
        return GaussianRational(Fraction(s))
    body = s[:-1]
    # split at the last sign that is not part of an exponent or leading
    cut = None
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            cut = pos
            break
    if cut is None:
        re_txt, im_txt = "0", body
    else:
        re_txt, im_txt = body[:cut], body[cut:]
    if im_txt in ("", "+"):
        im_txt = "1"
    elif im_txt == "-":
        im_txt = "-1"
    return GaussianRational(Fraction(re_txt), Fraction(im_txt))


def format_real(x, bits: int = DEFAULT_BITS) -> str:
    """Decimal string for one real component.

    Exact integers print without a fractional part; everything else prints
    with enough digits to round-trip at ``bits`` precision.
    """
    if isinstance(x, Rational):
        q = Fraction(x)
        if q.denominator == 1:
            return str(q.numerator)
    ctx = get_context(bits)
    v = to_scalar(x, bits)
    if v == 0:
        return "0"
    if v == int(v) and abs(v) < ctx.mpf(2) ** 64:
        return str(int(v))
    dps = int(bits * math.log10(2)) + 1
    return ctx.nstr(v, dps, min_fixed=-5, max_fixed=30)


def format_complex(x, bits: int = DEFAULT_BITS) -> list[str]:
    if isinstance(x, GaussianRational):
        return [format_real(x.re, bits), format_real(x.im, bits)]
    if isinstance(x, Rational):
        return [format_real(x, bits), "0"]
    return [format_real(x.real, bits), format_real(x.imag, bits)]
