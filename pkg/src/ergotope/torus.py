"""Arithmetic on the 2-torus and the skew map (x, y) -> (x, x + y mod 1).

The x-coordinate is a :data:`BaseValue`: an exact reduced rational, an
exact quadratic irrational ``(a + b*sqrt(d))/c``, or a tagged float.
The y-coordinate is a :class:`fractions.Fraction` (exact) or a ``float``.

Orbit y-coordinates are evaluated from the closed form
``frac(y0 + i*x)`` rather than by repeated addition, so rounding error
does not accumulate along the orbit.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

__all__ = [
    "Rational",
    "QuadraticIrrational",
    "FloatValue",
    "BaseValue",
    "TorusPoint",
    "GOLDEN",
    "SQRT2M1",
    "frac",
    "parse_base_value",
    "parse_coordinate",
    "format_base_value",
    "format_coordinate",
    "is_rational",
    "frac_multiples",
    "skew_map",
    "orbit_points",
    "orbit_y",
    "orbit_y_numerators",
    "orbit_precision",
]

Coordinate = Union[Fraction, float]

PRECISION_ENV = "ERGOTOPE_PRECISION"


def frac(v):
    """Fractional part in [0, 1); exact for ints and Fractions."""
    if isinstance(v, int):
        return Fraction(0)
    if isinstance(v, Fraction):
        return v - math.floor(v)
    r = v - math.floor(v)
    # tiny negative inputs round up to 1.0
    return 0.0 if r >= 1.0 else r


def _floor_div_surd(a: int, b: int, d: int, c: int) -> int:
    """Exact floor of (a + b*sqrt(d)) / c for b*sqrt(d) irrational."""
    t = math.isqrt(b * b * d)
    # the numerator lies strictly inside (low, low + 1)
    low = a + t if b > 0 else a - t - 1
    if c > 0:
        return low // c
    return (-low - 1) // (-c)


def _squarefree_split(d: int, limit: int = 10**6) -> tuple[int, int]:
    """Return (f, r) with d = f*f*r, extracting square factors up to ``limit``."""
    f = 1
    k = 2
    while k * k <= d and k <= limit:
        kk = k * k
        while d % kk == 0:
            d //= kk
            f *= k
        k += 1
    return f, d


@dataclass(frozen=True)
class Rational:
    """Reduced rational p/q on the circle, stored with 0 <= p < q."""

    p: int
    q: int = 1

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if q == 0:
            raise ValueError("denominator must be nonzero")
        if q < 0:
            p, q = -p, -q
        p %= q
        g = math.gcd(p, q)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Rational":
        return cls(value.numerator, value.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return self.p / self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class QuadraticIrrational:
    """The number (a + b*sqrt(d)) / c reduced modulo 1.

    Construction normalizes to a canonical form: square factors pulled
    out of ``d``, ``gcd(a, b, c) = 1``, ``c > 0`` and value in [0, 1).
    """

    a: int
    b: int
    d: int
    c: int = 1
    _hi: float = field(init=False, repr=False, compare=False)
    _lo: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a, b, d, c = int(self.a), int(self.b), int(self.d), int(self.c)
        if c == 0:
            raise ValueError("c must be nonzero")
        if d <= 0 or b == 0:
            raise ValueError("need d > 0 and b != 0")
        f, d = _squarefree_split(d)
        b *= f
        if math.isqrt(d) ** 2 == d:
            raise ValueError(f"sqrt({d * f * f}) is rational; use p/q instead")
        if c < 0:
            a, b, c = -a, -b, -c
        a -= c * _floor_div_surd(a, b, d, c)
        g = math.gcd(math.gcd(a, b), c)
        a, b, c = a // g, b // g, c // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", c)
        scale = 1 << 128
        fixed = _floor_div_surd(a * scale, b * scale, d, c)
        hi = float(Fraction(fixed, scale))
        lo = float(Fraction(fixed, scale) - Fraction(hi))
        object.__setattr__(self, "_hi", hi)
        object.__setattr__(self, "_lo", lo)

    def __float__(self) -> float:
        return self._hi

    @property
    def hi_lo(self) -> tuple[float, float]:
        """Double-double approximation; ``hi + lo`` has error below 1e-32."""
        return self._hi, self._lo

    def floor_scaled(self, k: int) -> int:
        """Exact floor(k * self) for an integer k."""
        return _floor_div_surd(k * self.a, k * self.b, self.d, self.c)

    def compare(self, r: Fraction) -> int:
        """Exact sign of ``self - r``; never zero."""
        r = Fraction(r)
        # sign of (a*den - c*num) + b*den*sqrt(d)
        u = self.a * r.denominator - self.c * r.numerator
        v = self.b * r.denominator
        if u >= 0 and v > 0:
            return 1
        if u <= 0 and v < 0:
            return -1
        bigger_surd = v * v * self.d > u * u
        if v > 0:
            return 1 if bigger_surd else -1
        return -1 if bigger_surd else 1

    def __str__(self) -> str:
        return format_base_value(self)


@dataclass(frozen=True)
class FloatValue:
    """A float x-coordinate.

    Every classification routine treats it as irrational.  Measure
    construction additionally requires ``assume_irrational=True`` or a
    prior call to :func:`ergotope.numtheory.rationalize`.
    """

    v: float
    assume_irrational: bool = False

    def __post_init__(self):
        v = float(self.v)
        if not math.isfinite(v):
            raise ValueError("float coordinate must be finite")
        object.__setattr__(self, "v", frac(v))

    def __float__(self) -> float:
        return self.v

    @property
    def hi_lo(self) -> tuple[float, float]:
        return self.v, 0.0

    def __str__(self) -> str:
        return repr(self.v)


BaseValue = Union[Rational, QuadraticIrrational, FloatValue]

GOLDEN = QuadraticIrrational(-1, 1, 5, 2)
SQRT2M1 = QuadraticIrrational(-1, 1, 2, 1)
_NAMED = {"golden": GOLDEN, "sqrt2m1": SQRT2M1}

_SURD_RE = re.compile(
    r"""^\(\s*(?P<a>[+-]?\d+)\s*(?P<sign>[+-])\s*(?:(?P<b>\d+)\s*\*\s*)?
        sqrt\(\s*(?P<d>\d+)\s*\)\s*\)\s*(?:/\s*(?P<c>[+-]?\d+))?$""",
    re.VERBOSE,
)
_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")


def parse_base_value(text: str) -> BaseValue:
    """Parse ``p/q``, ``golden``, ``sqrt2m1``, ``(a+b*sqrt(d))/c`` or a decimal.

    Integers parse as exact rationals; anything with a decimal point or
    exponent parses as a :class:`FloatValue`.
    """
    s = text.strip()
    if s.lower() in _NAMED:
        return _NAMED[s.lower()]
    m = _RATIONAL_RE.match(s)
    if m:
        q = int(m.group(2))
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Rational(int(m.group(1)), q)
    m = _SURD_RE.match(s)
    if m:
        b = int(m.group("b") or 1)
        if m.group("sign") == "-":
            b = -b
        return QuadraticIrrational(int(m.group("a")), b, int(m.group("d")), int(m.group("c") or 1))
    if re.fullmatch(r"[+-]?\d+", s):
        return Rational(int(s), 1)
    try:
        v = float(s)
    except ValueError:
        raise ValueError(f"cannot parse base value {text!r}") from None
    return FloatValue(v)


def parse_coordinate(text: str) -> Fraction:
    """Parse a y-coordinate; decimals and ``p/q`` are read exactly."""
    try:
        return frac(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse coordinate {text!r}") from None


def format_base_value(x: BaseValue) -> str:
    if isinstance(x, Rational):
        return "0" if x.p == 0 else f"{x.p}/{x.q}"
    if isinstance(x, QuadraticIrrational):
        for name, value in _NAMED.items():
            if value == x:
                return name
        sign = "+" if x.b > 0 else "-"
        b = abs(x.b)
        surd = f"sqrt({x.d})" if b == 1 else f"{b}*sqrt({x.d})"
        return f"({x.a}{sign}{surd})/{x.c}"
    return repr(x.v)


def format_coordinate(y: Coordinate) -> str:
    """Shortest exact text for a coordinate; terminating decimals stay decimal."""
    if isinstance(y, float):
        return repr(y)
    y = Fraction(y)
    if y.denominator == 1:
        return str(y.numerator)
    den = y.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{y.numerator}/{y.denominator}"
    digits = max(twos, fives)
    scaled = y.numerator * 10**digits // y.denominator
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def is_rational(x: BaseValue) -> bool:
    return isinstance(x, Rational)


def orbit_precision() -> str:
    """Orbit arithmetic width selected by ``ERGOTOPE_PRECISION``."""
    mode = os.environ.get(PRECISION_ENV, "extended").strip().lower()
    if mode not in ("double", "extended"):
        raise ValueError(f"{PRECISION_ENV} must be 'double' or 'extended', got {mode!r}")
    return mode


def _frac_multiples_irrational(hi: float, lo: float, k: np.ndarray) -> np.ndarray:
    # hi = top + rest with top carrying 26 bits, so k*top mod 1 is exact in
    # integers; the two small tails contribute well under 1e-14 for |k| < 2**33.
    top_int = int(math.floor(math.ldexp(hi, 26)))
    rest = hi - math.ldexp(top_int, -26)
    kmod = np.mod(k, 1 << 26)
    exact = np.mod(kmod * top_int, 1 << 26).astype(np.float64) * 2.0**-26
    kf = k.astype(np.float64)
    total = exact + (kf * rest + kf * lo)
    total -= np.floor(total)
    total[total >= 1.0] = 0.0
    return total


def frac_multiples(x: BaseValue, k) -> np.ndarray:
    """Vectorized ``frac(k * x)`` for integer array ``k``.

    Rational x is exact up to the final division.  For irrational x the
    absolute error stays below 1e-14 for |k| <= 1e9 in extended mode.
    """
    k = np.asarray(k, dtype=np.int64)
    if isinstance(x, Rational):
        if x.q < 1 << 31:
            return np.mod(np.mod(k, x.q) * x.p, x.q) / x.q
        return np.array([(int(i) * x.p % x.q) / x.q for i in k.ravel()]).reshape(k.shape)
    hi, lo = x.hi_lo
    if orbit_precision() == "double":
        t = k.astype(np.float64) * hi
        t -= np.floor(t)
        t[t >= 1.0] = 0.0
        return t
    return _frac_multiples_irrational(hi, lo, k)


@dataclass(frozen=True)
class TorusPoint:
    x: BaseValue
    y: Coordinate = Fraction(0)

    def __post_init__(self):
        y = self.y
        if isinstance(y, int):
            y = Fraction(y)
        elif not isinstance(y, Fraction):
            y = float(y)
            if not math.isfinite(y):
                raise ValueError("y must be finite")
        object.__setattr__(self, "y", frac(y))

    def __str__(self) -> str:
        return f"({format_base_value(self.x)}, {format_coordinate(self.y)})"


def _shift_by_residue(y0: Coordinate, r: int, q: int) -> Coordinate:
    if isinstance(y0, Fraction):
        return frac(y0 + Fraction(r, q))
    return frac(y0 + r / q)


def skew_map(point: TorusPoint) -> TorusPoint:
    """f(x, y) = (x, x + y mod 1); the x component is passed through untouched."""
    x, y = point.x, point.y
    if isinstance(x, Rational):
        return TorusPoint(x, _shift_by_residue(y, x.p, x.q))
    hi, lo = x.hi_lo
    return TorusPoint(x, frac((float(y) + hi) + lo))


def orbit_y(point: TorusPoint, n: int, start: int = 0):
    """y-coordinates of ``f^i(point)`` for ``i`` in ``[start, start + n)``.

    Returns a list of Fractions when both x and y0 are rational,
    otherwise a float array.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x, y0 = point.x, point.y
    if isinstance(x, Rational):
        q, p = x.q, x.p
        if isinstance(y0, Fraction):
            L, nums = orbit_y_numerators(point, n, start)
            return [Fraction(k, L) for k in nums]
        ys = y0 + frac_multiples(x, np.arange(start, start + n))
        ys -= np.floor(ys)
        ys[ys >= 1.0] = 0.0
        return ys
    ys = float(y0) + frac_multiples(x, np.arange(start, start + n))
    ys -= np.floor(ys)
    ys[ys >= 1.0] = 0.0
    return ys


def orbit_y_numerators(point: TorusPoint, n: int, start: int = 0) -> tuple[int, list[int]]:
    """Exact orbit y-coordinates as integers over one denominator.

    Needs rational x = p/q and rational y0 = r/s; returns ``(L, nums)``
    with L = s*q and y_i = nums[i] / L.
    """
    x, y0 = point.x, point.y
    if not (isinstance(x, Rational) and isinstance(y0, Fraction)):
        raise TypeError("exact orbit needs rational x and rational y0")
    q, p = x.q, x.p
    r0, s = y0.numerator, y0.denominator
    L = s * q
    base = r0 * q
    return L, [(base + (i * p % q) * s) % L for i in range(start, start + n)]


def orbit_points(point: TorusPoint, n: int) -> list[TorusPoint]:
    """The first n points ``f^0(point), ..., f^(n-1)(point)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [TorusPoint(point.x, y if isinstance(y, Fraction) else float(y)) for y in orbit_y(point, n)]
