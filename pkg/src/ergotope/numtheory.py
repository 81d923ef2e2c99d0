"""Continued fractions, rational reduction and Thomae's function."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .torus import BaseValue, FloatValue, QuadraticIrrational, Rational

__all__ = [
    "ContinuedFraction",
    "ThomaeValue",
    "reduce_fraction",
    "continued_fraction",
    "partial_quotients",
    "convergents_from_quotients",
    "dist_to_integers",
    "thomae_eval",
    "rationalize",
]


@dataclass(frozen=True)
class ContinuedFraction:
    partial_quotients: tuple[int, ...]
    convergents: tuple[Fraction, ...]

    @property
    def denominators(self) -> list[int]:
        return [c.denominator for c in self.convergents]


@dataclass(frozen=True)
class ThomaeValue:
    value: Fraction
    classification: str  # "irrational" | "rational" | "zero"

    def __float__(self) -> float:
        return float(self.value)


def reduce_fraction(p: int, q: int) -> Rational:
    """Reduce p/q modulo 1 to lowest terms with 0 <= p' < q'."""
    if q < 1:
        raise ValueError(f"denominator must be positive, got {q}")
    return Rational(p, q)


def _quotients_of_fraction(r: Fraction, k: int) -> list[int]:
    num, den = r.numerator, r.denominator
    out = []
    while den and len(out) < k:
        a, rem = divmod(num, den)
        out.append(a)
        num, den = den, rem
    return out


def _quotients_of_surd(x: QuadraticIrrational, k: int) -> list[int]:
    # write x = (P + sqrt(D)) / Q with Q | D - P^2, then run the classical
    # recurrence; everything stays in integers
    P, Q, D = x.a, x.c, x.b * x.b * x.d
    if x.b < 0:
        P, Q = -P, -Q
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    s = math.isqrt(D)
    out = []
    for _ in range(k):
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // -Q) - 1
        out.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return out


def convergents_from_quotients(quotients) -> list[Fraction]:
    h0, h1 = 1, quotients[0] if quotients else 0
    k0, k1 = 0, 1
    out = [Fraction(h1, k1)] if quotients else []
    for a in quotients[1:]:
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append(Fraction(h1, k1))
    return out


def partial_quotients(x, k: int) -> list[int]:
    """First k partial quotients of x (fewer if a rational CF terminates).

    ``x`` may be a BaseValue, a Fraction, or a float (whose exact binary
    value is expanded).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if isinstance(x, Rational):
        return _quotients_of_fraction(x.as_fraction(), k)
    if isinstance(x, QuadraticIrrational):
        return _quotients_of_surd(x, k)
    if isinstance(x, FloatValue):
        x = x.v
    return _quotients_of_fraction(Fraction(x), k)


def continued_fraction(x: BaseValue, k: int) -> ContinuedFraction:
    qs = partial_quotients(x, k)
    return ContinuedFraction(tuple(qs), tuple(convergents_from_quotients(qs)))


def dist_to_integers(x: float) -> float:
    """Distance from x to the nearest integer, in [0, 1/2]."""
    return abs(x - round(x))


def thomae_eval(x: BaseValue) -> ThomaeValue:
    """Thomae's function with the convention T(0) = 1; floats count as irrational."""
    if isinstance(x, Rational):
        if x.p == 0:
            return ThomaeValue(Fraction(1), "zero")
        return ThomaeValue(Fraction(1, x.q), "rational")
    return ThomaeValue(Fraction(0), "irrational")


def rationalize(x, qmax: int) -> Optional[Rational]:
    """Closest p/q with q <= qmax, if it lies within 1/(2*qmax**2) of x.

    Any such p/q is a convergent of x, so only convergents are scanned.
    Returns ``None`` when x should be treated as irrational.
    """
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    if isinstance(x, FloatValue):
        x = x.v
    exact = Fraction(x)
    best = None
    best_err = None
    for c in convergents_from_quotients(_quotients_of_fraction(exact, 64)):
        if c.denominator > qmax:
            break
        err = abs(exact - c)
        if best_err is None or err < best_err:
            best, best_err = c, err
    if best is None or best_err >= Fraction(1, 2 * qmax * qmax):
        return None
    return Rational.from_fraction(best)
